#ifndef TORSION_FORGE_LINALG_HPP
#define TORSION_FORGE_LINALG_HPP

// Dense complex linear algebra shared by every module: matrix aliases, the
// error type, tolerances and the rank machinery (SVD with an explicit
// ill-conditioning gate).

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace tforge {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

enum class ErrorKind {
  invalid_input,
  validation,
  ill_conditioned,
  branch_cut,
  breakdown,
  parse,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Numerical thresholds. Defaults follow the contract of each operation;
/// everything is relative to the norm of the data it is applied to.
struct Tolerances {
  double identity = 1e-10;   // exact-in-theory identities on O(1) inputs
  double rank = 1e-10;       // singular value cutoff relative to sigma_max
  double differential = 1e-12;
  double equivariance = 1e-9;
  double cluster = 1e-8;     // eigenvalue clustering radius (relative)
  double spectral = 1e-8;    // invariant-subspace residuals
  double check = 1e-9;       // report-level identity checks
  double scale_floor = 1.0;  // lower bound on the norm used to scale tests on differentials

  /// Defaults with `check` overridden by TORSION_FORGE_TOLERANCE when set.
  static Tolerances from_environment() {
    Tolerances t;
    if (const char* env = std::getenv("TORSION_FORGE_TOLERANCE")) {
      char* end = nullptr;
      double v = std::strtod(env, &end);
      if (end != env && v > 0.0) t.check = v;
    }
    return t;
  }
};

/// max(|m|, floor), used to scale residuals of maps that may vanish.
inline double norm_floor(const CMatrix& m, double floor) { return std::max(m.size() == 0 ? 0.0 : m.norm(), floor); }

inline double norm_or_one(const CMatrix& m) {
  double n = m.size() == 0 ? 0.0 : m.norm();
  return n > 0.0 ? n : 1.0;
}

inline double relative_error(cplx a, cplx b) {
  double scale = std::max(std::abs(a), std::abs(b));
  if (scale == 0.0) return 0.0;
  return std::abs(a - b) / scale;
}

inline CMatrix identity(Eigen::Index n) { return CMatrix::Identity(n, n); }

/// Result of a rank-revealing SVD. Columns of `range` span the column space,
/// columns of `kernel` span the null space (both orthonormal).
struct RankInfo {
  Eigen::Index rank = 0;
  CMatrix range;
  CMatrix coimage;  // orthonormal complement of the kernel
  CMatrix kernel;
  Eigen::VectorXd singular_values;
};

/// Rank with threshold `rel * max(sigma_max, floor)`. A singular value within
/// a factor of ten of the threshold makes the rank ambiguous and raises
/// ErrorKind::ill_conditioned instead of guessing.
inline RankInfo rank_info(const CMatrix& a, double rel, const std::string& context = "matrix", double floor = 0.0) {
  RankInfo out;
  const Eigen::Index rows = a.rows(), cols = a.cols();
  if (rows == 0 || cols == 0) {
    out.range = CMatrix(rows, 0);
    out.coimage = CMatrix(cols, 0);
    out.kernel = identity(cols);
    return out;
  }
  Eigen::BDCSVD<CMatrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  out.singular_values = svd.singularValues();
  const double smax = std::max(out.singular_values(0), floor);
  const double thr = rel * smax;
  Eigen::Index r = 0;
  for (Eigen::Index k = 0; k < out.singular_values.size(); ++k) {
    const double s = out.singular_values(k);
    if (smax > 0.0 && s > thr / 10.0 && s < thr * 10.0) {
      throw Error(ErrorKind::ill_conditioned,
                  context + ": ill-conditioned rank (singular value " + std::to_string(s) +
                      " within a factor 10 of threshold " + std::to_string(thr) + ")");
    }
    if (s > thr && smax > 0.0) ++r;
  }
  out.rank = r;
  out.range = svd.matrixU().leftCols(r);
  out.coimage = svd.matrixV().leftCols(r);
  out.kernel = svd.matrixV().rightCols(cols - r);
  return out;
}

/// Picks `count` columns of `m` by column-pivoted QR. The selection is
/// deterministic, and on projector matrices that already are coordinate
/// projections it returns standard basis vectors.
inline CMatrix pivot_columns(const CMatrix& m, Eigen::Index count) {
  if (count == 0) return CMatrix(m.rows(), 0);
  Eigen::ColPivHouseholderQR<CMatrix> qr(m);
  const auto& perm = qr.colsPermutation().indices();
  std::vector<Eigen::Index> chosen(perm.data(), perm.data() + count);
  std::sort(chosen.begin(), chosen.end());
  CMatrix out(m.rows(), count);
  for (Eigen::Index k = 0; k < count; ++k) out.col(k) = m.col(chosen[static_cast<std::size_t>(k)]);
  return out;
}

/// Solves basis * x = target assuming target lies in the span of basis.
/// Writes the residual relative to max(|target|, scale).
inline CMatrix coordinates_in(const CMatrix& basis, const CMatrix& target, double* residual = nullptr,
                              double scale = 0.0) {
  const double denom = std::max({target.size() == 0 ? 0.0 : target.norm(), scale, 1e-300});
  if (basis.cols() == 0) {
    if (residual) *residual = target.size() == 0 ? 0.0 : target.norm() / denom;
    return CMatrix(0, target.cols());
  }
  CMatrix x = basis.colPivHouseholderQr().solve(target);
  if (residual) *residual = target.size() == 0 ? 0.0 : (basis * x - target).norm() / denom;
  return x;
}

/// Sets m to zero when it is negligible against `scale`. Restricted maps
/// that vanish in exact arithmetic come out as roundoff, and a relative rank
/// test would otherwise read that noise as full rank.
inline void scrub(CMatrix& m, double scale, double rel = 1e-11) {
  if (m.size() > 0 && m.norm() <= rel * scale) m.setZero();
}

inline cplx determinant(const CMatrix& m) {
  if (m.rows() == 0) return cplx{1.0, 0.0};
  return m.partialPivLu().determinant();
}

/// True when z lies on the closed negative real axis (the cut of the
/// principal logarithm), up to a relative tolerance on the imaginary part.
inline bool on_branch_cut(cplx z, double rel = 1e-12) {
  if (z == cplx{0.0, 0.0}) return true;
  return z.real() <= 0.0 && std::abs(z.imag()) <= rel * std::abs(z);
}

/// z^n by repeated multiplication; exact sign handling for integer n.
inline cplx int_pow(cplx z, int n) {
  cplx base = n < 0 ? 1.0 / z : z;
  cplx out{1.0, 0.0};
  for (unsigned k = static_cast<unsigned>(n < 0 ? -n : n); k > 0; k >>= 1) {
    if (k & 1u) out *= base;
    base *= base;
  }
  return out;
}

/// Principal power z^e with a complex exponent.
inline cplx principal_pow(cplx z, cplx e) { return std::exp(e * std::log(z)); }

}  // namespace tforge

#endif  // TORSION_FORGE_LINALG_HPP
