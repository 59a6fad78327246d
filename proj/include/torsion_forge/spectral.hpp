#ifndef TORSION_FORGE_SPECTRAL_HPP
#define TORSION_FORGE_SPECTRAL_HPP

// The bilinear Laplacian d*_b d + d d*_b of a complex with symmetric forms,
// its generalized eigenspaces, g-weighted determinants of the part above a
// cutoff, and the spectral-cutoff torsion built from them.

#include "torsion_forge/torsion.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace tforge {

/// d*_{b,i} = gram_i^{-1} d_i^T gram_{i+1} : C^{i+1} -> C^i.
inline CMatrix bilinear_adjoint(const BilinearComplex& c, std::size_t i) {
  if (i + 1 >= c.degrees()) throw Error(ErrorKind::invalid_input, "no differential out of the top degree");
  if (c.dims[i] == 0) return CMatrix(0, c.dims[i + 1]);
  return c.gram[i].partialPivLu().solve(c.d[i].transpose() * c.gram[i + 1]);
}

inline std::vector<CMatrix> bilinear_laplacian(const BilinearComplex& c) {
  std::vector<CMatrix> out;
  for (std::size_t i = 0; i < c.degrees(); ++i) {
    CMatrix a = CMatrix::Zero(c.dims[i], c.dims[i]);
    if (i + 1 < c.degrees()) a += bilinear_adjoint(c, i) * c.d[i];
    if (i > 0) a += c.d[i - 1] * bilinear_adjoint(c, i - 1);
    out.push_back(std::move(a));
  }
  return out;
}

struct EigenSpace {
  cplx lambda;
  CMatrix basis;       // orthonormal columns spanning the generalized eigenspace
  int order = 1;       // smallest k with (A - lambda)^k = 0 on the space
};

/// Generalized eigenspaces of one operator. `dual` holds the rows of the
/// inverse of [basis_1 ... basis_k]: dual[k] * basis[l] = delta_kl, and
/// basis[k] * dual[k] is the spectral projector onto space k.
struct OperatorSpectrum {
  CMatrix op;
  std::vector<EigenSpace> spaces;
  std::vector<CMatrix> dual;
  std::vector<std::string> warnings;

  CMatrix projector(std::size_t k) const { return spaces[k].basis * dual[k]; }
};

struct SpectralDecomposition {
  std::vector<OperatorSpectrum> degrees;

  std::vector<std::string> warnings() const {
    std::vector<std::string> w;
    for (std::size_t i = 0; i < degrees.size(); ++i)
      for (const auto& s : degrees[i].warnings) w.push_back("degree " + std::to_string(i) + ": " + s);
    return w;
  }
};

namespace detail {

inline double cluster_scale(cplx a, cplx b) { return std::max(std::abs(a), std::abs(b)); }

inline CMatrix null_space(const CMatrix& m, Eigen::Index dim) {
  Eigen::BDCSVD<CMatrix> svd(m, Eigen::ComputeFullV);
  return svd.matrixV().rightCols(dim);
}

inline CMatrix stack_columns(const std::vector<EigenSpace>& spaces, Eigen::Index rows) {
  Eigen::Index cols = 0;
  for (const auto& s : spaces) cols += s.basis.cols();
  CMatrix v(rows, cols);
  Eigen::Index at = 0;
  for (const auto& s : spaces) {
    v.middleCols(at, s.basis.cols()) = s.basis;
    at += s.basis.cols();
  }
  return v;
}

inline double condition_number(const CMatrix& v) {
  if (v.cols() == 0) return 1.0;
  Eigen::JacobiSVD<CMatrix> svd(v);
  const auto& s = svd.singularValues();
  return s(s.size() - 1) > 0.0 ? s(0) / s(s.size() - 1) : std::numeric_limits<double>::infinity();
}

}  // namespace detail

/// Generalized eigenspaces of a square matrix. Eigenvalues are clustered at
/// relative radius `tol.cluster`; each cluster's space is the null space of
/// prod (A - mu) over its members. When the resulting eigenbasis is
/// ill-conditioned the two closest clusters are merged, with a warning.
inline OperatorSpectrum decompose_operator(const CMatrix& a, const Tolerances& tol = {}) {
  OperatorSpectrum out;
  out.op = a;
  const Eigen::Index n = a.rows();
  if (n == 0) return out;
  Eigen::ComplexEigenSolver<CMatrix> es(a, false);
  if (es.info() != Eigen::Success) throw Error(ErrorKind::breakdown, "eigenvalue computation did not converge");
  const double scale = a.norm();
  std::vector<cplx> ev(es.eigenvalues().data(), es.eigenvalues().data() + n);
  for (auto& z : ev)
    if (std::abs(z) <= 1e-10 * scale) z = 0.0;
  std::sort(ev.begin(), ev.end(), [](cplx x, cplx y) {
    return std::abs(x) != std::abs(y) ? std::abs(x) < std::abs(y) : std::arg(x) < std::arg(y);
  });

  // single-linkage clustering
  std::vector<std::vector<cplx>> clusters;
  std::vector<bool> used(ev.size(), false);
  for (std::size_t k = 0; k < ev.size(); ++k) {
    if (used[k]) continue;
    std::vector<cplx> cl{ev[k]};
    used[k] = true;
    for (bool grew = true; grew;) {
      grew = false;
      for (std::size_t l = 0; l < ev.size(); ++l) {
        if (used[l]) continue;
        for (cplx m : cl) {
          const double s = detail::cluster_scale(m, ev[l]);
          if (std::abs(m - ev[l]) <= tol.cluster * s) {
            cl.push_back(ev[l]);
            used[l] = true;
            grew = true;
            break;
          }
        }
      }
    }
    clusters.push_back(std::move(cl));
  }

  auto build = [&](const std::vector<std::vector<cplx>>& cls) {
    std::vector<EigenSpace> spaces;
    for (const auto& cl : cls) {
      CMatrix prod = identity(n);
      for (cplx mu : cl) prod = (a - mu * identity(n)) * prod;
      // normalize so the null-space SVD is scale free
      const double pn = prod.norm();
      if (pn > 0.0) prod /= pn;
      EigenSpace s;
      cplx mean{0.0, 0.0};
      for (cplx mu : cl) mean += mu;
      mean /= static_cast<double>(cl.size());
      s.lambda = mean;
      s.basis = detail::null_space(prod, static_cast<Eigen::Index>(cl.size()));
      spaces.push_back(std::move(s));
    }
    return spaces;
  };

  std::vector<EigenSpace> spaces = build(clusters);
  while (detail::condition_number(detail::stack_columns(spaces, n)) > 1e8) {
    if (clusters.size() < 2) throw Error(ErrorKind::ill_conditioned, "generalized eigenbasis is singular");
    std::size_t bi = 0, bj = 1;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < clusters.size(); ++i)
      for (std::size_t j = i + 1; j < clusters.size(); ++j) {
        const double dist = std::abs(spaces[i].lambda - spaces[j].lambda);
        if (dist < best) best = dist, bi = i, bj = j;
      }
    const double rel = best / std::max({std::abs(spaces[bi].lambda), std::abs(spaces[bj].lambda), 1e-300});
    if (rel > 1e-3)
      throw Error(ErrorKind::ill_conditioned,
                  "generalized eigenbasis is ill-conditioned and the nearest eigenvalues are far apart");
    out.warnings.push_back("merged eigenvalue clusters at relative distance " + std::to_string(rel));
    clusters[bi].insert(clusters[bi].end(), clusters[bj].begin(), clusters[bj].end());
    clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(bj));
    spaces = build(clusters);
  }

  const CMatrix v = detail::stack_columns(spaces, n);
  const CMatrix vinv = v.partialPivLu().inverse();
  Eigen::Index at = 0;
  for (auto& s : spaces) {
    const Eigen::Index m = s.basis.cols();
    out.dual.push_back(vinv.middleRows(at, m));
    at += m;
    const CMatrix nil = s.basis.adjoint() * a * s.basis - s.lambda * identity(m);
    CMatrix power = nil;
    s.order = static_cast<int>(m);
    for (int k = 1; k <= m; ++k) {
      if (power.norm() <= 1e-7 * std::pow(std::max(scale, 1e-300), k)) {
        s.order = k;
        break;
      }
      power = power * nil;
    }
  }
  out.spaces = std::move(spaces);
  return out;
}

inline SpectralDecomposition generalized_eigenspaces(const BilinearComplex& c, const Tolerances& tol = {}) {
  SpectralDecomposition s;
  for (const CMatrix& a : bilinear_laplacian(c)) s.degrees.push_back(decompose_operator(a, tol));
  return s;
}

/// Residuals of the structural properties of a decomposition of c.
struct SpectralResiduals {
  double completeness = 0.0;     // |sum of dims - dim C^i|
  double invariance = 0.0;       // |A V - V (V^H A V)| / |A| |V|
  double nilpotency = 0.0;       // |(A - lambda)^order V| / |A|^order |V|
  double orthogonality = 0.0;    // |V_l^T b V_m| / |V_l| |b| |V_m| for l != m
  double d_invariance = 0.0;     // d maps the lambda-space of degree i into that of degree i+1
  double adjoint_invariance = 0.0;
};

namespace detail {

inline const EigenSpace* matching_space(const OperatorSpectrum& s, cplx lambda, double rel) {
  for (const auto& e : s.spaces)
    if (std::abs(e.lambda - lambda) <= rel * std::max({std::abs(e.lambda), std::abs(lambda), 1e-300}) ||
        (e.lambda == cplx{} && lambda == cplx{}))
      return &e;
  return nullptr;
}

inline double map_residual(const CMatrix& map, const EigenSpace& from, const OperatorSpectrum& target, double rel) {
  const CMatrix image = map * from.basis;
  const double denom = norm_or_one(map) * norm_or_one(from.basis);
  const EigenSpace* to = matching_space(target, from.lambda, rel);
  if (!to) return image.size() == 0 ? 0.0 : image.norm() / denom;
  const CMatrix proj = to->basis * to->basis.adjoint();
  return image.size() == 0 ? 0.0 : (image - proj * image).norm() / denom;
}

}  // namespace detail

inline SpectralResiduals spectral_residuals(const BilinearComplex& c, const SpectralDecomposition& s,
                                            const Tolerances& tol = {}) {
  SpectralResiduals r;
  for (std::size_t i = 0; i < c.degrees(); ++i) {
    const OperatorSpectrum& os = s.degrees[i];
    const CMatrix& a = os.op;
    const double an = norm_or_one(a);
    Eigen::Index total = 0;
    for (std::size_t k = 0; k < os.spaces.size(); ++k) {
      const EigenSpace& e = os.spaces[k];
      const Eigen::Index m = e.basis.cols();
      total += m;
      r.invariance = std::max(r.invariance, (a * e.basis - e.basis * (e.basis.adjoint() * a * e.basis)).norm() / an);
      CMatrix w = e.basis;
      for (int p = 0; p < e.order; ++p) w = (a - e.lambda * identity(a.rows())) * w;
      r.nilpotency = std::max(r.nilpotency, w.norm() / std::pow(an, e.order));
      for (std::size_t l = k + 1; l < os.spaces.size(); ++l) {
        const CMatrix pair = e.basis.transpose() * c.gram[i] * os.spaces[l].basis;
        r.orthogonality = std::max(r.orthogonality, pair.norm() / norm_or_one(c.gram[i]));
      }
      if (i + 1 < c.degrees())
        r.d_invariance = std::max(r.d_invariance, detail::map_residual(c.d[i], e, s.degrees[i + 1], 1e-6));
      if (i > 0)
        r.adjoint_invariance =
            std::max(r.adjoint_invariance, detail::map_residual(bilinear_adjoint(c, i - 1), e, s.degrees[i - 1], 1e-6));
    }
    r.completeness = std::max(r.completeness, std::abs(static_cast<double>(total - c.dims[i])));
  }
  (void)tol;
  return r;
}

/// Sorted distinct moduli |lambda| over all degrees.
inline std::vector<double> spectrum_moduli(const SpectralDecomposition& s) {
  std::vector<double> out;
  for (const auto& os : s.degrees)
    for (const auto& e : os.spaces) out.push_back(std::abs(e.lambda));
  std::sort(out.begin(), out.end());
  std::vector<double> uniq;
  for (double x : out)
    if (uniq.empty() || x - uniq.back() > 1e-8 * std::max(x, 1e-300)) uniq.push_back(x);
  return uniq;
}

/// Valid cutoffs spread over the spectrum: half the smallest nonzero modulus,
/// the geometric mean of each well-separated pair of consecutive moduli, and
/// twice the largest modulus. Without nonzero eigenvalues: {0, 1}.
inline std::vector<double> suggested_cutoffs(const SpectralDecomposition& s) {
  std::vector<double> nonzero;
  for (double m : spectrum_moduli(s))
    if (m > 0.0) nonzero.push_back(m);
  if (nonzero.empty()) return {0.0, 1.0};
  std::vector<double> out{0.5 * nonzero.front()};
  for (std::size_t k = 0; k + 1 < nonzero.size(); ++k)
    if (nonzero[k + 1] > nonzero[k] * (1.0 + 1e-4)) out.push_back(std::sqrt(nonzero[k] * nonzero[k + 1]));
  out.push_back(2.0 * nonzero.back());
  return out;
}

/// Cutoff partition C = Omega_[0,a] (+) complement, per degree, as column
/// bases together with the oblique projector onto Omega_[0,a] along the
/// complement (the sum of spectral projectors with |lambda| <= a).
struct CutoffPartition {
  double a = 0.0;
  std::vector<CMatrix> small;           // basis of Omega_[0,a] per degree
  std::vector<CMatrix> small_dual;      // rows: coordinates along the complement
  std::vector<CMatrix> large;           // basis of the complement per degree
  std::vector<CMatrix> large_dual;
  std::vector<std::vector<std::size_t>> large_spaces;  // indices into the degree spectrum
};

inline CutoffPartition spectral_cutoff(const SpectralDecomposition& s, double a) {
  if (!(a >= 0.0)) throw Error(ErrorKind::invalid_input, "cutoff must be nonnegative");
  CutoffPartition p;
  p.a = a;
  for (const auto& os : s.degrees) {
    std::vector<const CMatrix*> sb, sd, lb, ld;
    std::vector<std::size_t> idx;
    for (std::size_t k = 0; k < os.spaces.size(); ++k) {
      const double m = std::abs(os.spaces[k].lambda);
      if (m > 0.0 && std::abs(m - a) <= 1e-8 * std::max(m, a))
        throw Error(ErrorKind::invalid_input, "cutoff " + std::to_string(a) +
                                                  " collides with an eigenvalue modulus; choose a different cutoff");
      if (m <= a) {
        sb.push_back(&os.spaces[k].basis);
        sd.push_back(&os.dual[k]);
      } else {
        lb.push_back(&os.spaces[k].basis);
        ld.push_back(&os.dual[k]);
        idx.push_back(k);
      }
    }
    const Eigen::Index n = os.op.rows();
    auto hcat = [n](const std::vector<const CMatrix*>& ms) {
      Eigen::Index cols = 0;
      for (auto* m : ms) cols += m->cols();
      CMatrix out(n, cols);
      Eigen::Index at = 0;
      for (auto* m : ms) out.middleCols(at, m->cols()) = *m, at += m->cols();
      return out;
    };
    auto vcat = [n](const std::vector<const CMatrix*>& ms) {
      Eigen::Index rows = 0;
      for (auto* m : ms) rows += m->rows();
      CMatrix out(rows, n);
      Eigen::Index at = 0;
      for (auto* m : ms) out.middleRows(at, m->rows()) = *m, at += m->rows();
      return out;
    };
    p.small.push_back(hcat(sb));
    p.small_dual.push_back(vcat(sd));
    p.large.push_back(hcat(lb));
    p.large_dual.push_back(vcat(ld));
    p.large_spaces.push_back(std::move(idx));
  }
  return p;
}

/// The finite complex (Omega_[0,a], d) with the restricted form, in the
/// basis `small` of the partition.
inline BilinearComplex cutoff_subcomplex(const BilinearComplex& c, const CutoffPartition& p,
                                         const Tolerances& tol = {}) {
  BilinearComplex out;
  for (std::size_t i = 0; i < c.degrees(); ++i) {
    out.dims.push_back(p.small[i].cols());
    out.gram.push_back(p.small[i].transpose() * c.gram[i] * p.small[i]);
  }
  for (std::size_t i = 0; i + 1 < c.degrees(); ++i) {
    double res = 0.0;
    CMatrix di = coordinates_in(p.small[i + 1], c.d[i] * p.small[i], &res,
                                norm_floor(c.d[i], tol.scale_floor) * norm_or_one(p.small[i]));
    scrub(di, norm_floor(c.d[i], tol.scale_floor) * norm_or_one(p.small[i]) * norm_or_one(p.small_dual[i + 1]));
    out.d.push_back(std::move(di));
    if (res > 1e-7)
      throw Error(ErrorKind::ill_conditioned,
                  "spectral subcomplex is not d-invariant in degree " + std::to_string(i) + " (residual " +
                      std::to_string(res) + ")");
  }
  return out;
}

/// Principal log of lambda + N on one generalized eigenspace, with the
/// finite series log(1 + N/lambda).
inline CMatrix eigenspace_log(cplx lambda, const CMatrix& restricted) {
  if (on_branch_cut(lambda, 1e-12))
    throw Error(ErrorKind::branch_cut, "eigenvalue on the closed negative real axis; principal log undefined");
  const Eigen::Index m = restricted.rows();
  const CMatrix x = (restricted - lambda * identity(m)) / lambda;
  CMatrix out = std::log(lambda) * identity(m);
  CMatrix power = identity(m);
  for (Eigen::Index k = 1; k < m; ++k) {
    power = power * x;
    out += (k % 2 == 1 ? 1.0 : -1.0) / static_cast<double>(k) * power;
  }
  return out;
}

/// Tr[g log A] restricted to the spaces of `s` with |lambda| > a.
inline cplx trace_g_log(const OperatorSpectrum& s, const CMatrix& g, double a = 0.0) {
  const double gn = norm_or_one(g) * norm_or_one(s.op);
  if (g.size() > 0 && (g * s.op - s.op * g).norm() > 1e-9 * gn)
    throw Error(ErrorKind::validation, "group element does not commute with the Laplacian");
  cplx tr{0.0, 0.0};
  for (std::size_t k = 0; k < s.spaces.size(); ++k) {
    const EigenSpace& e = s.spaces[k];
    if (std::abs(e.lambda) <= a) continue;
    const CMatrix restricted = s.dual[k] * s.op * e.basis;
    tr += (s.dual[k] * g * e.basis * eigenspace_log(e.lambda, restricted)).trace();
  }
  return tr;
}

/// det'(A restricted to |lambda| > a)(g) = exp(Tr[g log A]).
inline cplx det_prime_g(const OperatorSpectrum& s, const CMatrix& g, double a = 0.0) {
  return std::exp(trace_g_log(s, g, a));
}

/// Plain determinant of the part with |lambda| > a (branch free).
inline cplx det_prime(const OperatorSpectrum& s, double a = 0.0) {
  cplx det{1.0, 0.0};
  for (std::size_t k = 0; k < s.spaces.size(); ++k) {
    const EigenSpace& e = s.spaces[k];
    if (std::abs(e.lambda) <= a) continue;
    det *= determinant(s.dual[k] * s.op * e.basis);
  }
  return det;
}

/// Spectral-cutoff torsion of a complex without reference to a group:
/// the torsion of Omega_[0,a] on the projected representatives times
/// prod_i det'(A_i)^{(-1)^i i}.
struct CutoffTorsion {
  cplx small_value;
  cplx value;
  std::vector<std::vector<cplx>> complement_spectrum;
};

inline CutoffTorsion cutoff_torsion(const BilinearComplex& c, const CohomologyBasis& h, double a,
                                    const Tolerances& tol = {}) {
  const SpectralDecomposition s = generalized_eigenspaces(c, tol);
  const CutoffPartition p = spectral_cutoff(s, a);
  const BilinearComplex omega = cutoff_subcomplex(c, p, tol);
  CohomologyBasis moved;
  for (std::size_t i = 0; i < c.degrees(); ++i) {
    moved.representatives.push_back(p.small_dual[i] * h.representatives.at(i));
    moved.betti.push_back(h.representatives[i].cols());
    if (moved.betti.back() > 0 &&
        rank_info(moved.representatives.back(), 1e-8, "projected representatives").rank != moved.betti.back())
      throw Error(ErrorKind::ill_conditioned, "projection of cohomology representatives lost rank in degree " +
                                                  std::to_string(i));
  }
  CutoffTorsion out;
  out.small_value = torsion_form_value(omega, moved, {}, tol);
  out.value = out.small_value;
  for (std::size_t i = 0; i < c.degrees(); ++i) {
    std::vector<cplx> spec;
    for (std::size_t k : p.large_spaces[i])
      for (Eigen::Index m = 0; m < s.degrees[i].spaces[k].basis.cols(); ++m) spec.push_back(s.degrees[i].spaces[k].lambda);
    out.complement_spectrum.push_back(std::move(spec));
    if (i == 0) continue;
    const cplx det = det_prime(s.degrees[i], a);
    const int power = (i % 2 == 0 ? 1 : -1) * static_cast<int>(i);
    out.value *= int_pow(det, power);
  }
  return out;
}

struct RsTorsionResult {
  double cutoff = 0.0;
  TorsionCharacter character;          // full per-block values
  std::vector<cplx> small_values;      // per block: torsion of Omega_[0,a]
  std::vector<std::vector<cplx>> complement_spectrum;  // full complex, per degree
  ElementIndex element = 0;
  cplx value_at_element;               // small part at g times prod det'(g)^{(-1)^i i}
  std::vector<std::string> warnings;
};

/// Spectral-cutoff torsion per irrep block, using the same block
/// subcomplexes and (default) generators as equivariant_torsion, and its
/// evaluation at g.
inline RsTorsionResult rs_torsion(const BilinearComplex& c, double a, const BlockGenerators& given = {},
                                  std::optional<ElementIndex> element = std::nullopt, const Tolerances& tol = {}) {
  require_valid(c, tol);
  RsTorsionResult r;
  r.cutoff = a;
  std::vector<IrrepBlock> blocks;
  std::vector<EmbeddedSubcomplex> subs;
  if (!c.action) {
    r.character.symmetry = trivial_group();
    EmbeddedSubcomplex self{c, {}};
    for (std::size_t i = 0; i < c.degrees(); ++i) self.embedding.push_back(identity(c.dims[i]));
    blocks.push_back({{0}});
    subs.push_back(std::move(self));
  } else {
    r.character.symmetry = c.action->symmetry;
    for (const IrrepBlock& b : irrep_blocks(r.character.symmetry.chars())) {
      blocks.push_back(b);
      subs.push_back(block_subcomplex(c, b, tol));
    }
  }
  const CharacterTable& t = r.character.symmetry.chars();
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    const std::string name = c.action ? block_name(t, blocks[k]) : std::string("trivial");
    const CohomologyBasis* h = find_generator(given, name);
    const CohomologyBasis gen = h ? *h : cohomology_basis(subs[k].complex, tol);
    const CutoffTorsion ct = cutoff_torsion(subs[k].complex, gen, a, tol);
    r.small_values.push_back(ct.small_value);
    r.character.entries.push_back({blocks[k], name, ct.value, gen, subs[k].embedding});
  }

  const ElementIndex g = element.value_or(r.character.symmetry.g().identity());
  r.element = g;
  CharacterValue small = evaluate_product(t, blocks, r.small_values, g);
  r.warnings = small.warnings;
  const SpectralDecomposition full = generalized_eigenspaces(c, tol);
  for (const auto& w : full.warnings()) r.warnings.push_back(w);
  spectral_cutoff(full, a);  // collision check on the full spectrum
  cplx exponent{0.0, 0.0};
  for (std::size_t i = 0; i < c.degrees(); ++i) {
    std::vector<cplx> spec;
    for (const auto& e : full.degrees[i].spaces)
      if (std::abs(e.lambda) > a)
        for (Eigen::Index m = 0; m < e.basis.cols(); ++m) spec.push_back(e.lambda);
    r.complement_spectrum.push_back(std::move(spec));
    if (i == 0) continue;
    const CMatrix rho = c.action ? (*c.action)(g, i) : identity(c.dims[i]);
    const cplx tr = trace_g_log(full.degrees[i], rho, a);
    exponent += (i % 2 == 0 ? 1.0 : -1.0) * static_cast<double>(i) * tr;
  }
  r.value_at_element = small.value * std::exp(exponent);
  return r;
}

/// Checks that the part of the complex above the cutoff is acyclic, so all
/// cohomology lives in Omega_[0,a]. Returns the largest Betti number found.
inline Eigen::Index complement_betti(const BilinearComplex& c, const CutoffPartition& p) {
  BilinearComplex comp;
  for (std::size_t i = 0; i < c.degrees(); ++i) {
    comp.dims.push_back(p.large[i].cols());
    comp.gram.push_back(p.large[i].transpose() * c.gram[i] * p.large[i]);
  }
  for (std::size_t i = 0; i + 1 < c.degrees(); ++i) {
    CMatrix di = p.large_dual[i + 1] * c.d[i] * p.large[i];
    scrub(di, norm_floor(c.d[i], 1.0) * norm_or_one(p.large[i]) * norm_or_one(p.large_dual[i + 1]));
    comp.d.push_back(std::move(di));
  }
  Eigen::Index worst = 0;
  for (auto b : cohomology_basis(comp).betti) worst = std::max(worst, b);
  return worst;
}

}  // namespace tforge

#endif  // TORSION_FORGE_SPECTRAL_HPP
