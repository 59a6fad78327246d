#ifndef TORSION_FORGE_TORSION_HPP
#define TORSION_FORGE_TORSION_HPP

// Symmetric bilinear torsion: the value of the form induced on det H(C)
// through the canonical isomorphism det C = det H(C), its equivariant
// refinement as a per-irrep value map, and the Milnor anomaly formula for a
// change of the fiberwise forms.

#include "torsion_forge/cochain.hpp"
#include "torsion_forge/rng.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace tforge {

/// Optional randomization of the splitting C^i = im d ⊕ lift(H^i) ⊕ S^i.
/// The torsion value does not depend on it; tests use it to verify that.
struct SplittingOptions {
  std::optional<std::uint64_t> seed;
};

/// Per-degree bases [d(S^{i-1}), h^i, S^i] of C^i.
inline std::vector<CMatrix> adapted_bases(const BilinearComplex& c, const CohomologyBasis& h,
                                          const SplittingOptions& split, const Tolerances& tol) {
  const std::size_t n = c.degrees();
  std::optional<Rng> rng;
  if (split.seed) rng.emplace(*split.seed);

  std::vector<CMatrix> coimage(n);
  for (std::size_t i = 0; i < n; ++i) {
    const RankInfo info = rank_info(c.out(i), tol.rank, "d_" + std::to_string(i), tol.scale_floor);
    CMatrix s = info.coimage;
    if (rng && s.cols() > 0) {
      s = s * rng->near_identity(s.cols(), 0.4);
      if (info.kernel.cols() > 0) s += info.kernel * rng->matrix(info.kernel.cols(), s.cols(), 0.7);
    }
    coimage[i] = s;
  }

  std::vector<CMatrix> bases(n);
  for (std::size_t i = 0; i < n; ++i) {
    const CMatrix image = i > 0 ? CMatrix(c.d[i - 1] * coimage[i - 1]) : CMatrix(c.dims[i], 0);
    CMatrix lift = h.representatives.at(i);
    if (lift.rows() != c.dims[i])
      throw Error(ErrorKind::invalid_input, "cohomology representatives have wrong length in degree " + std::to_string(i));
    if (rng && lift.cols() > 0 && image.cols() > 0) lift += image * rng->matrix(image.cols(), lift.cols(), 0.7);
    const Eigen::Index total = image.cols() + lift.cols() + coimage[i].cols();
    if (total != c.dims[i])
      throw Error(ErrorKind::invalid_input,
                  "cohomology basis size inconsistent with the complex in degree " + std::to_string(i) + " (" +
                      std::to_string(total) + " != " + std::to_string(c.dims[i]) + ")");
    CMatrix b(c.dims[i], total);
    b << image, lift, coimage[i];
    bases[i] = std::move(b);
  }
  return bases;
}

/// Value b_{det H}(h, h) of the torsion form on the generator of det H
/// determined by the representatives h. With det C ordered by increasing
/// degree with exponents (-1)^i, the value is
///   prod_i det(B_i^T b_i B_i)^{(-1)^i},   B_i = [d(S^{i-1}), h^i, S^i].
/// This equals prod_i det(M_i)^{2(-1)^i} for M_i the coordinates of B_i in
/// any b_i-orthonormal basis, and every sign ambiguity of the canonical
/// isomorphism enters squared.
inline cplx torsion_form_value(const BilinearComplex& c, const CohomologyBasis& h, const SplittingOptions& split = {},
                               const Tolerances& tol = {}) {
  const std::vector<CMatrix> bases = adapted_bases(c, h, split, tol);
  cplx value{1.0, 0.0};
  for (std::size_t i = 0; i < c.degrees(); ++i) {
    const cplx det = determinant(bases[i].transpose() * c.gram[i] * bases[i]);
    if (det == cplx{0.0, 0.0})
      throw Error(ErrorKind::breakdown, "adapted basis is not a basis in degree " + std::to_string(i));
    value *= i % 2 == 0 ? det : 1.0 / det;
  }
  return value;
}

inline cplx torsion_form_value(const BilinearComplex& c, const Tolerances& tol = {}) {
  return torsion_form_value(c, cohomology_basis(c, tol), {}, tol);
}

struct TorsionEntry {
  IrrepBlock block;
  std::string name;
  cplx value;
  CohomologyBasis generator;        // in coordinates of the block subcomplex
  std::vector<CMatrix> embedding;   // block subcomplex -> C
};

/// The formal product over irreps, represented by its per-block values.
struct TorsionCharacter {
  Symmetry symmetry;
  std::vector<TorsionEntry> entries;

  /// Union of the per-block generators, mapped into C; a cohomology basis
  /// of the whole complex.
  CohomologyBasis lifted_generators() const {
    CohomologyBasis out;
    if (entries.empty()) return out;
    const std::size_t n = entries.front().embedding.size();
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<CMatrix> cols;
      Eigen::Index rows = entries.front().embedding[i].rows(), total = 0;
      for (const auto& e : entries) {
        cols.push_back(e.embedding[i] * e.generator.representatives[i]);
        total += cols.back().cols();
      }
      CMatrix m(rows, total);
      Eigen::Index at = 0;
      for (const auto& col : cols) {
        m.middleCols(at, col.cols()) = col;
        at += col.cols();
      }
      out.representatives.push_back(m);
      out.betti.push_back(total);
    }
    return out;
  }
};

struct CharacterValue {
  cplx value;
  std::vector<std::string> warnings;
};

/// prod_blocks value^{exponent(g)} with principal complex powers. Integer
/// exponents use exact integer powers; at the identity all exponents are 1.
inline CharacterValue evaluate_product(const CharacterTable& t, const std::vector<IrrepBlock>& blocks,
                                       const std::vector<cplx>& values, ElementIndex g) {
  CharacterValue out{cplx{1.0, 0.0}, {}};
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    const cplx e = block_exponent(t, blocks[k], g);
    const cplx v = values[k];
    const double rounded = std::round(e.real());
    if (std::abs(e.imag()) < 1e-14 && std::abs(e.real() - rounded) < 1e-14) {
      out.value *= int_pow(v, static_cast<int>(rounded));
      continue;
    }
    if (on_branch_cut(v, 1e-12))
      out.warnings.push_back("value for " + block_name(t, blocks[k]) +
                             " lies on the negative real axis; principal branch used for a non-integer exponent");
    out.value *= principal_pow(v, e);
  }
  return out;
}

inline CharacterValue evaluate_torsion_character(const TorsionCharacter& tc, ElementIndex g) {
  std::vector<IrrepBlock> blocks;
  std::vector<cplx> values;
  for (const auto& e : tc.entries) {
    blocks.push_back(e.block);
    values.push_back(e.value);
  }
  return evaluate_product(tc.symmetry.chars(), blocks, values, g);
}

/// Supplied generators per block, keyed by block name.
using BlockGenerators = std::vector<std::pair<std::string, CohomologyBasis>>;

inline const CohomologyBasis* find_generator(const BlockGenerators& given, const std::string& name) {
  for (const auto& [key, h] : given)
    if (key == name) return &h;
  return nullptr;
}

/// Per-block torsion values of the isotypical decomposition. Without an
/// action the complex is treated as carrying the trivial group.
inline TorsionCharacter equivariant_torsion(const BilinearComplex& c, const BlockGenerators& given = {},
                                            const Tolerances& tol = {}) {
  require_valid(c, tol);
  TorsionCharacter tc;
  if (!c.action) {
    tc.symmetry = trivial_group();
    TorsionEntry e{{{0}}, "trivial", {}, {}, {}};
    const CohomologyBasis* h = find_generator(given, "trivial");
    e.generator = h ? *h : cohomology_basis(c, tol);
    e.value = torsion_form_value(c, e.generator, {}, tol);
    for (std::size_t i = 0; i < c.degrees(); ++i) e.embedding.push_back(identity(c.dims[i]));
    tc.entries.push_back(std::move(e));
    return tc;
  }
  tc.symmetry = c.action->symmetry;
  for (const IrrepBlock& b : irrep_blocks(tc.symmetry.chars())) {
    EmbeddedSubcomplex sub = block_subcomplex(c, b, tol);
    TorsionEntry e{b, block_name(tc.symmetry.chars(), b), {}, {}, sub.embedding};
    const CohomologyBasis* h = find_generator(given, e.name);
    e.generator = h ? *h : cohomology_basis(sub.complex, tol);
    e.value = torsion_form_value(sub.complex, e.generator, {}, tol);
    tc.entries.push_back(std::move(e));
  }
  return tc;
}

/// Continuous logarithms of the per-block torsion values along a path of
/// complexes t in [0,1] (same action, same generators throughout). Steps
/// are halved until every value turns by less than 0.5 rad per step, so the
/// accumulated log changes are branch free.
struct TrackedLogs {
  std::vector<IrrepBlock> blocks;
  std::vector<cplx> start;   // principal log at t = 0
  std::vector<cplx> change;  // log at t = 1 minus log at t = 0
  int steps = 0;
};

template <class Path>
TrackedLogs track_torsion_logs(const Path& path, int initial_steps = 8, const Tolerances& tol = {}) {
  auto values = [&](double t) {
    std::vector<cplx> v;
    for (const auto& e : equivariant_torsion(path(t), {}, tol).entries) v.push_back(e.value);
    return v;
  };
  TrackedLogs out;
  const TorsionCharacter first = equivariant_torsion(path(0.0), {}, tol);
  std::vector<cplx> prev;
  for (const auto& e : first.entries) {
    out.blocks.push_back(e.block);
    out.start.push_back(std::log(e.value));
    prev.push_back(e.value);
  }
  out.change.assign(prev.size(), cplx{0.0, 0.0});
  double t = 0.0, h = 1.0 / std::max(1, initial_steps);
  while (t < 1.0) {
    const double next = std::min(1.0, t + h);
    const std::vector<cplx> cur = values(next);
    bool ok = true;
    std::vector<cplx> step(cur.size());
    for (std::size_t k = 0; k < cur.size() && ok; ++k) {
      step[k] = std::log(cur[k] / prev[k]);
      ok = std::abs(step[k].imag()) < 0.5;
    }
    if (!ok) {
      h /= 2.0;
      if (h < 1e-9) throw Error(ErrorKind::breakdown, "torsion value winds too fast along the path");
      continue;
    }
    for (std::size_t k = 0; k < cur.size(); ++k) out.change[k] += step[k];
    prev = cur;
    t = next;
    ++out.steps;
  }
  return out;
}

/// exp(sum_blocks exponent_W(g) * change_W): the ratio of the torsion
/// characters at the path ends, evaluated at g along the tracked branch.
inline cplx tracked_ratio(const CharacterTable& t, const TrackedLogs& logs, ElementIndex g) {
  cplx e{0.0, 0.0};
  for (std::size_t k = 0; k < logs.blocks.size(); ++k) e += block_exponent(t, logs.blocks[k], g) * logs.change[k];
  return std::exp(e);
}

/// Principal matrix logarithm; eigenvalues on the closed negative real axis
/// are rejected.
inline CMatrix principal_log(const CMatrix& a, const std::string& context) {
  if (a.rows() == 0) return a;
  Eigen::ComplexEigenSolver<CMatrix> es(a, false);
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k)
    if (on_branch_cut(es.eigenvalues()(k), 1e-12))
      throw Error(ErrorKind::branch_cut, context + ": eigenvalue on the closed negative real axis");
  return a.log();
}

struct AnomalyPoint {
  int ind_g = 0;        // index of the critical point within the fixed set
  CMatrix form;         // b on the fiber
  CMatrix form_prime;   // b' on the fiber
  CMatrix action;       // g acting on the fiber
};

/// prod_x exp(Tr[g log(b^{-1} b')])^{(-1)^{ind_g(x)}} over the fixed
/// critical points: the predicted ratio b'/b of Milnor torsions at g.
inline cplx milnor_anomaly_ratio(const std::vector<AnomalyPoint>& points) {
  cplx exponent{0.0, 0.0};
  for (const auto& p : points) {
    if (p.form.rows() == 0) continue;
    const CMatrix quotient = p.form.partialPivLu().solve(p.form_prime);
    const CMatrix log = principal_log(
        quotient, "log(b'/b) undefined; b and b' are not in the same homotopy class of nondegenerate forms");
    const cplx tr = (p.action * log).trace();
    exponent += p.ind_g % 2 == 0 ? tr : -tr;
  }
  return std::exp(exponent);
}

}  // namespace tforge

#endif  // TORSION_FORGE_TORSION_HPP
