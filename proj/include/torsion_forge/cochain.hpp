#ifndef TORSION_FORGE_COCHAIN_HPP
#define TORSION_FORGE_COCHAIN_HPP

// Finite cochain complexes 0 -> C^0 -> ... -> C^n -> 0 of complex vector
// spaces, each degree carrying a nondegenerate symmetric bilinear form and
// optionally a group action by chain maps preserving the forms.

#include "torsion_forge/groups.hpp"

#include <optional>
#include <vector>

namespace tforge {

struct ComplexAction {
  Symmetry symmetry;
  std::vector<std::vector<CMatrix>> matrices;  // [element][degree]

  GroupRepresentation representation(std::size_t degree) const {
    GroupRepresentation rep{symmetry.group, {}};
    for (const auto& per_degree : matrices) rep.matrices.push_back(per_degree.at(degree));
    return rep;
  }
  const CMatrix& operator()(ElementIndex g, std::size_t degree) const { return matrices.at(g).at(degree); }
};

struct BilinearComplex {
  std::vector<Eigen::Index> dims;  // degrees 0..n
  std::vector<CMatrix> d;          // d[i] : C^i -> C^{i+1}, i = 0..n-1
  std::vector<CMatrix> gram;       // symmetric, one per degree
  std::optional<ComplexAction> action;

  std::size_t degrees() const { return dims.size(); }
  Eigen::Index dim(std::size_t i) const { return dims.at(i); }
  Eigen::Index total_dim() const {
    Eigen::Index s = 0;
    for (auto x : dims) s += x;
    return s;
  }

  /// d_i : C^i -> C^{i+1}; zero maps at the ends of the complex.
  CMatrix out(std::size_t i) const {
    if (i + 1 < dims.size()) return d.at(i);
    return CMatrix::Zero(0, dims.at(i));
  }
  /// d_{i-1} : C^{i-1} -> C^i.
  CMatrix in(std::size_t i) const {
    if (i > 0) return d.at(i - 1);
    return CMatrix::Zero(dims.at(0), 0);
  }
};

/// A subcomplex materialized in an explicit basis: column block
/// `embedding[i]` maps coordinates of the subcomplex into C^i.
struct EmbeddedSubcomplex {
  BilinearComplex complex;
  std::vector<CMatrix> embedding;
};

inline Diagnostic validate_complex(const BilinearComplex& c, const Tolerances& tol = {}) {
  const std::size_t n = c.degrees();
  if (n == 0) return Diagnostic::fail("complex has no degrees");
  if (c.d.size() + 1 != n) return Diagnostic::fail("need exactly one differential between consecutive degrees");
  if (c.gram.size() != n) return Diagnostic::fail("need one Gram matrix per degree");
  for (std::size_t i = 0; i < n; ++i) {
    if (c.dims[i] < 0) return Diagnostic::fail("negative dimension", {i});
    if (c.gram[i].rows() != c.dims[i] || c.gram[i].cols() != c.dims[i])
      return Diagnostic::fail("Gram matrix has wrong shape in degree " + std::to_string(i), {i});
    if (i + 1 < n && (c.d[i].rows() != c.dims[i + 1] || c.d[i].cols() != c.dims[i]))
      return Diagnostic::fail("differential has wrong shape in degree " + std::to_string(i), {i});
  }
  for (std::size_t i = 0; i + 2 < n; ++i) {
    const double err = (c.d[i + 1] * c.d[i]).norm();
    if (err > tol.differential * std::max(1.0, c.d[i + 1].norm() * c.d[i].norm()))
      return Diagnostic::fail("d^2 != 0 from degree " + std::to_string(i) + " (residual " + std::to_string(err) + ")",
                              {i});
  }
  for (std::size_t i = 0; i < n; ++i) {
    const CMatrix& b = c.gram[i];
    if (b.size() == 0) continue;
    if ((b - b.transpose()).norm() > tol.identity * norm_or_one(b))
      return Diagnostic::fail("Gram matrix is not symmetric in degree " + std::to_string(i), {i});
    try {
      if (rank_info(b, tol.rank, "gram").rank != b.rows())
        return Diagnostic::fail("Gram matrix is degenerate in degree " + std::to_string(i), {i});
    } catch (const Error& e) {
      return Diagnostic::fail(std::string("Gram matrix is numerically degenerate in degree ") + std::to_string(i) +
                                  ": " + e.what(),
                              {i});
    }
  }
  if (!c.action) return Diagnostic::pass();
  const ComplexAction& a = *c.action;
  const FiniteGroup& g = a.symmetry.g();
  if (a.matrices.size() != g.order()) return Diagnostic::fail("action needs one entry per group element");
  for (ElementIndex k = 0; k < g.order(); ++k) {
    if (a.matrices[k].size() != n) return Diagnostic::fail("action needs one matrix per degree", {k});
    for (std::size_t i = 0; i < n; ++i)
      if (a(k, i).rows() != c.dims[i] || a(k, i).cols() != c.dims[i])
        return Diagnostic::fail("action matrix has wrong shape", {k, i});
  }
  for (std::size_t i = 0; i < n; ++i) {
    Diagnostic rep = validate_representation(a.representation(i), tol.equivariance);
    if (!rep) {
      rep.message = "degree " + std::to_string(i) + ": " + rep.message;
      return rep;
    }
  }
  for (ElementIndex k = 0; k < g.order(); ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      const CMatrix& r = a(k, i);
      if (i + 1 < n) {
        const double err = (a(k, i + 1) * c.d[i] - c.d[i] * r).norm();
        if (err > tol.equivariance * std::max(1.0, a(k, i + 1).norm() * c.d[i].norm()))
          return Diagnostic::fail("action of " + g.label(k) + " does not commute with d in degree " + std::to_string(i),
                                  {k, i});
      }
      if (r.size() == 0) continue;
      const double err = (r.transpose() * c.gram[i] * r - c.gram[i]).norm();
      if (err > tol.equivariance * std::max(1.0, r.norm() * r.norm() * c.gram[i].norm()))
        return Diagnostic::fail("action of " + g.label(k) + " does not preserve the form in degree " +
                                    std::to_string(i),
                                {k, i});
    }
  }
  return Diagnostic::pass();
}

inline void require_valid(const BilinearComplex& c, const Tolerances& tol = {}) {
  Diagnostic diag = validate_complex(c, tol);
  if (!diag) throw Error(ErrorKind::validation, "invalid complex: " + diag.message);
}

struct CohomologyBasis {
  std::vector<CMatrix> representatives;  // per degree, columns in ker d_i
  std::vector<Eigen::Index> betti;
};

/// Representatives are pivot columns of the Hermitian projector onto
/// ker d_i minus im d_{i-1}; zero differentials give the standard basis.
inline CohomologyBasis cohomology_basis(const BilinearComplex& c, const Tolerances& tol = {}) {
  CohomologyBasis h;
  for (std::size_t i = 0; i < c.degrees(); ++i) {
    const RankInfo out = rank_info(c.out(i), tol.rank, "d_" + std::to_string(i), tol.scale_floor);
    const RankInfo in = rank_info(c.in(i), tol.rank, "d_" + std::to_string(i) + "-1", tol.scale_floor);
    const Eigen::Index betti = out.kernel.cols() - in.rank;
    if (betti < 0) throw Error(ErrorKind::ill_conditioned, "image exceeds kernel in degree " + std::to_string(i));
    const CMatrix p = out.kernel * out.kernel.adjoint() - in.range * in.range.adjoint();
    h.representatives.push_back(pivot_columns(p, betti));
    h.betti.push_back(betti);
  }
  return h;
}

/// Checks that representatives are cocycles whose classes are independent
/// modulo coboundaries, with one representative per Betti number.
inline Diagnostic validate_cohomology_basis(const BilinearComplex& c, const CohomologyBasis& h,
                                            const Tolerances& tol = {}) {
  if (h.representatives.size() != c.degrees()) return Diagnostic::fail("need representatives for every degree");
  for (std::size_t i = 0; i < c.degrees(); ++i) {
    const CMatrix& reps = h.representatives[i];
    if (reps.rows() != c.dims[i]) return Diagnostic::fail("representatives have wrong length", {i});
    if (reps.cols() == 0) continue;
    const CMatrix dh = c.out(i) * reps;
    if (dh.size() > 0 && dh.norm() > 1e-10 * std::max(1.0, norm_or_one(c.out(i)) * reps.norm()))
      return Diagnostic::fail("representative is not a cocycle in degree " + std::to_string(i), {i});
    const RankInfo in = rank_info(c.in(i), tol.rank, "d", tol.scale_floor);
    CMatrix joint(c.dims[i], in.rank + reps.cols());
    joint << in.range, reps;
    // normalize columns so the rank test is scale free
    for (Eigen::Index k = 0; k < joint.cols(); ++k) {
      double nk = joint.col(k).norm();
      if (nk > 0.0) joint.col(k) /= nk;
    }
    if (rank_info(joint, 1e-8).rank != joint.cols())
      return Diagnostic::fail("representatives are dependent modulo coboundaries in degree " + std::to_string(i), {i});
  }
  return Diagnostic::pass();
}

/// The subcomplex cut out by the projectors `proj[i]` (one per degree,
/// commuting with d). Basis: pivot columns of each projector.
inline EmbeddedSubcomplex project_subcomplex(const BilinearComplex& c, const std::vector<CMatrix>& proj,
                                             const Tolerances& tol = {}) {
  EmbeddedSubcomplex s;
  for (std::size_t i = 0; i < c.degrees(); ++i) {
    const auto r = static_cast<Eigen::Index>(std::llround(proj[i].trace().real()));
    s.embedding.push_back(pivot_columns(proj[i], r));
    s.complex.dims.push_back(r);
  }
  for (std::size_t i = 0; i + 1 < c.degrees(); ++i) {
    double res = 0.0;
    CMatrix di = coordinates_in(s.embedding[i + 1], c.d[i] * s.embedding[i], &res,
                                norm_floor(c.d[i], tol.scale_floor) * norm_or_one(s.embedding[i]));
    scrub(di, norm_floor(c.d[i], tol.scale_floor) * norm_or_one(s.embedding[i]) * norm_or_one(s.embedding[i + 1]));
    s.complex.d.push_back(std::move(di));
    if (res > 1e-8) throw Error(ErrorKind::validation, "subspace is not invariant under d in degree " + std::to_string(i));
  }
  for (std::size_t i = 0; i < c.degrees(); ++i) {
    const CMatrix g = s.embedding[i].transpose() * c.gram[i] * s.embedding[i];
    if (g.rows() > 0) {
      Eigen::Index rank = 0;
      try {
        const double floor = norm_or_one(c.gram[i]) * std::pow(norm_or_one(s.embedding[i]), 2);
        rank = rank_info(g, tol.rank, "restricted gram", floor).rank;
      } catch (const Error&) {
        rank = -1;
      }
      if (rank != g.rows())
        throw Error(ErrorKind::validation,
                    "restricted bilinear form is degenerate in degree " + std::to_string(i));
    }
    s.complex.gram.push_back(g);
  }
  if (c.action) {
    ComplexAction a{c.action->symmetry, {}};
    for (ElementIndex k = 0; k < c.action->matrices.size(); ++k) {
      std::vector<CMatrix> per;
      for (std::size_t i = 0; i < c.degrees(); ++i)
        per.push_back(coordinates_in(s.embedding[i], (*c.action)(k, i) * s.embedding[i]));
      a.matrices.push_back(std::move(per));
    }
    s.complex.action = std::move(a);
  }
  return s;
}

inline const ComplexAction& require_action(const BilinearComplex& c) {
  if (!c.action) throw Error(ErrorKind::invalid_input, "operation needs a complex with a group action");
  return *c.action;
}

/// C_W for a single irrep. Fails with a degenerate-form error when W is not
/// self-dual: an invariant symmetric form vanishes on C_W then.
inline EmbeddedSubcomplex isotypical_subcomplex(const BilinearComplex& c, IrrepIndex w, const Tolerances& tol = {}) {
  const ComplexAction& a = require_action(c);
  std::vector<CMatrix> proj;
  for (std::size_t i = 0; i < c.degrees(); ++i) proj.push_back(isotypical_projector(a.representation(i), a.symmetry.chars()[w]));
  try {
    return project_subcomplex(c, proj, tol);
  } catch (const Error& e) {
    if (!a.symmetry.chars().self_dual(w))
      throw Error(ErrorKind::validation, std::string(e.what()) + " (irrep " + a.symmetry.chars()[w].name +
                                             " is not self-dual; use its block with the dual irrep)");
    throw;
  }
}

/// C_W (+) C_{W*} for a block of irreps; the form restricts nondegenerately.
inline EmbeddedSubcomplex block_subcomplex(const BilinearComplex& c, const IrrepBlock& b, const Tolerances& tol = {}) {
  const ComplexAction& a = require_action(c);
  std::vector<CMatrix> proj;
  for (std::size_t i = 0; i < c.degrees(); ++i) proj.push_back(block_projector(a.representation(i), a.symmetry.chars(), b));
  return project_subcomplex(c, proj, tol);
}

struct EulerData {
  long long euler = 0;
  std::vector<long long> euler_per_irrep;  // e(C_W), W in table order
  std::vector<cplx> character;             // chi(C)(g), g in element order
  double identity_residual = 0.0;          // max_g |chi(C)(g) - sum_W e(C_W) chi_W(g)/deg W|
};

inline EulerData euler_data(const BilinearComplex& c) {
  EulerData e;
  for (std::size_t i = 0; i < c.degrees(); ++i) e.euler += (i % 2 == 0 ? 1 : -1) * static_cast<long long>(c.dims[i]);
  if (!c.action) return e;
  const ComplexAction& a = *c.action;
  const CharacterTable& t = a.symmetry.chars();
  const FiniteGroup& g = a.symmetry.g();
  for (IrrepIndex w = 0; w < t.size(); ++w) {
    long long ew = 0;
    for (std::size_t i = 0; i < c.degrees(); ++i) {
      const CMatrix p = isotypical_projector(a.representation(i), t[w]);
      ew += (i % 2 == 0 ? 1 : -1) * std::llround(p.trace().real());
    }
    e.euler_per_irrep.push_back(ew);
  }
  for (ElementIndex k = 0; k < g.order(); ++k) {
    cplx chi{0.0, 0.0};
    for (std::size_t i = 0; i < c.degrees(); ++i) chi += (i % 2 == 0 ? 1.0 : -1.0) * a(k, i).trace();
    e.character.push_back(chi);
    cplx rhs{0.0, 0.0};
    for (IrrepIndex w = 0; w < t.size(); ++w)
      rhs += static_cast<double>(e.euler_per_irrep[w]) * t[w].values[k] / static_cast<double>(t[w].degree);
    e.identity_residual = std::max(e.identity_residual, std::abs(chi - rhs));
  }
  return e;
}

}  // namespace tforge

#endif  // TORSION_FORGE_COCHAIN_HPP
