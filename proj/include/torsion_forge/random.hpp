#ifndef TORSION_FORGE_RANDOM_HPP
#define TORSION_FORGE_RANDOM_HPP

// Seeded random complexes for property suites. The underlying complex is
// C^i = K^i (+) H^i (+) L^i with d the identity L^i -> K^{i+1}; every summand
// is a sum of real orthogonal realizations of irrep blocks. An equivariant
// change of basis, an invariant complex symmetric form and a global
// conjugation then hide the structure.

#include "torsion_forge/cochain.hpp"
#include "torsion_forge/rng.hpp"

#include <optional>
#include <vector>

namespace tforge {

/// Real orthogonal representation whose complexification is a sum of copies
/// of the irreps in `b`: the regular representation cut down to the image of
/// the block projector, in a real orthonormal basis.
inline GroupRepresentation block_realization(const Symmetry& s, const IrrepBlock& b) {
  const GroupRepresentation reg = regular_representation(s.group);
  const CMatrix p = block_projector(reg, s.chars(), b);
  // the block projector is real: its character is real on each block
  const Eigen::MatrixXd pr = p.real();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(pr, Eigen::ComputeFullU);
  const auto rank = static_cast<Eigen::Index>(std::llround(p.trace().real()));
  const Eigen::MatrixXd basis = svd.matrixU().leftCols(rank);
  GroupRepresentation out{s.group, {}};
  for (const CMatrix& m : reg.matrices) out.matrices.push_back((basis.transpose() * m.real() * basis).cast<cplx>());
  return out;
}

/// Direct sum of representations listed in order.
inline GroupRepresentation direct_sum(const std::shared_ptr<const FiniteGroup>& g,
                                      const std::vector<const GroupRepresentation*>& parts) {
  Eigen::Index n = 0;
  for (auto* p : parts) n += p->dim();
  GroupRepresentation out{g, {}};
  for (ElementIndex k = 0; k < g->order(); ++k) {
    CMatrix m = CMatrix::Zero(n, n);
    Eigen::Index at = 0;
    for (auto* p : parts) {
      m.block(at, at, p->dim(), p->dim()) = (*p)(k);
      at += p->dim();
    }
    out.matrices.push_back(m);
  }
  return out;
}

/// Group average of rho(g) X rho(g)^{-1}: an equivariant matrix.
inline CMatrix equivariant_average(const GroupRepresentation& to, const GroupRepresentation& from, const CMatrix& x) {
  CMatrix s = CMatrix::Zero(x.rows(), x.cols());
  const std::size_t n = to.matrices.size();
  for (std::size_t k = 0; k < n; ++k) s += to(k) * x * from(k).inverse();
  return s / static_cast<double>(n);
}

/// Group average of rho(g)^T K rho(g): an invariant bilinear form.
inline CMatrix invariant_form(const GroupRepresentation& rep, const CMatrix& k) {
  CMatrix s = CMatrix::Zero(k.rows(), k.cols());
  for (const auto& m : rep.matrices) s += m.transpose() * k * m;
  s /= static_cast<double>(rep.matrices.size());
  return 0.5 * (s + s.transpose());
}

namespace detail {

/// Random list of blocks whose realizations add up to exactly `size`.
inline std::optional<std::vector<std::size_t>> fill_blocks(Rng& rng, const std::vector<Eigen::Index>& sizes,
                                                           Eigen::Index size) {
  std::vector<std::size_t> out;
  Eigen::Index left = size;
  while (left > 0) {
    std::vector<std::size_t> fit;
    for (std::size_t k = 0; k < sizes.size(); ++k)
      if (sizes[k] <= left) fit.push_back(k);
    if (fit.empty()) return std::nullopt;
    const std::size_t pick = fit[static_cast<std::size_t>(rng.integer(0, static_cast<long long>(fit.size()) - 1))];
    out.push_back(pick);
    left -= sizes[pick];
  }
  return out;
}

}  // namespace detail

struct RandomComplexOptions {
  std::optional<Symmetry> symmetry;
  std::optional<std::vector<Eigen::Index>> betti;  // requested dim H^i
};

inline BilinearComplex generate_random_complex(std::uint64_t seed, const std::vector<Eigen::Index>& dims,
                                               const RandomComplexOptions& opt = {}) {
  if (dims.empty()) throw Error(ErrorKind::invalid_input, "need at least one degree");
  Rng rng(seed);
  const Symmetry sym = opt.symmetry ? *opt.symmetry : trivial_group();
  const std::vector<IrrepBlock> blocks = irrep_blocks(sym.chars());
  std::vector<GroupRepresentation> real;
  std::vector<Eigen::Index> sizes;
  for (const auto& b : blocks) {
    real.push_back(block_realization(sym, b));
    sizes.push_back(real.back().dim());
  }
  auto total = [&](const std::vector<std::size_t>& list) {
    Eigen::Index s = 0;
    for (auto k : list) s += sizes[k];
    return s;
  };

  const std::size_t n = dims.size();
  if (opt.betti && opt.betti->size() != n) throw Error(ErrorKind::invalid_input, "betti list must match dims");
  std::vector<std::vector<std::size_t>> kpart(n), hpart(n), lpart(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::Index r = dims[i] - total(kpart[i]);
    if (r < 0) throw Error(ErrorKind::invalid_input, "infeasible request: image exceeds dimension in degree " + std::to_string(i));
    Eigen::Index hsize = -1;
    if (opt.betti) {
      hsize = (*opt.betti)[i];
      if (hsize > r) throw Error(ErrorKind::invalid_input, "infeasible betti request in degree " + std::to_string(i));
    }
    const Eigen::Index lmax = i + 1 < n ? std::min<Eigen::Index>(r, dims[i + 1]) : 0;
    Eigen::Index lsize = 0;
    if (hsize >= 0) {
      lsize = r - hsize;
      if (lsize > lmax) throw Error(ErrorKind::invalid_input, "infeasible betti request in degree " + std::to_string(i));
    } else if (lmax > 0) {
      lsize = rng.integer(0, lmax);
    }
    auto l = detail::fill_blocks(rng, sizes, lsize);
    auto h = detail::fill_blocks(rng, sizes, r - lsize);
    if (!l || !h) throw Error(ErrorKind::invalid_input, "infeasible multiplicity request in degree " + std::to_string(i));
    lpart[i] = *l;
    hpart[i] = *h;
    if (i + 1 < n) kpart[i + 1] = *l;
  }

  BilinearComplex c;
  c.dims = dims;
  std::vector<GroupRepresentation> reps;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<const GroupRepresentation*> parts;
    for (auto* part : {&kpart[i], &hpart[i], &lpart[i]})
      for (auto k : *part) parts.push_back(&real[k]);
    reps.push_back(parts.empty() ? trivial_representation(sym.group, 0) : direct_sum(sym.group, parts));
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    CMatrix d = CMatrix::Zero(dims[i + 1], dims[i]);
    const Eigen::Index m = total(lpart[i]);
    d.block(0, dims[i] - m, m, m) = identity(m);
    c.d.push_back(d);
  }
  // equivariant change of basis, invariant forms
  std::vector<CMatrix> q(n);
  for (std::size_t i = 0; i < n; ++i) {
    q[i] = equivariant_average(reps[i], reps[i], rng.near_identity(dims[i], 0.5));
    c.gram.push_back(invariant_form(reps[i], rng.symmetric_near_identity(dims[i], 0.6)));
  }
  for (std::size_t i = 0; i + 1 < n; ++i) c.d[i] = q[i + 1] * c.d[i] * q[i].inverse();
  for (std::size_t i = 0; i < n; ++i) {
    const CMatrix qi = q[i].inverse();
    c.gram[i] = qi.transpose() * c.gram[i] * qi;
  }
  // global conjugation
  std::vector<CMatrix> p(n), pinv(n);
  for (std::size_t i = 0; i < n; ++i) {
    p[i] = rng.near_identity(dims[i], 0.3);
    pinv[i] = p[i].inverse();
  }
  for (std::size_t i = 0; i + 1 < n; ++i) c.d[i] = p[i + 1] * c.d[i] * pinv[i];
  for (std::size_t i = 0; i < n; ++i) {
    c.gram[i] = pinv[i].transpose() * c.gram[i] * pinv[i];
    c.gram[i] = 0.5 * (c.gram[i] + c.gram[i].transpose());
  }
  if (opt.symmetry) {
    ComplexAction a{sym, {}};
    for (ElementIndex g = 0; g < sym.g().order(); ++g) {
      std::vector<CMatrix> per;
      for (std::size_t i = 0; i < n; ++i) per.push_back(p[i] * reps[i](g) * pinv[i]);
      a.matrices.push_back(std::move(per));
    }
    c.action = std::move(a);
  }
  return c;
}

}  // namespace tforge

#endif  // TORSION_FORGE_RANDOM_HPP
