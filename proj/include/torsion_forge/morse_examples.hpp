#ifndef TORSION_FORGE_MORSE_EXAMPLES_HPP
#define TORSION_FORGE_MORSE_EXAMPLES_HPP

// Ready-made Morse systems: circles, a torus, and a rotated sphere, with
// groups acting on fibers, on cells, or both. Plus random invariant
// perturbations of the fiber forms.

#include "torsion_forge/morse.hpp"
#include "torsion_forge/random.hpp"

#include <numbers>

namespace tforge {

/// Circle with f = -cos: minimum (index 0, f = -1) and maximum (index 1,
/// f = 1) joined by two flow lines with signs +1, -1 and transports 1, mu.
/// The cochain differential is 1 - mu.
inline MorseSystem circle_system(cplx mu, cplx form_min = 1.0, cplx form_max = 1.0) {
  MorseSystem ms;
  ms.dimension = 1;
  ms.points.push_back({"min", 0, -1.0, CMatrix::Constant(1, 1, form_min)});
  ms.points.push_back({"max", 1, 1.0, CMatrix::Constant(1, 1, form_max)});
  ms.instantons.push_back({1, 0, 1, CMatrix::Constant(1, 1, 1.0)});
  ms.instantons.push_back({1, 0, -1, CMatrix::Constant(1, 1, mu)});
  return ms;
}

/// Random real orthogonal fiber representation built from irrep blocks,
/// of dimension at most `max_dim` (and at least 1).
inline GroupRepresentation random_fiber_representation(Rng& rng, const Symmetry& s, Eigen::Index max_dim) {
  const auto blocks = irrep_blocks(s.chars());
  std::vector<GroupRepresentation> real;
  for (const auto& b : blocks) real.push_back(block_realization(s, b));
  std::vector<const GroupRepresentation*> parts;
  Eigen::Index dim = 0;
  for (int tries = 0; tries < 16; ++tries) {
    const auto k = static_cast<std::size_t>(rng.integer(0, static_cast<long long>(real.size()) - 1));
    if (dim + real[k].dim() > max_dim) continue;
    parts.push_back(&real[k]);
    dim += real[k].dim();
    if (dim >= max_dim || rng.uniform() < 0.35) break;
  }
  if (parts.empty()) parts.push_back(&real[0]);  // the trivial irrep comes first
  return direct_sum(s.group, parts);
}

namespace detail {

/// Element data for a group acting on fibers only: every point is fixed,
/// ind_g = ind, one component of dimension n.
inline std::vector<ElementData> fiber_only_action(const MorseSystem& ms, const GroupRepresentation& sigma,
                                                  long long euler) {
  std::vector<ElementData> out;
  for (ElementIndex g = 0; g < sigma.group->order(); ++g) {
    ElementData e;
    FixedComponent comp{{}, ms.dimension, euler};
    for (std::size_t x = 0; x < ms.points.size(); ++x) {
      e.action.push_back({x, 1, sigma(g)});
      e.fixed[x] = FixedPointData{ms.points[x].index, {}};
      comp.points.push_back(x);
    }
    e.components.push_back(std::move(comp));
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace detail

/// Circle whose group acts on the fibers only, through a random fiber
/// representation; the holonomy is an equivariant random matrix.
inline MorseSystem circle_fiber_symmetry(std::uint64_t seed, const Symmetry& s, Eigen::Index max_fiber = 4) {
  Rng rng(seed);
  const GroupRepresentation sigma = random_fiber_representation(rng, s, max_fiber);
  const Eigen::Index r = sigma.dim();
  const CMatrix ht = equivariant_average(sigma, sigma, rng.near_identity(r, 0.6));
  MorseSystem ms;
  ms.dimension = 1;
  ms.symmetry = s;
  ms.points.push_back({"min", 0, -1.0, invariant_form(sigma, rng.symmetric_near_identity(r, 0.5))});
  ms.points.push_back({"max", 1, 1.0, invariant_form(sigma, rng.symmetric_near_identity(r, 0.5))});
  ms.instantons.push_back({1, 0, 1, identity(r)});
  ms.instantons.push_back({1, 0, -1, CMatrix(ht.transpose())});
  ms.elements = detail::fiber_only_action(ms, sigma, 0);
  return ms;
}

/// Z/k rotating a circle with f = -cos(k theta): k minima and k maxima, free
/// action. The maximum j flows to minima j (sign -1, transport B) and j+1
/// (sign +1, transport A).
inline MorseSystem circle_free_rotation(std::uint64_t seed, std::size_t k, Eigen::Index fiber = 1) {
  if (k < 1) throw Error(ErrorKind::invalid_input, "rotation order must be positive");
  Rng rng(seed);
  const CMatrix bmin = rng.symmetric_near_identity(fiber, 0.5);
  const CMatrix bmax = rng.symmetric_near_identity(fiber, 0.5);
  const CMatrix a = rng.near_identity(fiber, 0.6);
  const CMatrix b = rng.near_identity(fiber, 0.6);
  MorseSystem ms;
  ms.dimension = 1;
  ms.symmetry = cyclic_group(k);
  for (std::size_t j = 0; j < k; ++j) ms.points.push_back({"min" + std::to_string(j), 0, -1.0, bmin});
  for (std::size_t j = 0; j < k; ++j) ms.points.push_back({"max" + std::to_string(j), 1, 1.0, bmax});
  for (std::size_t j = 0; j < k; ++j) {
    ms.instantons.push_back({k + j, (j + 1) % k, 1, a});
    ms.instantons.push_back({k + j, j, -1, b});
  }
  for (std::size_t m = 0; m < k; ++m) {
    ElementData e;
    for (std::size_t x = 0; x < 2 * k; ++x) {
      const std::size_t base = x < k ? 0 : k;
      e.action.push_back({base + (x - base + m) % k, 1, identity(fiber)});
    }
    if (m == 0) {
      e = ElementData{};  // identity: defaults
    }
    ms.elements.push_back(std::move(e));
  }
  return ms;
}

/// Z/2 reflecting a circle through its two critical points. The reflection
/// reverses the unstable direction at the maximum (eps = -1, angle pi) and
/// the stable direction at the minimum.
inline MorseSystem circle_reflection(std::uint64_t seed, Eigen::Index fiber = 1) {
  Rng rng(seed);
  auto involution = [&](Eigen::Index n) {
    Eigen::MatrixXd d = Eigen::MatrixXd::Identity(n, n);
    for (Eigen::Index k = 0; k < n; ++k)
      if (rng.uniform() < 0.5) d(k, k) = -1.0;
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(rng.real_matrix(n, n).real());
    const Eigen::MatrixXd q = qr.householderQ();
    return CMatrix((q * d * q.transpose()).cast<cplx>());
  };
  const CMatrix phi_m = involution(fiber);
  const CMatrix phi_M = involution(fiber);
  const Symmetry s = cyclic_group(2);
  const GroupRepresentation rm{s.group, {identity(fiber), phi_m}};
  const GroupRepresentation rM{s.group, {identity(fiber), phi_M}};
  const CMatrix a = rng.near_identity(fiber, 0.6);
  const CMatrix b = phi_m * a * phi_M;
  MorseSystem ms;
  ms.dimension = 1;
  ms.symmetry = s;
  ms.points.push_back({"min", 0, -1.0, invariant_form(rm, rng.symmetric_near_identity(fiber, 0.5))});
  ms.points.push_back({"max", 1, 1.0, invariant_form(rM, rng.symmetric_near_identity(fiber, 0.5))});
  ms.instantons.push_back({1, 0, 1, a});
  ms.instantons.push_back({1, 0, -1, b});
  ElementData e;
  e.action = {{0, 1, phi_m}, {1, -1, phi_M}};
  e.fixed[0] = FixedPointData{0, {{std::numbers::pi, 1, 1, 0}}};
  e.fixed[1] = FixedPointData{0, {{std::numbers::pi, 1, 0, 1}}};
  e.components = {{{0}, 0, 1}, {{1}, 0, 1}};
  ms.elements = {ElementData{}, std::move(e)};
  return ms;
}

/// Torus with f having one minimum, two saddles and one maximum; commuting
/// holonomies A and B = p(A), both equivariant for a fiber-only action.
/// Cochain differentials are [A-1; B-1] and [-(B-1), A-1].
inline MorseSystem torus_system(std::uint64_t seed, const Symmetry& s, Eigen::Index max_fiber = 3) {
  Rng rng(seed);
  const GroupRepresentation sigma = random_fiber_representation(rng, s, max_fiber);
  const Eigen::Index r = sigma.dim();
  const CMatrix a = equivariant_average(sigma, sigma, rng.near_identity(r, 0.6));
  const cplx c1 = rng.complex(0.5), c2 = rng.complex(0.3);
  const CMatrix b = identity(r) + c1 * a + c2 * a * a;
  MorseSystem ms;
  ms.dimension = 2;
  ms.symmetry = s;
  auto form = [&] { return invariant_form(sigma, rng.symmetric_near_identity(r, 0.5)); };
  ms.points.push_back({"m", 0, -2.0, form()});
  ms.points.push_back({"s1", 1, -0.5, form()});
  ms.points.push_back({"s2", 1, 0.5, form()});
  ms.points.push_back({"M", 2, 2.0, form()});
  const CMatrix id = identity(r);
  ms.instantons = {
      {1, 0, 1, a.transpose()}, {1, 0, -1, id},           // block (s1, m) = A - 1
      {2, 0, 1, b.transpose()}, {2, 0, -1, id},           // block (s2, m) = B - 1
      {3, 1, 1, id},            {3, 1, -1, b.transpose()},  // block (M, s1) = 1 - B
      {3, 2, 1, a.transpose()}, {3, 2, -1, id},           // block (M, s2) = A - 1
  };
  ms.elements = detail::fiber_only_action(ms, sigma, 0);
  return ms;
}

/// Rotation angle of g^k in Z/n folded into (0, pi].
inline double folded_angle(std::size_t k, std::size_t n) {
  const double theta = 2.0 * std::numbers::pi * static_cast<double>(k % n) / static_cast<double>(n);
  return theta <= std::numbers::pi ? theta : 2.0 * std::numbers::pi - theta;
}

/// Z/n rotating S^2 about the axis through the two critical points of the
/// height function: the south pole (index 0) and the north pole (index 2).
inline MorseSystem sphere_rotation(std::uint64_t seed, std::size_t n, Eigen::Index max_fiber = 2) {
  Rng rng(seed);
  const Symmetry s = cyclic_group(n);
  const GroupRepresentation sigma = random_fiber_representation(rng, s, max_fiber);
  const Eigen::Index r = sigma.dim();
  MorseSystem ms;
  ms.dimension = 2;
  ms.symmetry = s;
  ms.points.push_back({"S", 0, -1.0, invariant_form(sigma, rng.symmetric_near_identity(r, 0.5))});
  ms.points.push_back({"N", 2, 1.0, invariant_form(sigma, rng.symmetric_near_identity(r, 0.5))});
  ms.elements.push_back(ElementData{});
  for (std::size_t k = 1; k < n; ++k) {
    ElementData e;
    const double beta = folded_angle(k, n);
    e.action = {{0, 1, sigma(k)}, {1, 1, sigma(k)}};
    e.fixed[0] = FixedPointData{0, {{beta, 2, 2, 0}}};
    e.fixed[1] = FixedPointData{0, {{beta, 2, 0, 2}}};
    e.components = {{{0}, 0, 1}, {{1}, 0, 1}};
    ms.elements.push_back(std::move(e));
  }
  return ms;
}

/// Z/2 fixing one critical point with trivial fiber, acting by -1 on a
/// two-dimensional normal space where the Hessian has signature
/// (n_plus, n_minus). The fixed set is the point itself.
inline MorseSystem single_fixed_point(int n_plus, int n_minus) {
  if (n_plus < 0 || n_minus < 0 || n_plus + n_minus != 2)
    throw Error(ErrorKind::invalid_input, "signature must split a two-dimensional normal space");
  MorseSystem ms;
  ms.dimension = 2;
  ms.symmetry = cyclic_group(2);
  ms.points.push_back({"p", n_minus, 0.0, identity(1)});
  ElementData e;
  e.action = {{0, n_minus % 2 == 0 ? 1 : -1, identity(1)}};
  e.fixed[0] = FixedPointData{0, {{std::numbers::pi, 2, n_plus, n_minus}}};
  e.components = {{{0}, 0, 1}};
  ms.elements = {ElementData{}, std::move(e)};
  return ms;
}

/// Per-point generators M_x of a change of fiber forms b'_x = b_x exp(M_x).
/// Each M_x is b_x-self-adjoint (b_x M_x symmetric), commutes with the
/// stabilizer of x, and is transported along orbits by the fiber maps, so
/// b' is again invariant. The largest spectral norm is `norm`.
struct FormPerturbation {
  std::vector<CMatrix> generator;
};

inline FormPerturbation random_invariant_perturbation(const MorseSystem& ms, std::uint64_t seed, double norm = 1.0) {
  Rng rng(seed);
  const Symmetry s = ms.sym();
  const FiniteGroup& G = s.g();
  std::vector<ElementData> data;
  for (ElementIndex g = 0; g < G.order(); ++g) data.push_back(element_data(ms, g));
  FormPerturbation p;
  p.generator.assign(ms.points.size(), CMatrix());
  for (std::size_t x = 0; x < ms.points.size(); ++x) {
    if (p.generator[x].size() > 0 || ms.points[x].fiber_dim() == 0) continue;
    const Eigen::Index r = ms.points[x].fiber_dim();
    const CMatrix k = rng.symmetric_near_identity(r, 1.0) - identity(r);
    const CMatrix m0 = ms.points[x].fiber_gram.partialPivLu().solve(k);
    CMatrix m = CMatrix::Zero(r, r);
    int stab = 0;
    for (ElementIndex g = 0; g < G.order(); ++g) {
      const PointAction& a = data[g].action[x];
      if (a.image != x) continue;
      m += a.fiber_map.inverse() * m0 * a.fiber_map;
      ++stab;
    }
    m /= static_cast<double>(stab);
    for (ElementIndex g = 0; g < G.order(); ++g) {
      const PointAction& a = data[g].action[x];
      if (p.generator[a.image].size() == 0) p.generator[a.image] = a.fiber_map * m * a.fiber_map.inverse();
    }
  }
  double largest = 0.0;
  for (const auto& m : p.generator)
    if (m.size() > 0) largest = std::max(largest, Eigen::JacobiSVD<CMatrix>(m).singularValues()(0));
  if (largest > 0.0)
    for (auto& m : p.generator) m *= norm / largest;
  return p;
}

/// The system with forms b_x exp(t M_x).
inline MorseSystem perturbed(const MorseSystem& ms, const FormPerturbation& p, double t = 1.0) {
  MorseSystem out = ms;
  for (std::size_t x = 0; x < out.points.size(); ++x) {
    if (p.generator[x].size() == 0) continue;
    CMatrix b = ms.points[x].fiber_gram * CMatrix(t * p.generator[x]).exp();
    out.points[x].fiber_gram = 0.5 * (b + b.transpose());
  }
  return out;
}

}  // namespace tforge

#endif  // TORSION_FORGE_MORSE_EXAMPLES_HPP
