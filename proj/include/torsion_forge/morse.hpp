#ifndef TORSION_FORGE_MORSE_HPP
#define TORSION_FORGE_MORSE_HPP

// Combinatorial Morse data: critical points with fibers of a flat bundle,
// signed instantons with transports, a group action on cells and fibers, and
// per-element fixed-point data. Builds the equivariant Thom-Smale cochain
// complex and the fixed-point sums used by the comparison formulas.

#include "torsion_forge/torsion.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace tforge {

struct CriticalPoint {
  std::string name;
  int index = 0;       // Morse index
  double value = 0.0;  // f(x)
  CMatrix fiber_gram;  // b^{F_x}; its size is the fiber dimension

  Eigen::Index fiber_dim() const { return fiber_gram.rows(); }
};

/// A flow line from x (index k+1) to y (index k). `transport` is the matrix
/// of the chain-level map F_x -> F_y on fiber coordinates; the cochain
/// differential uses its transpose.
struct Instanton {
  std::size_t from = 0;
  std::size_t to = 0;
  int sign = 1;
  CMatrix transport;
};

struct NormalAngle {
  double beta = std::numbers::pi;  // rotation angle in (0, pi]
  int dim = 0;                     // dim N^beta
  int n_plus = 0;
  int n_minus = 0;
};

struct FixedPointData {
  int ind_g = 0;
  std::vector<NormalAngle> normal;
};

struct PointAction {
  std::size_t image = 0;
  int eps = 1;        // orientation sign of g on the unstable cell
  CMatrix fiber_map;  // F_x -> F_{gx}
};

struct FixedComponent {
  std::vector<std::size_t> points;
  int dim = 0;
  long long euler_characteristic = 0;
};

struct ElementData {
  std::vector<PointAction> action;           // one per critical point
  std::map<std::size_t, FixedPointData> fixed;  // keyed by point, for gx = x
  std::vector<FixedComponent> components;
};

struct MorseSystem {
  int dimension = 0;  // of the ambient manifold
  std::vector<CriticalPoint> points;
  std::vector<Instanton> instantons;
  std::optional<Symmetry> symmetry;
  std::vector<ElementData> elements;  // per group element; empty entries take defaults

  const Symmetry sym() const { return symmetry ? *symmetry : trivial_group(); }
  int max_index() const {
    int m = 0;
    for (const auto& p : points) m = std::max(m, p.index);
    return m;
  }
};

/// Element data with the defaults filled in: the identity fixes every
/// point with ind_g = ind and has one component of dimension n with Euler
/// characteristic sum (-1)^ind.
inline ElementData element_data(const MorseSystem& ms, ElementIndex g) {
  const Symmetry s = ms.sym();
  ElementData e = g < ms.elements.size() ? ms.elements[g] : ElementData{};
  if (g != s.g().identity()) {
    if (e.action.size() != ms.points.size())
      throw Error(ErrorKind::invalid_input, "element " + s.g().label(g) + " needs an action entry per critical point");
    return e;
  }
  if (e.action.empty())
    for (std::size_t x = 0; x < ms.points.size(); ++x)
      e.action.push_back({x, 1, identity(ms.points[x].fiber_dim())});
  for (std::size_t x = 0; x < ms.points.size(); ++x)
    if (!e.fixed.count(x)) e.fixed[x] = FixedPointData{ms.points[x].index, {}};
  if (e.components.empty()) {
    FixedComponent c{{}, ms.dimension, 0};
    for (std::size_t x = 0; x < ms.points.size(); ++x) {
      c.points.push_back(x);
      c.euler_characteristic += ms.points[x].index % 2 == 0 ? 1 : -1;
    }
    e.components.push_back(std::move(c));
  }
  return e;
}

namespace detail {

struct Layout {
  std::vector<Eigen::Index> dims;
  std::vector<Eigen::Index> offset;  // per point, within its degree
};

inline Layout layout(const MorseSystem& ms) {
  Layout l;
  l.dims.assign(static_cast<std::size_t>(ms.max_index()) + 1, 0);
  for (const auto& p : ms.points) {
    l.offset.push_back(l.dims[static_cast<std::size_t>(p.index)]);
    l.dims[static_cast<std::size_t>(p.index)] += p.fiber_dim();
  }
  return l;
}

inline std::string point_name(const MorseSystem& ms, std::size_t x) {
  return x < ms.points.size() ? "'" + ms.points[x].name + "'" : "#" + std::to_string(x);
}

}  // namespace detail

/// Chain differential dualized to the cochain complex, with the block form.
inline BilinearComplex thom_smale_complex(const MorseSystem& ms) {
  const detail::Layout l = detail::layout(ms);
  BilinearComplex c;
  c.dims = l.dims;
  for (std::size_t i = 0; i < c.dims.size(); ++i) c.gram.push_back(CMatrix::Zero(c.dims[i], c.dims[i]));
  for (std::size_t i = 0; i + 1 < c.dims.size(); ++i) c.d.push_back(CMatrix::Zero(c.dims[i + 1], c.dims[i]));
  for (std::size_t x = 0; x < ms.points.size(); ++x) {
    const auto& p = ms.points[x];
    const Eigen::Index n = p.fiber_dim();
    c.gram[static_cast<std::size_t>(p.index)].block(l.offset[x], l.offset[x], n, n) = p.fiber_gram;
  }
  for (const auto& g : ms.instantons) {
    const auto& x = ms.points.at(g.from);
    const auto& y = ms.points.at(g.to);
    if (x.index != y.index + 1)
      throw Error(ErrorKind::validation, "instanton from " + detail::point_name(ms, g.from) + " to " +
                                             detail::point_name(ms, g.to) + " does not lower the index by one");
    if (g.transport.rows() != y.fiber_dim() || g.transport.cols() != x.fiber_dim())
      throw Error(ErrorKind::validation, "transport of instanton from " + detail::point_name(ms, g.from) +
                                             " has wrong shape");
    c.d[static_cast<std::size_t>(y.index)].block(l.offset[g.from], l.offset[g.to], x.fiber_dim(), y.fiber_dim()) +=
        static_cast<double>(g.sign) * g.transport.transpose();
  }
  return c;
}

/// Signed permutation blocks eps_g(x) * fiber map, per element and degree.
inline ComplexAction build_group_action(const MorseSystem& ms) {
  const Symmetry s = ms.sym();
  const detail::Layout l = detail::layout(ms);
  ComplexAction a{s, {}};
  for (ElementIndex g = 0; g < s.g().order(); ++g) {
    const ElementData e = element_data(ms, g);
    std::vector<CMatrix> per;
    for (auto d : l.dims) per.push_back(CMatrix::Zero(d, d));
    for (std::size_t x = 0; x < ms.points.size(); ++x) {
      const PointAction& pa = e.action[x];
      if (pa.image >= ms.points.size())
        throw Error(ErrorKind::validation, "action of " + s.g().label(g) + " sends a point out of range");
      const auto& px = ms.points[x];
      const auto& py = ms.points[pa.image];
      if (px.index != py.index)
        throw Error(ErrorKind::validation, "action of " + s.g().label(g) + " does not preserve the index of " +
                                               detail::point_name(ms, x));
      if (pa.fiber_map.rows() != py.fiber_dim() || pa.fiber_map.cols() != px.fiber_dim())
        throw Error(ErrorKind::validation, "fiber map of " + s.g().label(g) + " at " + detail::point_name(ms, x) +
                                               " has wrong shape");
      per[static_cast<std::size_t>(px.index)].block(l.offset[pa.image], l.offset[x], py.fiber_dim(), px.fiber_dim()) =
          static_cast<double>(pa.eps) * pa.fiber_map;
    }
    a.matrices.push_back(std::move(per));
  }
  return a;
}

inline BilinearComplex build_thom_smale(const MorseSystem& ms) {
  BilinearComplex c = thom_smale_complex(ms);
  if (ms.symmetry) c.action = build_group_action(ms);
  return c;
}

inline Diagnostic validate_morse(const MorseSystem& ms, const Tolerances& tol = {}) {
  const Symmetry s = ms.sym();
  const FiniteGroup& G = s.g();
  if (ms.points.empty()) return Diagnostic::fail("no critical points");
  for (std::size_t x = 0; x < ms.points.size(); ++x) {
    const auto& p = ms.points[x];
    if (p.index < 0 || (ms.dimension > 0 && p.index > ms.dimension))
      return Diagnostic::fail("index of " + detail::point_name(ms, x) + " out of range", {x});
    if (p.fiber_gram.rows() != p.fiber_gram.cols()) return Diagnostic::fail("fiber form is not square", {x});
  }
  for (std::size_t k = 0; k < ms.instantons.size(); ++k) {
    const auto& g = ms.instantons[k];
    if (g.from >= ms.points.size() || g.to >= ms.points.size())
      return Diagnostic::fail("instanton endpoint out of range", {k});
    if (ms.points[g.from].index != ms.points[g.to].index + 1)
      return Diagnostic::fail("instanton " + std::to_string(k) + " does not connect ind(x) = ind(y) + 1", {k});
    if (g.sign != 1 && g.sign != -1) return Diagnostic::fail("instanton sign must be +1 or -1", {k});
  }
  if (ms.elements.size() > G.order()) return Diagnostic::fail("more element entries than group elements");

  std::vector<ElementData> data;
  try {
    for (ElementIndex g = 0; g < G.order(); ++g) data.push_back(element_data(ms, g));
  } catch (const Error& e) {
    return Diagnostic::fail(e.what());
  }
  for (ElementIndex g = 0; g < G.order(); ++g) {
    const ElementData& e = data[g];
    for (std::size_t x = 0; x < ms.points.size(); ++x) {
      const PointAction& pa = e.action[x];
      if (pa.image >= ms.points.size()) return Diagnostic::fail("action image out of range", {g, x});
      if (pa.eps != 1 && pa.eps != -1) return Diagnostic::fail("eps must be +1 or -1", {g, x});
      const auto& px = ms.points[x];
      const auto& py = ms.points[pa.image];
      if (px.index != py.index) return Diagnostic::fail("action does not preserve indices", {g, x});
      if (std::abs(px.value - py.value) > tol.identity * std::max(1.0, std::abs(px.value)))
        return Diagnostic::fail("f is not constant on the orbit of " + detail::point_name(ms, x), {g, x});
      if (pa.fiber_map.rows() != py.fiber_dim() || pa.fiber_map.cols() != px.fiber_dim())
        return Diagnostic::fail("fiber map has wrong shape", {g, x});
      const double err = (pa.fiber_map.transpose() * py.fiber_gram * pa.fiber_map - px.fiber_gram).norm();
      if (err > tol.equivariance * std::max(1.0, pa.fiber_map.squaredNorm() * norm_or_one(py.fiber_gram)))
        return Diagnostic::fail("fiber map of " + G.label(g) + " at " + detail::point_name(ms, x) +
                                    " does not intertwine the fiber forms",
                                {g, x});
      const bool fixed = pa.image == x;
      if (fixed != (e.fixed.count(x) > 0))
        return Diagnostic::fail(fixed ? "fixed point " + detail::point_name(ms, x) + " of " + G.label(g) +
                                            " has no fixed-point data"
                                      : "fixed-point data given for a point moved by " + G.label(g),
                                {g, x});
    }
    for (const auto& [x, fd] : e.fixed) {
      if (x >= ms.points.size()) return Diagnostic::fail("fixed-point data for unknown point", {g, x});
      int nminus = 0, nminus_pi = 0;
      for (const auto& na : fd.normal) {
        if (!(na.beta > 0.0 && na.beta <= std::numbers::pi))
          return Diagnostic::fail("normal angle outside (0, pi] at " + detail::point_name(ms, x), {g, x});
        if (na.n_plus < 0 || na.n_minus < 0 || na.n_plus + na.n_minus != na.dim)
          return Diagnostic::fail("n_+ + n_- != dim N at " + detail::point_name(ms, x), {g, x});
        const bool is_pi = std::abs(na.beta - std::numbers::pi) < 1e-12;
        if (!is_pi && (na.n_plus % 2 != 0 || na.n_minus % 2 != 0))
          return Diagnostic::fail("n_+ and n_- must be even for an angle other than pi at " +
                                      detail::point_name(ms, x),
                                  {g, x});
        nminus += na.n_minus;
        if (is_pi) nminus_pi += na.n_minus;
      }
      if (ms.points[x].index != fd.ind_g + nminus)
        return Diagnostic::fail("ind != ind_g + sum n_- at " + detail::point_name(ms, x), {g, x});
      const int expected_eps = nminus_pi % 2 == 0 ? 1 : -1;
      if (e.action[x].eps != expected_eps)
        return Diagnostic::fail("eps at fixed point " + detail::point_name(ms, x) +
                                    " disagrees with the parity of n_-(pi)",
                                {g, x});
    }
    std::vector<int> seen(ms.points.size(), 0);
    for (std::size_t j = 0; j < e.components.size(); ++j) {
      const auto& comp = e.components[j];
      if (comp.dim < 0) return Diagnostic::fail("component of negative dimension", {g, j});
      std::optional<cplx> trace;
      for (auto x : comp.points) {
        if (x >= ms.points.size() || !e.fixed.count(x))
          return Diagnostic::fail("component contains a point that is not a fixed critical point", {g, j});
        ++seen[x];
        const cplx t = e.action[x].fiber_map.trace();
        if (trace && std::abs(*trace - t) > 1e-9 * std::max(1.0, std::abs(t)))
          return Diagnostic::fail("Tr_F[g] is not constant on a component", {g, j});
        trace = t;
      }
    }
    for (const auto& [x, fd] : e.fixed)
      if (!e.components.empty() && seen[x] != 1)
        return Diagnostic::fail("fixed point " + detail::point_name(ms, x) + " must lie in exactly one component",
                                {g, x});
  }
  // cocycle property of the action
  for (ElementIndex g = 0; g < G.order(); ++g)
    for (ElementIndex h = 0; h < G.order(); ++h) {
      const ElementIndex gh = G.mul(g, h);
      for (std::size_t x = 0; x < ms.points.size(); ++x) {
        const PointAction& ah = data[h].action[x];
        const PointAction& ag = data[g].action[ah.image];
        const PointAction& agh = data[gh].action[x];
        if (agh.image != ag.image || agh.eps != ag.eps * ah.eps)
          return Diagnostic::fail("action is not a group action on cells", {g, h, x});
        const CMatrix comp = ag.fiber_map * ah.fiber_map;
        if ((comp - agh.fiber_map).norm() > tol.equivariance * std::max(1.0, comp.norm()))
          return Diagnostic::fail("fiber maps do not compose as a group action", {g, h, x});
      }
    }
  BilinearComplex c;
  try {
    c = build_thom_smale(ms);
  } catch (const Error& e) {
    return Diagnostic::fail(e.what());
  }
  Diagnostic d = validate_complex(c, tol);
  if (!d) d.message = "Thom-Smale complex: " + d.message;
  return d;
}

inline void require_valid(const MorseSystem& ms, const Tolerances& tol = {}) {
  Diagnostic d = validate_morse(ms, tol);
  if (!d) throw Error(ErrorKind::validation, "invalid Morse system: " + d.message);
}

struct FixedPointInvariants {
  cplx chi;          // chi_g(F)
  cplx chi_prime;    // chi~'_g(F)
  cplx trace_f;      // Tr_s^{B_g}[f]
};

inline FixedPointInvariants fixed_point_invariants(const MorseSystem& ms, ElementIndex g) {
  const ElementData e = element_data(ms, g);
  FixedPointInvariants out{};
  if (e.components.empty() && !e.fixed.empty())
    throw Error(ErrorKind::invalid_input, "fixed points of element " + ms.sym().g().label(g) +
                                              " have no component assignment");
  for (const auto& comp : e.components) {
    if (comp.points.empty()) continue;
    const cplx t = e.action.at(comp.points.front()).fiber_map.trace();
    for (auto x : comp.points) {
      const auto it = e.fixed.find(x);
      if (it == e.fixed.end()) throw Error(ErrorKind::invalid_input, "component point without fixed-point data");
      const double sgn = it->second.ind_g % 2 == 0 ? 1.0 : -1.0;
      out.chi += t * sgn;
      out.chi_prime += t * sgn * static_cast<double>(ms.points[x].index);
      out.trace_f += t * sgn * ms.points[x].value;
    }
  }
  return out;
}

/// b^F_T = e^{-2 T f} b^F on the critical fibers.
inline MorseSystem witten_deform(const MorseSystem& ms, double T) {
  MorseSystem out = ms;
  for (auto& p : out.points) p.fiber_gram *= std::exp(-2.0 * T * p.value);
  return out;
}

/// Anomaly inputs at the fixed points of g for a change of fiber forms
/// from `ms` to `primed` (same system otherwise).
inline std::vector<AnomalyPoint> anomaly_points(const MorseSystem& ms, const MorseSystem& primed, ElementIndex g) {
  const ElementData e = element_data(ms, g);
  std::vector<AnomalyPoint> out;
  for (const auto& [x, fd] : e.fixed)
    out.push_back({fd.ind_g, ms.points[x].fiber_gram, primed.points.at(x).fiber_gram, e.action[x].fiber_map});
  return out;
}

}  // namespace tforge

#endif  // TORSION_FORGE_MORSE_HPP
