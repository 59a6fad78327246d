#ifndef TORSION_FORGE_COMPARISON_HPP
#define TORSION_FORGE_COMPARISON_HPP

// Closed-form right-hand sides of the comparison formulas: the digamma
// correction at fixed critical points, the anomaly and deformation factors,
// the model supertrace of the instanton limit, and quadrature checks of the
// two one-dimensional integrals behind the digamma terms.

#include "torsion_forge/morse.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace tforge {

/// Manifold integrals that enter the formulas only as numbers.
struct GeometricInputs {
  cplx mq_integral{0.0, 0.0};        // int_{M_g} theta_g(F, b^F) X^* psi(TM_g, nabla)
  cplx euler_log_integral{0.0, 0.0}; // int_{M_g} Tr[g log(b'/b)] e(TM_g, nabla)
  cplx cs_integral{0.0, 0.0};        // int_{M_g} theta_g(F, b'^F) e~(TM_g, nabla, nabla')
  cplx f_euler_integral{0.0, 0.0};   // int_{M_g} Tr_F[g] f e(TM_g, nabla)
};

inline constexpr double euler_gamma = 0.57721566490153286061;

/// Gamma'/Gamma for x > 0: shift up to x >= 8 with psi(x) = psi(x+1) - 1/x,
/// then the asymptotic series in 1/x^2 with Bernoulli coefficients.
inline double digamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw Error(ErrorKind::invalid_input, "digamma needs a positive argument");
  double shift = 0.0;
  while (x < 8.0) {
    shift -= 1.0 / x;
    x += 1.0;
  }
  const double inv2 = 1.0 / (x * x);
  // B_{2k} / (2k), k = 1..7
  static constexpr double c[] = {1.0 / 12.0,  -1.0 / 120.0,       1.0 / 252.0, -1.0 / 240.0,
                                 5.0 / 660.0, -691.0 / 32760.0,   1.0 / 12.0};
  double series = 0.0;
  for (int k = 6; k >= 0; --k) series = (series + c[k]) * inv2;
  return shift + std::log(x) - 0.5 / x - series;
}

inline void require_angle(double beta) {
  if (!(beta > 0.0 && beta <= std::numbers::pi))
    throw Error(ErrorKind::invalid_input, "normal angle " + std::to_string(beta) + " outside (0, pi]");
}

/// psi(beta/2pi) + psi(1 - beta/2pi) - 2 psi(1).
inline double angle_digamma_term(double beta) {
  require_angle(beta);
  const double u = beta / (2.0 * std::numbers::pi);
  return digamma(u) + digamma(1.0 - u) - 2.0 * digamma(1.0);
}

/// exp(-1/4 sum_{x in B_g} (-1)^{ind_g} sum_j (n_+ - n_-) (psi terms) Tr[g|F_x]).
inline cplx gamma_correction(const MorseSystem& ms, ElementIndex g) {
  const ElementData e = element_data(ms, g);
  cplx exponent{0.0, 0.0};
  for (const auto& [x, fd] : e.fixed) {
    const cplx tr = e.action.at(x).fiber_map.trace();
    const double sgn = fd.ind_g % 2 == 0 ? 1.0 : -1.0;
    for (const auto& na : fd.normal)
      exponent += sgn * static_cast<double>(na.n_plus - na.n_minus) * angle_digamma_term(na.beta) * tr;
  }
  return std::exp(-0.25 * exponent);
}

inline cplx main_theorem_rhs(const MorseSystem& ms, ElementIndex g, const GeometricInputs& gi) {
  return std::exp(-gi.mq_integral) * gamma_correction(ms, g);
}

inline cplx rs_anomaly_rhs(const GeometricInputs& gi) { return std::exp(gi.euler_log_integral - gi.cs_integral); }

/// (T/pi)^{(n/2) chi_g - chi~'_g} exp(2 Tr_s^{B_g}[f] T).
inline cplx deformation_prefactor(const MorseSystem& ms, ElementIndex g, double T) {
  if (!(T > 0.0)) throw Error(ErrorKind::invalid_input, "deformation parameter must be positive");
  const FixedPointInvariants inv = fixed_point_invariants(ms, g);
  const cplx power = 0.5 * static_cast<double>(ms.dimension) * inv.chi - inv.chi_prime;
  return std::exp(power * std::log(T / std::numbers::pi) + 2.0 * inv.trace_f * T);
}

/// sinh(2T) / (cosh(2T) - cos beta), written to stay finite for large T.
inline double angle_weight(double T, double beta) {
  const double e = std::exp(-2.0 * T);
  const double e2 = e * e;
  return (1.0 - e2) / (1.0 + e2 - 2.0 * e * std::cos(beta));
}

/// Right-hand side of the instanton limit of Tr_s[g N exp(-...)] at T.
inline cplx instanton_model_trace(const MorseSystem& ms, ElementIndex g, double T) {
  if (!(T > 0.0)) throw Error(ErrorKind::invalid_input, "deformation parameter must be positive");
  const ElementData e = element_data(ms, g);
  const double q = std::exp(-2.0 * T);
  cplx total{0.0, 0.0};
  for (const auto& comp : e.components) {
    if (comp.points.empty()) throw Error(ErrorKind::invalid_input, "component without critical points");
    const cplx t = e.action.at(comp.points.front()).fiber_map.trace();
    const double chi = static_cast<double>(comp.euler_characteristic);
    double ind_sum = 0.0;
    // distinct angles on the component with their normal dimensions
    std::vector<std::pair<double, int>> angles;
    double normal_sum = 0.0;
    for (auto x : comp.points) {
      const auto it = e.fixed.find(x);
      if (it == e.fixed.end()) throw Error(ErrorKind::invalid_input, "component point without fixed-point data");
      const FixedPointData& fd = it->second;
      const double sgn = fd.ind_g % 2 == 0 ? 1.0 : -1.0;
      ind_sum += sgn * fd.ind_g;
      for (const auto& na : fd.normal) {
        require_angle(na.beta);
        normal_sum += angle_weight(T, na.beta) * sgn * na.n_minus;
        bool known = false;
        for (auto& [b, dim] : angles)
          if (std::abs(b - na.beta) < 1e-12) {
            if (dim != na.dim)
              throw Error(ErrorKind::invalid_input, "normal dimension of an angle varies along a component");
            known = true;
          }
        if (!known) angles.emplace_back(na.beta, na.dim);
      }
    }
    double value = ((1.0 + q) * ind_sum - comp.dim * q * chi) / (1.0 - q) + normal_sum;
    for (const auto& [b, dim] : angles) value -= 0.5 * (angle_weight(T, b) - 1.0) * dim * chi;
    total += t * value;
  }
  return total;
}

struct DecayFit {
  std::vector<double> T;
  std::vector<double> difference;  // |model trace(T) - chi~'_g|
  double slope = 0.0;              // least-squares slope of log difference against T
  bool converged = false;          // every difference is at roundoff level
};

/// Fits the exponential rate at which the model trace approaches chi~'_g.
/// Differences below `floor` everywhere count as converged (no rate).
inline DecayFit model_trace_decay(const MorseSystem& ms, ElementIndex g, const std::vector<double>& Ts,
                                  double floor = 1e-14) {
  if (Ts.size() < 2) throw Error(ErrorKind::invalid_input, "decay fit needs at least two values of T");
  DecayFit fit;
  fit.T = Ts;
  const cplx target = fixed_point_invariants(ms, g).chi_prime;
  double largest = 0.0;
  for (double T : Ts) {
    fit.difference.push_back(std::abs(instanton_model_trace(ms, g, T) - target));
    largest = std::max(largest, fit.difference.back());
  }
  if (largest < floor) {
    fit.converged = true;
    return fit;
  }
  double mx = 0.0, my = 0.0;
  const double n = static_cast<double>(Ts.size());
  for (std::size_t k = 0; k < Ts.size(); ++k) {
    mx += Ts[k] / n;
    my += std::log(std::max(fit.difference[k], 1e-300)) / n;
  }
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t k = 0; k < Ts.size(); ++k) {
    sxy += (Ts[k] - mx) * (std::log(std::max(fit.difference[k], 1e-300)) - my);
    sxx += (Ts[k] - mx) * (Ts[k] - mx);
  }
  fit.slope = sxy / sxx;
  return fit;
}

struct IntegralCheck {
  std::string name;
  double quadrature = 0.0;
  double closed_form = 0.0;
  double error_estimate = 0.0;
  bool ok = false;
};

namespace detail {

inline double integrate(const std::function<double(double)>& f, double a, double b, double* err) {
  double e = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-14, &e);
  if (err) *err += e;
  return v;
}

// beyond this point every tail integrand is below 1e-15
inline constexpr double quadrature_end = 20.0;

}  // namespace detail

/// First identity: int_0^1 (coth t - 1/t) dt/t + int_1^inf (coth t - 1) dt/t.
inline IntegralCheck first_integral_identity(double tol = 1e-8) {
  IntegralCheck c{"coth integral = 1 - log(pi) - psi(1)"};
  auto head = [](double t) {
    if (t < 1e-2) {
      const double t2 = t * t;
      return 1.0 / 3.0 - t2 / 45.0 + 2.0 * t2 * t2 / 945.0 - t2 * t2 * t2 / 4725.0;
    }
    return (1.0 / std::tanh(t) - 1.0 / t) / t;
  };
  auto tail = [](double t) { return 2.0 * std::exp(-2.0 * t) / (-std::expm1(-2.0 * t)) / t; };
  c.quadrature = detail::integrate(head, 0.0, 1.0, &c.error_estimate) +
                 detail::integrate(tail, 1.0, detail::quadrature_end, &c.error_estimate);
  c.closed_form = 1.0 - std::log(std::numbers::pi) - digamma(1.0);
  c.ok = std::abs(c.quadrature - c.closed_form) < tol;
  return c;
}

/// Second identity at beta: the sinh/cosh integral against
/// -log(pi) - (psi(beta/2pi) + psi(1 - beta/2pi))/2.
inline IntegralCheck angle_integral_identity(double beta, double tol = 1e-8) {
  require_angle(beta);
  IntegralCheck c{"angle integral at beta = " + std::to_string(beta)};
  const double cb = std::cos(beta);
  auto head = [cb](double t) {
    // sinh(2t)/t stays accurate near 0; the denominator is at least 1 - cos beta > 0
    const double s = t < 1e-8 ? 2.0 : std::sinh(2.0 * t) / t;
    return s / (std::cosh(2.0 * t) - cb);
  };
  auto tail = [cb](double t) {
    const double e = std::exp(-2.0 * t);
    return 2.0 * (cb - e) * e / (1.0 + e * e - 2.0 * e * cb) / t;
  };
  c.quadrature = detail::integrate(head, 0.0, 1.0, &c.error_estimate) +
                 detail::integrate(tail, 1.0, detail::quadrature_end, &c.error_estimate);
  const double u = beta / (2.0 * std::numbers::pi);
  c.closed_form = -std::log(std::numbers::pi) - 0.5 * (digamma(u) + digamma(1.0 - u));
  c.ok = std::abs(c.quadrature - c.closed_form) < tol;
  return c;
}

/// Runs the first identity, and the angle identity when beta is given.
inline std::vector<IntegralCheck> check_integral_identities(std::optional<double> beta = std::nullopt,
                                                            double tol = 1e-8) {
  std::vector<IntegralCheck> out{first_integral_identity(tol)};
  if (beta) out.push_back(angle_integral_identity(*beta, tol));
  return out;
}

}  // namespace tforge

#endif  // TORSION_FORGE_COMPARISON_HPP
