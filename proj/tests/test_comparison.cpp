#include "torsion_forge/comparison.hpp"
#include "torsion_forge/morse_examples.hpp"

#include <boost/math/special_functions/digamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <gtest/gtest.h>

using namespace tforge;
using std::numbers::pi;

namespace {

double digamma_oracle(double x) {
  using big = boost::multiprecision::cpp_bin_float_50;
  return static_cast<double>(boost::math::digamma(big(x)));
}

// Closed forms evaluated with mpmath at 30 digits.
struct AngleLiteral {
  double beta;
  double value;
};
constexpr AngleLiteral angle_literals[] = {
    {pi / 3.0, 2.466698573174188},
    {pi / 2.0, 1.511927320731969},
    {2.0 * pi / 3.0, 1.080404212054297},
    {pi, 0.818780140172023},
};
constexpr double first_integral_literal = 0.4324857790521327;

}  // namespace

TEST(Digamma, MatchesHighPrecisionOracle) {
  for (double x : {1e-3, 0.1, 1.0 / 6.0, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.7, 7.9, 8.0, 12.5, 100.0, 1e4})
    EXPECT_NEAR(digamma(x), digamma_oracle(x), 1e-12 * std::max(1.0, std::abs(digamma_oracle(x)))) << x;
}

TEST(Digamma, RecurrenceAndSpecialValues) {
  EXPECT_NEAR(digamma(1.0), -euler_gamma, 1e-14);
  EXPECT_NEAR(digamma(0.5), -euler_gamma - 2.0 * std::log(2.0), 1e-14);
  for (double x : {0.2, 0.9, 2.3, 6.5}) EXPECT_NEAR(digamma(x + 1.0) - digamma(x), 1.0 / x, 1e-13);
  // reflection: psi(1 - x) - psi(x) = pi cot(pi x)
  for (double x : {0.1, 0.3, 0.45}) EXPECT_NEAR(digamma(1.0 - x) - digamma(x), pi / std::tan(pi * x), 1e-12);
}

TEST(Digamma, RejectsNonPositive) {
  EXPECT_THROW(digamma(0.0), Error);
  EXPECT_THROW(digamma(-1.0), Error);
  EXPECT_THROW(digamma(std::nan("")), Error);
}

TEST(AngleDigammaTerm, ValueAtPi) {
  EXPECT_NEAR(angle_digamma_term(pi), -4.0 * std::log(2.0), 1e-14);
  EXPECT_THROW(angle_digamma_term(0.0), Error);
  EXPECT_THROW(angle_digamma_term(4.0), Error);
}

TEST(GammaCorrection, NoFixedNormalDataGivesOne) {
  EXPECT_EQ(gamma_correction(circle_system(2.0), 0), cplx(1.0));
  const MorseSystem free = circle_free_rotation(1, 3, 2);
  for (ElementIndex g = 0; g < 3; ++g) EXPECT_EQ(gamma_correction(free, g), cplx(1.0));
}

TEST(GammaCorrection, SingleFixedPointSpotValues) {
  // u = 1/2: psi terms give -4 log 2, times n_+ - n_- = +-2, times -1/4
  EXPECT_LT(std::abs(gamma_correction(single_fixed_point(2, 0), 1) - 4.0), 1e-13);
  EXPECT_LT(std::abs(gamma_correction(single_fixed_point(0, 2), 1) - 0.25), 1e-14);
  EXPECT_LT(std::abs(gamma_correction(single_fixed_point(1, 1), 1) - 1.0), 1e-14);
}

TEST(GammaCorrection, MultiplicativeOverFixedPoints) {
  // the exponent is a sum over fixed points: two copies square the value
  MorseSystem one = single_fixed_point(2, 0);
  MorseSystem two = one;
  two.points.push_back({"q", 0, 0.0, identity(1)});
  two.elements[1].action.push_back({1, 1, identity(1)});
  two.elements[1].fixed[1] = two.elements[1].fixed[0];
  two.elements[1].components.push_back({{1}, 0, 1});
  ASSERT_TRUE(validate_morse(two).ok) << validate_morse(two).message;
  const cplx g1 = gamma_correction(one, 1);
  EXPECT_LT(std::abs(gamma_correction(two, 1) - g1 * g1), 1e-12);
}

TEST(GammaCorrection, SphereRotationClosedForm) {
  const MorseSystem ms = sphere_rotation(11, 4, 2);
  for (ElementIndex g = 1; g < 4; ++g) {
    const double beta = folded_angle(g, 4);
    const cplx tr = ms.elements[g].action[0].fiber_map.trace();
    // S contributes n_+ = 2, N contributes n_- = 2, both with ind_g = 0
    const cplx expected = std::exp(-0.25 * (2.0 - 2.0) * angle_digamma_term(beta) * tr);
    EXPECT_LT(std::abs(gamma_correction(ms, g) - expected), 1e-13);
  }
}

TEST(ComparisonRhs, MainTheoremAndAnomaly) {
  GeometricInputs gi;
  gi.mq_integral = cplx(0.3, -0.2);
  gi.euler_log_integral = cplx(0.5, 0.1);
  gi.cs_integral = cplx(-0.25, 0.4);
  const MorseSystem ms = single_fixed_point(2, 0);
  EXPECT_LT(std::abs(main_theorem_rhs(ms, 1, gi) - 4.0 * std::exp(-cplx(0.3, -0.2))), 1e-13);
  EXPECT_LT(std::abs(main_theorem_rhs(ms, 0, GeometricInputs{}) - 1.0), 1e-15);
  EXPECT_LT(std::abs(rs_anomaly_rhs(gi) - std::exp(cplx(0.75, -0.3))), 1e-14);
}

TEST(DeformationPrefactor, Circle) {
  const MorseSystem ms = circle_system(2.0);
  for (double T : {0.5, 1.0, 3.0}) {
    const cplx expected = (T / pi) * std::exp(2.0 * (-1.0 - 1.0) * T);
    EXPECT_LT(std::abs(deformation_prefactor(ms, 0, T) - expected), 1e-13 * std::abs(expected));
  }
  EXPECT_LT(std::abs(deformation_prefactor(ms, 0, pi) - std::exp(-4.0 * pi)), 1e-18);
}

TEST(DeformationPrefactor, RejectsNonPositiveT) {
  const MorseSystem ms = circle_system(2.0);
  EXPECT_THROW(deformation_prefactor(ms, 0, 0.0), Error);
  EXPECT_THROW(deformation_prefactor(ms, 0, -1.0), Error);
  EXPECT_THROW(instanton_model_trace(ms, 0, 0.0), Error);
}

TEST(AngleWeight, MatchesHyperbolicForm) {
  for (double T : {0.1, 0.7, 2.0})
    for (double beta : {pi / 5.0, pi / 2.0, pi})
      EXPECT_NEAR(angle_weight(T, beta), std::sinh(2.0 * T) / (std::cosh(2.0 * T) - std::cos(beta)), 1e-13);
  EXPECT_EQ(angle_weight(400.0, 1.0), 1.0);
}

TEST(ModelTrace, CircleIsMinusCothT) {
  const MorseSystem ms = circle_system(1.0);
  for (double T : {0.2, 1.0, 4.0}) EXPECT_NEAR(instanton_model_trace(ms, 0, T).real(), -1.0 / std::tanh(T), 1e-13);
}

TEST(ModelTrace, CircleConvergesToChiPrime) {
  const MorseSystem ms = circle_system(1.0);
  const cplx target = fixed_point_invariants(ms, 0).chi_prime;
  EXPECT_LT(std::abs(instanton_model_trace(ms, 0, 5.0) - target), 1e-4);
  EXPECT_LT(std::abs(instanton_model_trace(ms, 0, 10.0) - target), 1e-8);
}

TEST(ModelTrace, LargeTLimitOnSymmetricExamples) {
  const std::vector<MorseSystem> systems = {sphere_rotation(11, 4, 2), circle_reflection(5, 2),
                                            torus_system(13, symmetric_group3()), single_fixed_point(0, 2)};
  for (const MorseSystem& ms : systems)
    for (ElementIndex g = 0; g < ms.sym().g().order(); ++g)
      EXPECT_LT(std::abs(instanton_model_trace(ms, g, 30.0) - fixed_point_invariants(ms, g).chi_prime), 1e-10);
}

TEST(ModelTrace, DecayRateOnCircle) {
  const DecayFit fit = model_trace_decay(circle_system(1.0), 0, {2.0, 4.0, 6.0, 8.0});
  EXPECT_FALSE(fit.converged);
  EXPECT_NEAR(fit.slope, -2.0, 0.05);
  EXPECT_THROW(model_trace_decay(circle_system(1.0), 0, {1.0}), Error);
}

TEST(ModelTrace, DecayOnSphereRotation) {
  const MorseSystem ms = sphere_rotation(11, 4, 2);
  for (ElementIndex g = 0; g < 4; ++g) {
    const DecayFit fit = model_trace_decay(ms, g, {2.0, 4.0, 6.0, 8.0});
    EXPECT_TRUE(fit.converged || fit.slope <= -1.9) << "g = " << g << " slope " << fit.slope;
  }
}

TEST(IntegralIdentities, FirstIntegral) {
  const IntegralCheck c = first_integral_identity();
  EXPECT_TRUE(c.ok);
  EXPECT_NEAR(c.quadrature, c.closed_form, 1e-8);
  EXPECT_NEAR(c.closed_form, first_integral_literal, 1e-14);
  EXPECT_NEAR(c.quadrature, first_integral_literal, 1e-8);
}

TEST(IntegralIdentities, AngleIntegralAgainstLiterals) {
  for (const auto& [beta, value] : angle_literals) {
    const IntegralCheck c = angle_integral_identity(beta);
    EXPECT_TRUE(c.ok) << beta;
    EXPECT_NEAR(c.closed_form, value, 1e-13) << beta;
    EXPECT_NEAR(c.quadrature, value, 1e-8) << beta;
  }
}

TEST(IntegralIdentities, CombinedCheckAndBadAngle) {
  EXPECT_EQ(check_integral_identities().size(), 1u);
  const auto both = check_integral_identities(pi / 4.0);
  ASSERT_EQ(both.size(), 2u);
  for (const auto& c : both) EXPECT_TRUE(c.ok) << c.name;
  EXPECT_THROW(angle_integral_identity(0.0), Error);
  EXPECT_THROW(angle_integral_identity(3.5), Error);
}
