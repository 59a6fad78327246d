#include "torsion_forge/morse_examples.hpp"

#include <gtest/gtest.h>

using namespace tforge;

namespace {

// sum_i (-1)^i Tr(g | C^i), computed from the assembled action.
cplx supertrace(const BilinearComplex& c, ElementIndex g) {
  cplx s = 0.0;
  for (std::size_t i = 0; i < c.degrees(); ++i) s += (i % 2 ? -1.0 : 1.0) * (*c.action)(g, i).trace();
  return s;
}

std::vector<MorseSystem> symmetric_examples() {
  return {circle_reflection(5, 2),        circle_free_rotation(3, 3, 2), circle_fiber_symmetry(4, symmetric_group3()),
          torus_system(13, symmetric_group3()), sphere_rotation(11, 4, 2), sphere_rotation(2, 5, 1),
          single_fixed_point(2, 0),       single_fixed_point(0, 2)};
}

}  // namespace

TEST(ThomSmale, SingleCriticalPoint) {
  MorseSystem ms;
  CMatrix b(2, 2);
  b << 2.0, 0.5, 0.5, 1.0;
  ms.points.push_back({"p", 0, 0.0, b});
  const BilinearComplex c = build_thom_smale(ms);
  EXPECT_EQ(c.dims, (std::vector<Eigen::Index>{2}));
  EXPECT_TRUE(c.d.empty());
  EXPECT_EQ(c.gram[0], b);
  EXPECT_TRUE(validate_morse(ms).ok);
}

TEST(ThomSmale, CircleWithTrivialHolonomyHasZeroDifferential) {
  const BilinearComplex c = build_thom_smale(circle_system(1.0));
  EXPECT_EQ(c.dims, (std::vector<Eigen::Index>{1, 1}));
  EXPECT_EQ(c.d[0](0, 0), cplx(0.0));
  EXPECT_EQ(cohomology_basis(c).betti, (std::vector<Eigen::Index>{1, 1}));
}

TEST(ThomSmale, CircleDifferentialIsOneMinusHolonomy) {
  for (cplx mu : {cplx(2.0), cplx(0.0, 1.0), cplx(-3.0, 0.5)}) {
    const BilinearComplex c = build_thom_smale(circle_system(mu, 2.0, 3.0));
    EXPECT_LT(std::abs(c.d[0](0, 0) - (1.0 - mu)), 1e-15);
    EXPECT_EQ(c.gram[0](0, 0), cplx(2.0));
    EXPECT_EQ(c.gram[1](0, 0), cplx(3.0));
  }
}

TEST(ThomSmale, TorusDifferentialsMatchHolonomyBlocks) {
  const MorseSystem ms = torus_system(13, cyclic_group(2), 2);
  const BilinearComplex c = build_thom_smale(ms);
  const Eigen::Index r = ms.points[0].fiber_dim();
  EXPECT_EQ(c.dims, (std::vector<Eigen::Index>{r, 2 * r, r}));
  // holonomy A is read back from the (s1, m) block, B from (s2, m)
  const CMatrix a = c.d[0].topRows(r) + identity(r);
  const CMatrix b = c.d[0].bottomRows(r) + identity(r);
  EXPECT_LT((a * b - b * a).norm(), 1e-12);
  EXPECT_LT((c.d[1].leftCols(r) + (b - identity(r))).norm(), 1e-14);
  EXPECT_LT((c.d[1].rightCols(r) - (a - identity(r))).norm(), 1e-14);
  EXPECT_TRUE(validate_complex(c).ok);
}

TEST(ThomSmale, InstantonMustLowerIndexByOne) {
  MorseSystem ms = circle_system(2.0);
  ms.instantons.push_back({0, 0, 1, identity(1)});
  EXPECT_FALSE(validate_morse(ms).ok);
  EXPECT_THROW(build_thom_smale(ms), Error);
}

TEST(GroupAction, IdentityActsTrivially) {
  for (const MorseSystem& ms : symmetric_examples()) {
    const BilinearComplex c = build_thom_smale(ms);
    const ElementIndex e = ms.sym().g().identity();
    for (std::size_t i = 0; i < c.degrees(); ++i) EXPECT_EQ((*c.action)(e, i), identity(c.dims[i]));
  }
}

TEST(GroupAction, IsAHomomorphismAndCommutesWithD) {
  for (const MorseSystem& ms : symmetric_examples()) {
    ASSERT_TRUE(validate_morse(ms).ok) << validate_morse(ms).message;
    const BilinearComplex c = build_thom_smale(ms);
    const FiniteGroup& G = ms.sym().g();
    for (ElementIndex g = 0; g < G.order(); ++g)
      for (ElementIndex h = 0; h < G.order(); ++h)
        for (std::size_t i = 0; i < c.degrees(); ++i)
          EXPECT_LT(((*c.action)(g, i) * (*c.action)(h, i) - (*c.action)(G.mul(g, h), i)).norm(), 1e-12);
    EXPECT_TRUE(validate_complex(c).ok);
  }
}

TEST(GroupAction, Z2SwapOfTwoMinima) {
  const MorseSystem ms = circle_free_rotation(1, 2, 1);
  const BilinearComplex c = build_thom_smale(ms);
  CMatrix swap(2, 2);
  swap << 0.0, 1.0, 1.0, 0.0;
  EXPECT_EQ((*c.action)(1, 0), swap);
  EXPECT_EQ((*c.action)(1, 1), swap);
  EXPECT_TRUE(validate_morse(ms).ok);
}

TEST(FixedPointInvariants, IdentityReducesToOrdinaryInvariants) {
  for (const MorseSystem& ms : symmetric_examples()) {
    const FixedPointInvariants inv = fixed_point_invariants(ms, ms.sym().g().identity());
    cplx chi = 0.0, chi_prime = 0.0, trace_f = 0.0;
    for (const auto& p : ms.points) {
      const double sgn = p.index % 2 ? -1.0 : 1.0;
      const double r = static_cast<double>(p.fiber_dim());
      chi += sgn * r;
      chi_prime += sgn * r * p.index;
      trace_f += sgn * r * p.value;
    }
    EXPECT_LT(std::abs(inv.chi - chi), 1e-14);
    EXPECT_LT(std::abs(inv.chi_prime - chi_prime), 1e-14);
    EXPECT_LT(std::abs(inv.trace_f - trace_f), 1e-14);
  }
}

TEST(FixedPointInvariants, CircleValues) {
  const FixedPointInvariants inv = fixed_point_invariants(circle_system(1.0), 0);
  EXPECT_EQ(inv.chi, cplx(0.0));
  EXPECT_EQ(inv.chi_prime, cplx(-1.0));
  EXPECT_EQ(inv.trace_f, cplx(-2.0));
}

TEST(FixedPointInvariants, SphereRotationWithTrivialFiber) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const MorseSystem ms = sphere_rotation(seed, 3, 1);
    if (std::abs(ms.elements.at(1).action[0].fiber_map(0, 0) - 1.0) > 1e-12) continue;
    for (ElementIndex g = 1; g < 3; ++g) {
      const FixedPointInvariants inv = fixed_point_invariants(ms, g);
      EXPECT_LT(std::abs(inv.chi - 2.0), 1e-14);
      EXPECT_LT(std::abs(inv.chi_prime - 2.0), 1e-14);
      EXPECT_LT(std::abs(inv.trace_f), 1e-14);
    }
    return;
  }
  GTEST_SKIP() << "no trivial fiber among the seeds";
}

TEST(FixedPointInvariants, EquivariantLefschetzIdentity) {
  // chi_g(F) is the supertrace of g on the cochains
  for (const MorseSystem& ms : symmetric_examples()) {
    const BilinearComplex c = build_thom_smale(ms);
    for (ElementIndex g = 0; g < ms.sym().g().order(); ++g)
      EXPECT_LT(std::abs(fixed_point_invariants(ms, g).chi - supertrace(c, g)), 1e-12);
  }
}

TEST(WittenDeform, ZeroIsIdentity) {
  const MorseSystem ms = torus_system(1, cyclic_group(3));
  const MorseSystem w = witten_deform(ms, 0.0);
  for (std::size_t x = 0; x < ms.points.size(); ++x) EXPECT_EQ(w.points[x].fiber_gram, ms.points[x].fiber_gram);
}

TEST(WittenDeform, ScalesByExpMinusTwoTf) {
  const MorseSystem w = witten_deform(circle_system(2.0, 3.0, 5.0), 1.0);
  EXPECT_LT(std::abs(w.points[0].fiber_gram(0, 0) - 3.0 * std::exp(2.0)), 1e-13);
  EXPECT_LT(std::abs(w.points[1].fiber_gram(0, 0) - 5.0 * std::exp(-2.0)), 1e-15);
}

TEST(WittenDeform, Composes) {
  const MorseSystem ms = sphere_rotation(3, 4, 2);
  const MorseSystem twice = witten_deform(witten_deform(ms, 0.7), 1.1);
  const MorseSystem once = witten_deform(ms, 1.8);
  for (std::size_t x = 0; x < ms.points.size(); ++x)
    EXPECT_LT((twice.points[x].fiber_gram - once.points[x].fiber_gram).norm(),
              1e-13 * once.points[x].fiber_gram.norm());
  EXPECT_TRUE(validate_morse(once).ok);
}

TEST(ValidateMorse, IndexMismatchAtFixedPoint) {
  MorseSystem ms = sphere_rotation(1, 3, 1);
  ms.elements[1].fixed[1].ind_g = 1;
  const Diagnostic d = validate_morse(ms);
  ASSERT_FALSE(d.ok);
  EXPECT_NE(d.message.find("ind_g"), std::string::npos);
}

TEST(ValidateMorse, OddMultiplicityAwayFromPi) {
  MorseSystem ms = sphere_rotation(1, 3, 1);
  ms.elements[1].fixed[0].normal = {{ms.elements[1].fixed[0].normal[0].beta, 2, 1, 1}};
  const Diagnostic d = validate_morse(ms);
  ASSERT_FALSE(d.ok);
  EXPECT_NE(d.message.find("even"), std::string::npos);
}

TEST(ValidateMorse, SignatureMustSplitNormalDimension) {
  MorseSystem ms = circle_reflection(5, 1);
  ms.elements[1].fixed[0].normal[0].n_plus = 2;
  EXPECT_FALSE(validate_morse(ms).ok);
}

TEST(ValidateMorse, OrientationSignMustMatchParity) {
  MorseSystem ms = circle_reflection(5, 1);
  ms.elements[1].action[1].eps = 1;
  const Diagnostic d = validate_morse(ms);
  ASSERT_FALSE(d.ok);
  EXPECT_NE(d.message.find("eps"), std::string::npos);
}

TEST(ValidateMorse, FiberFormMustBeInvariant) {
  MorseSystem ms = circle_free_rotation(3, 3, 2);
  ms.points[0].fiber_gram(0, 1) += 0.3;
  ms.points[0].fiber_gram(1, 0) += 0.3;
  EXPECT_FALSE(validate_morse(ms).ok);
}

TEST(ValidateMorse, FixedSetOfTheIdentityCoversEverything) {
  MorseSystem ms = circle_reflection(5, 1);
  ms.elements[0].fixed.clear();
  ms.elements[0].components.clear();
  EXPECT_TRUE(validate_morse(ms).ok);  // defaults restore them
  ms.elements[1].fixed.erase(1);
  EXPECT_FALSE(validate_morse(ms).ok);
}

TEST(ValidateMorse, SingleFixedPointSignatures) {
  EXPECT_TRUE(validate_morse(single_fixed_point(2, 0)).ok);
  EXPECT_TRUE(validate_morse(single_fixed_point(0, 2)).ok);
  EXPECT_TRUE(validate_morse(single_fixed_point(1, 1)).ok);
  EXPECT_THROW(single_fixed_point(1, 0), Error);
}

TEST(FormPerturbation, KeepsTheSystemValidAndInvariant) {
  for (const MorseSystem& ms : symmetric_examples()) {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      const FormPerturbation p = random_invariant_perturbation(ms, seed, 0.7);
      const MorseSystem primed = perturbed(ms, p);
      EXPECT_TRUE(validate_morse(primed).ok) << validate_morse(primed).message;
      for (std::size_t x = 0; x < ms.points.size(); ++x) {
        if (p.generator[x].size() == 0) continue;
        const CMatrix bm = ms.points[x].fiber_gram * p.generator[x];
        EXPECT_LT((bm - bm.transpose()).norm(), 1e-10 * norm_or_one(bm));
      }
    }
  }
}

TEST(FormPerturbation, AnomalyPointsFollowFixedSet) {
  const MorseSystem ms = sphere_rotation(11, 4, 2);
  const MorseSystem primed = perturbed(ms, random_invariant_perturbation(ms, 3));
  EXPECT_EQ(anomaly_points(ms, primed, 0).size(), 2u);
  for (ElementIndex g = 1; g < 4; ++g) {
    const auto pts = anomaly_points(ms, primed, g);
    EXPECT_EQ(pts.size(), 2u);
    for (const auto& p : pts) EXPECT_EQ(p.ind_g, 0);
  }
  const MorseSystem free = circle_free_rotation(2, 3, 1);
  EXPECT_TRUE(anomaly_points(free, free, 1).empty());
}
