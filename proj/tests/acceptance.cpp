// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "torsion_forge/comparison.hpp"
#include "torsion_forge/morse_examples.hpp"
#include "torsion_forge/random.hpp"
#include "torsion_forge/spectral.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

using namespace tforge;
using std::numbers::pi;

namespace {

namespace tol {
constexpr double character_identity = 1e-9;
constexpr double rs_equivalence = 1e-7;
constexpr double cutoff_independence = 1e-7;
constexpr double anomaly = 1e-8;
constexpr double witten = 1e-8;
constexpr double circle = 1e-10;
constexpr double residuals = 1e-8;
constexpr double integrals = 1e-8;
constexpr double digamma_values = 1e-12;
constexpr double decay_slope = -1.9;
constexpr double gamma_values = 1e-10;
constexpr double runtime_seconds = 30.0;
}  // namespace tol

struct Outcome {
  bool ok = true;
  std::string detail;
};

int failures = 0;

void report(int n, const std::string& title, const std::function<Outcome()>& body) {
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  if (!o.ok) ++failures;
  std::printf("%s %2d %s: %s\n", o.ok ? "PASS" : "FAIL", n, title.c_str(), o.detail.c_str());
  std::fflush(stdout);
}

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return buf;
}

// The seeded population shared by criteria 1-3: groups Z/2, Z/3, S3, total
// dimension at most 12.
std::vector<BilinearComplex> random_population(int count, std::uint64_t base) {
  const Symmetry groups[] = {cyclic_group(2), cyclic_group(3), symmetric_group3()};
  std::vector<BilinearComplex> out;
  for (int s = 0; s < count; ++s) {
    Rng r(base + static_cast<std::uint64_t>(s));
    const auto nd = r.integer(2, 4);
    std::vector<Eigen::Index> dims;
    for (long long i = 0; i < nd; ++i) dims.push_back(r.integer(1, 12 / nd));
    RandomComplexOptions opt;
    opt.symmetry = groups[s % 3];
    out.push_back(generate_random_complex(static_cast<std::uint64_t>(s), dims, opt));
  }
  return out;
}

std::vector<MorseSystem> morse_population() {
  const Symmetry groups[] = {trivial_group(), cyclic_group(2), cyclic_group(3), symmetric_group3()};
  std::vector<MorseSystem> out;
  for (int s = 0; s < 50; ++s) {
    const auto seed = static_cast<std::uint64_t>(s);
    switch (s % 5) {
      case 0: out.push_back(circle_fiber_symmetry(seed, groups[(s / 5) % 4])); break;
      case 1: out.push_back(circle_free_rotation(seed, 2 + s % 2, 1 + (s / 5) % 2)); break;
      case 2: out.push_back(circle_reflection(seed, 1 + (s / 5) % 3)); break;
      case 3: out.push_back(torus_system(seed, groups[(s / 5) % 4])); break;
      default: out.push_back(sphere_rotation(seed, 2 + (s / 5) % 4)); break;
    }
  }
  return out;
}

double smallest_positive(const std::vector<double>& moduli) {
  for (double m : moduli)
    if (m > 0.0) return m;
  return 1.0;
}

}  // namespace

int main() {
  const std::vector<BilinearComplex> population = random_population(100, 1000);

  report(1, "torsion character at e equals full torsion", [&] {
    const auto start = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (const auto& c : population) {
      const TorsionCharacter tc = equivariant_torsion(c);
      const cplx full = torsion_form_value(c, tc.lifted_generators());
      worst = std::max(worst, relative_error(evaluate_torsion_character(tc, 0).value, full));
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return Outcome{worst < tol::character_identity && secs < tol::runtime_seconds,
                   "100 complexes, max rel err " + sci(worst) + " (tol " + sci(tol::character_identity) + "), " +
                       sci(secs) + " s"};
  });

  report(2, "spectral-cutoff torsion equals canonical torsion", [&] {
    double worst = 0.0;
    for (const auto& c : population) {
      const cplx full = torsion_form_value(c, equivariant_torsion(c).lifted_generators());
      const auto moduli = spectrum_moduli(generalized_eigenspaces(c));
      const double small = 0.5 * smallest_positive(moduli);
      const auto cuts = suggested_cutoffs(generalized_eigenspaces(c));
      const double mid = cuts[cuts.size() / 2];
      for (double a : {small, mid}) worst = std::max(worst, relative_error(rs_torsion(c, a).value_at_element, full));
    }
    return Outcome{worst < tol::rs_equivalence,
                   "100 complexes x 2 cutoffs, max rel err " + sci(worst) + " (tol " + sci(tol::rs_equivalence) + ")"};
  });

  report(3, "spectral-cutoff torsion independent of the cutoff", [&] {
    double worst = 0.0;
    for (const auto& c : population) {
      const auto cuts = suggested_cutoffs(generalized_eigenspaces(c));
      const double a[] = {cuts.front(), cuts[cuts.size() / 2], 2.0 * cuts.back()};
      const RsTorsionResult ref = rs_torsion(c, a[0]);
      for (int k = 1; k < 3; ++k) {
        const RsTorsionResult r = rs_torsion(c, a[k]);
        worst = std::max(worst, relative_error(r.value_at_element, ref.value_at_element));
        for (std::size_t b = 0; b < r.character.entries.size(); ++b)
          worst = std::max(worst, relative_error(r.character.entries[b].value, ref.character.entries[b].value));
      }
    }
    return Outcome{worst < tol::cutoff_independence, "100 complexes x 3 cutoffs, per-block max rel err " + sci(worst) +
                                                         " (tol " + sci(tol::cutoff_independence) + ")"};
  });

  const std::vector<MorseSystem> systems = morse_population();

  report(4, "anomaly of Milnor torsion under a change of fiber forms", [&] {
    double worst = 0.0;
    for (std::size_t k = 0; k < systems.size(); ++k) {
      const MorseSystem& ms = systems[k];
      const FormPerturbation p = random_invariant_perturbation(ms, 1000 + k, 1.0);
      const MorseSystem primed = perturbed(ms, p);
      const TrackedLogs logs = track_torsion_logs([&](double t) { return build_thom_smale(perturbed(ms, p, t)); });
      for (ElementIndex g = 0; g < ms.sym().g().order(); ++g) {
        const cplx measured = tracked_ratio(ms.sym().chars(), logs, g);
        const cplx predicted = milnor_anomaly_ratio(anomaly_points(ms, primed, g));
        worst = std::max(worst, relative_error(measured, predicted));
      }
    }
    return Outcome{worst < tol::anomaly, "50 systems, all elements, max rel err " + sci(worst) + " (tol " +
                                             sci(tol::anomaly) + ")"};
  });

  report(5, "Witten deformation scales torsion by exp(-2T Tr_s[f])", [&] {
    double worst = 0.0;
    for (const MorseSystem& ms : systems)
      for (double T : {0.1, 1.0, 5.0}) {
        const TrackedLogs logs = track_torsion_logs([&](double t) { return build_thom_smale(witten_deform(ms, t * T)); });
        for (ElementIndex g = 0; g < ms.sym().g().order(); ++g) {
          const cplx predicted = std::exp(-2.0 * T * fixed_point_invariants(ms, g).trace_f);
          worst = std::max(worst, relative_error(tracked_ratio(ms.sym().chars(), logs, g), predicted));
        }
      }
    return Outcome{worst < tol::witten, "50 systems x T in {0.1, 1, 5}, max rel err " + sci(worst) + " (tol " +
                                            sci(tol::witten) + ")"};
  });

  report(6, "circle torsion (1 - mu)^-2 by both pipelines", [&] {
    double worst = 0.0;
    for (cplx mu : {cplx(2.0), cplx(0.0, 1.0), cplx(-3.0, 0.5)}) {
      const BilinearComplex c = build_thom_smale(circle_system(mu));
      const cplx expected = 1.0 / ((1.0 - mu) * (1.0 - mu));
      const double m = std::norm(1.0 - mu);
      worst = std::max(worst, relative_error(torsion_form_value(c), expected));
      for (double a : {0.5 * m, 2.0 * m}) worst = std::max(worst, relative_error(rs_torsion(c, a).value_at_element, expected));
    }
    return Outcome{worst < tol::circle, "mu in {2, i, -3+0.5i}, max rel err " + sci(worst) + " (tol " +
                                            sci(tol::circle) + ")"};
  });

  report(7, "d-invariance and form-orthogonality of eigenspaces", [&] {
    double worst = 0.0;
    const std::vector<BilinearComplex> more = random_population(50, 5000);
    for (const auto& c : more) {
      const SpectralResiduals r = spectral_residuals(c, generalized_eigenspaces(c));
      worst = std::max({worst, r.d_invariance, r.orthogonality, r.adjoint_invariance});
    }
    return Outcome{worst < tol::residuals, "50 complexes, max residual " + sci(worst) + " (tol " +
                                               sci(tol::residuals) + ")"};
  });

  report(8, "integral identities and digamma values", [&] {
    double worst = 0.0;
    bool ok = true;
    for (double beta : {pi / 3.0, pi / 2.0, 2.0 * pi / 3.0, pi})
      for (const IntegralCheck& c : check_integral_identities(beta, tol::integrals)) {
        worst = std::max(worst, std::abs(c.quadrature - c.closed_form));
        ok = ok && c.ok;
      }
    const double first = first_integral_identity().closed_form;
    const double first_err = std::abs(first - (1.0 - std::log(pi) + euler_gamma));
    const double d1 = std::abs(digamma(1.0) + euler_gamma);
    const double dh = std::abs(digamma(0.5) + euler_gamma + 2.0 * std::log(2.0));
    ok = ok && worst < tol::integrals && first_err < tol::digamma_values && d1 < tol::digamma_values &&
         dh < tol::digamma_values;
    return Outcome{ok, "quadrature max err " + sci(worst) + " (tol " + sci(tol::integrals) + "), psi(1) err " +
                           sci(d1) + ", psi(1/2) err " + sci(dh) + " (tol " + sci(tol::digamma_values) + ")"};
  });

  report(9, "model supertrace decays to chi'_g at rate <= -1.9", [&] {
    const std::vector<double> Ts{2.0, 4.0, 6.0, 8.0};
    bool ok = true;
    std::string detail;
    const DecayFit circle = model_trace_decay(circle_system(1.0), 0, Ts);
    ok = ok && (circle.converged || circle.slope <= tol::decay_slope);
    detail += "circle slope " + sci(circle.slope);
    const MorseSystem sphere = sphere_rotation(11, 4, 2);
    double steepest_allowed = -1e300;
    int converged = 0;
    for (ElementIndex g = 0; g < sphere.sym().g().order(); ++g) {
      const DecayFit fit = model_trace_decay(sphere, g, Ts);
      if (fit.converged) {
        ++converged;
        continue;
      }
      steepest_allowed = std::max(steepest_allowed, fit.slope);
      ok = ok && fit.slope <= tol::decay_slope;
    }
    detail += "; sphere rotation: " + std::to_string(converged) + " of 4 elements at roundoff";
    if (steepest_allowed > -1e300) detail += ", worst slope " + sci(steepest_allowed);
    return Outcome{ok, detail};
  });

  report(10, "gamma correction spot values 4 and 1/4", [&] {
    const double e1 = std::abs(gamma_correction(single_fixed_point(2, 0), 1) - 4.0);
    const double e2 = std::abs(gamma_correction(single_fixed_point(0, 2), 1) - 0.25);
    return Outcome{e1 < tol::gamma_values && e2 < tol::gamma_values,
                   "errors " + sci(e1) + ", " + sci(e2) + " (tol " + sci(tol::gamma_values) + ")"};
  });

  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
