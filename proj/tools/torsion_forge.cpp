// torsion-forge: command-line front end. Every subcommand prints JSON.
// Exit codes: 0 success, 1 a requested check or validation failed,
// 2 bad input or a numerical error.

#include "torsion_forge/scenario.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace tforge;
using io::json;

namespace {

struct Globals {
  std::optional<double> tolerance;
  std::optional<std::uint64_t> seed;
  std::string output;

  Tolerances tol() const {
    Tolerances t = Tolerances::from_environment();
    if (tolerance) t.check = *tolerance;
    return t;
  }
};

void emit(const Globals& g, const json& j) {
  const std::string text = j.dump(2) + "\n";
  if (g.output.empty()) std::cout << text;
  else io::write_text(g.output, text);
}

json character_value(const CharacterValue& v) { return {{"value", io::to_json(v.value)}, {"warnings", v.warnings}}; }

std::optional<Symmetry> maybe_group(const std::string& file) {
  if (file.empty()) return std::nullopt;
  return io::load_group(file);
}

ElementIndex element_or_identity(const Symmetry& s, const std::string& label) {
  return label.empty() ? s.g().identity() : s.g().index_of(label);
}

json blocks_json(const TorsionCharacter& tc) {
  json out = json::array();
  for (const auto& e : tc.entries) out.push_back({{"block", e.name}, {"value", io::to_json(e.value)}});
  return out;
}

int cmd_validate(const Globals& g, const std::string& group, const std::string& complex, const std::string& system) {
  json out;
  bool ok = true;
  const Tolerances tol = g.tol();
  if (group.empty() && complex.empty() && system.empty())
    throw Error(ErrorKind::invalid_input, "nothing to validate: give --group, --complex or --system");
  std::optional<Symmetry> sym;
  if (!group.empty()) {
    sym = io::load_group(group);  // throws on a failed axiom
    out["group"] = {{"ok", true}, {"order", sym->g().order()}, {"irreps", sym->chars().size()}};
  }
  if (!complex.empty()) {
    const BilinearComplex c = io::load_complex(complex, sym);
    const Diagnostic d = validate_complex(c, tol);
    out["complex"] = {{"ok", d.ok}, {"message", d.message}, {"witness", d.witness}};
    ok = ok && d.ok;
  }
  if (!system.empty()) {
    const MorseSystem ms = io::load_morse(system, sym);
    const Diagnostic d = validate_morse(ms, tol);
    out["system"] = {{"ok", d.ok}, {"message", d.message}, {"witness", d.witness}};
    ok = ok && d.ok;
  }
  emit(g, out);
  return ok ? 0 : 1;
}

int cmd_torsion(const Globals& g, const std::string& complex, const std::string& group, const std::string& hbasis,
                const std::string& element, bool all_elements) {
  const Tolerances tol = g.tol();
  const BilinearComplex c = io::load_complex(complex, maybe_group(group));
  BlockGenerators given;
  if (!hbasis.empty()) given = io::with_source(hbasis, [&] { return io::read_generators(io::load_json(hbasis), c, "", tol); });
  const TorsionCharacter tc = equivariant_torsion(c, given, tol);
  const Symmetry& s = tc.symmetry;
  json out;
  out["blocks"] = blocks_json(tc);
  out["identity_value"] = io::to_json(evaluate_torsion_character(tc, s.g().identity()).value);
  if (all_elements) {
    json at = json::object();
    for (ElementIndex k = 0; k < s.g().order(); ++k) at[s.g().label(k)] = character_value(evaluate_torsion_character(tc, k));
    out["character_at"] = at;
    const EulerData e = euler_data(c);
    out["euler_characteristic"] = e.euler;
    out["euler_per_irrep"] = e.euler_per_irrep;
  } else if (!element.empty()) {
    const ElementIndex k = s.g().index_of(element);
    out["at_element"] = {{"element", element}, {"result", character_value(evaluate_torsion_character(tc, k))}};
  }
  emit(g, out);
  return 0;
}

int cmd_rs(const Globals& g, const std::string& complex, double cutoff, const std::string& group,
           const std::string& hbasis, const std::string& element) {
  const Tolerances tol = g.tol();
  const BilinearComplex c = io::load_complex(complex, maybe_group(group));
  BlockGenerators given;
  if (!hbasis.empty()) given = io::with_source(hbasis, [&] { return io::read_generators(io::load_json(hbasis), c, "", tol); });
  const Symmetry s = c.action ? c.action->symmetry : trivial_group();
  const RsTorsionResult r = rs_torsion(c, cutoff, given, element_or_identity(s, element), tol);
  json out;
  out["cutoff"] = r.cutoff;
  out["blocks"] = blocks_json(r.character);
  json spec = json::array();
  for (const auto& deg : r.complement_spectrum) {
    json d = json::array();
    for (cplx z : deg) d.push_back(io::to_json(z));
    spec.push_back(d);
  }
  out["complement_spectrum"] = spec;
  out["element"] = s.g().label(r.element);
  out["value_at_element"] = io::to_json(r.value_at_element);
  out["warnings"] = r.warnings;
  emit(g, out);
  return 0;
}

int cmd_morse(const Globals& g, const std::string& system, const std::string& group, const std::string& emit_complex) {
  const MorseSystem ms = io::load_morse(system, maybe_group(group));
  require_valid(ms, g.tol());
  const BilinearComplex c = build_thom_smale(ms);
  if (!emit_complex.empty()) io::write_text(emit_complex, io::complex_to_json(c).dump(2) + "\n");
  json out;
  out["dims"] = c.dims;
  out["betti"] = cohomology_basis(c, g.tol()).betti;
  out["equivariant"] = c.action.has_value();
  if (!emit_complex.empty()) out["complex_written_to"] = emit_complex;
  else out["complex"] = io::complex_to_json(c);
  emit(g, out);
  return 0;
}

int cmd_invariants(const Globals& g, const std::string& system, const std::string& group, const std::string& element) {
  const MorseSystem ms = io::load_morse(system, maybe_group(group));
  require_valid(ms, g.tol());
  const ElementIndex k = element_or_identity(ms.sym(), element);
  const FixedPointInvariants inv = fixed_point_invariants(ms, k);
  emit(g, {{"element", ms.sym().g().label(k)},
           {"lefschetz_chi_g", io::to_json(inv.chi)},
           {"chi_prime_g", io::to_json(inv.chi_prime)},
           {"supertrace_f", io::to_json(inv.trace_f)}});
  return 0;
}

int cmd_anomaly(const Globals& g, const std::string& system, const std::string& perturbed_file,
                const std::string& group, const std::string& element) {
  const Tolerances tol = g.tol();
  const std::optional<Symmetry> sym = maybe_group(group);
  const MorseSystem ms = io::load_morse(system, sym);
  require_valid(ms, tol);
  FormPerturbation p;
  if (perturbed_file.empty()) {
    p = random_invariant_perturbation(ms, g.seed.value_or(0), 1.0);
  } else {
    // b' = b exp(M) with M the principal log of b^{-1} b'
    const MorseSystem other = io::load_morse(perturbed_file, sym);
    if (other.points.size() != ms.points.size())
      throw Error(ErrorKind::invalid_input, "perturbed system has a different set of critical points");
    for (std::size_t x = 0; x < ms.points.size(); ++x) {
      const CMatrix q = ms.points[x].fiber_gram.partialPivLu().solve(other.points[x].fiber_gram);
      p.generator.push_back(principal_log(q, "point '" + ms.points[x].name + "': log(b'/b) undefined; b and b' are not homotopic"));
    }
  }
  const MorseSystem primed = perturbed(ms, p, 1.0);
  require_valid(primed, tol);
  const TrackedLogs logs = track_torsion_logs([&](double t) { return build_thom_smale(perturbed(ms, p, t)); }, 8, tol);
  const Symmetry s = ms.sym();
  json out = json::object();
  bool ok = true;
  for (ElementIndex k = 0; k < s.g().order(); ++k) {
    if (!element.empty() && s.g().label(k) != element) continue;
    const cplx measured = tracked_ratio(s.chars(), logs, k);
    const cplx predicted = milnor_anomaly_ratio(anomaly_points(ms, primed, k));
    const double err = relative_error(measured, predicted);
    ok = ok && err < tol.check;
    out[s.g().label(k)] = {{"measured", io::to_json(measured)}, {"predicted", io::to_json(predicted)},
                           {"relative_error", err}};
  }
  if (!element.empty() && out.empty()) s.g().index_of(element);
  emit(g, {{"ratios", out}, {"ok", ok}});
  return ok ? 0 : 1;
}

int cmd_compare(const Globals& g, const std::string& system, const std::string& group, const std::string& element,
                const std::string& geometric, std::optional<double> T, std::optional<double> cutoff) {
  const Tolerances tol = g.tol();
  const MorseSystem ms = io::load_morse(system, maybe_group(group));
  require_valid(ms, tol);
  const GeometricInputs gi = geometric.empty() ? GeometricInputs{} : io::load_geometric(geometric);
  const ElementIndex k = element_or_identity(ms.sym(), element);
  const BilinearComplex c = build_thom_smale(ms);
  const TorsionCharacter tc = equivariant_torsion(c, {}, tol);
  const double a = cutoff ? *cutoff : suggested_cutoffs(generalized_eigenspaces(c, tol)).front();
  const RsTorsionResult rs = rs_torsion(c, a, {}, k, tol);
  json out;
  out["element"] = ms.sym().g().label(k);
  out["milnor_torsion"] = character_value(evaluate_torsion_character(tc, k));
  out["rs_torsion"] = {{"cutoff", a}, {"value", io::to_json(rs.value_at_element)}, {"warnings", rs.warnings}};
  out["gamma_correction"] = io::to_json(gamma_correction(ms, k));
  out["predicted_rhs"] = io::to_json(main_theorem_rhs(ms, k, gi));
  out["rs_anomaly_rhs"] = io::to_json(rs_anomaly_rhs(gi));
  if (T) {
    out["T"] = *T;
    out["prefactor"] = io::to_json(deformation_prefactor(ms, k, *T));
    out["model_trace"] = io::to_json(instanton_model_trace(ms, k, *T));
    out["chi_prime_g"] = io::to_json(fixed_point_invariants(ms, k).chi_prime);
  }
  emit(g, out);
  return 0;
}

int cmd_identities(const Globals& g, std::optional<double> beta) {
  const std::vector<double> angles =
      beta ? std::vector<double>{*beta}
           : std::vector<double>{std::numbers::pi / 3, std::numbers::pi / 2, 2 * std::numbers::pi / 3, std::numbers::pi};
  const double tol = g.tolerance ? *g.tolerance : 1e-8;
  const json r = integral_report(angles, tol);
  bool ok = true;
  for (const auto& c : r) ok = ok && c["ok"].get<bool>();
  emit(g, {{"identities", r}, {"ok", ok}});
  return ok ? 0 : 1;
}

int cmd_selftest(const Globals& g) {
  const std::uint64_t seed = g.seed.value_or(1);
  json checks = json::array();
  bool ok = true;
  auto add = [&](const std::string& name, double err, double tol) {
    const bool pass = std::isfinite(err) && err < tol;
    ok = ok && pass;
    checks.push_back({{"check", name}, {"error", err}, {"tolerance", tol}, {"ok", pass}});
  };
  for (cplx mu : {cplx(2.0, 0.0), cplx(0.0, 1.0), cplx(-3.0, 0.5)}) {
    const BilinearComplex c = build_thom_smale(circle_system(mu));
    const cplx expected = 1.0 / ((1.0 - mu) * (1.0 - mu));
    add("circle torsion", relative_error(torsion_form_value(c), expected), 1e-10);
    for (double a : suggested_cutoffs(generalized_eigenspaces(c)))
      add("circle spectral-cutoff torsion", relative_error(rs_torsion(c, a).value_at_element, expected), 1e-10);
  }
  add("digamma(1)", std::abs(digamma(1.0) + euler_gamma), 1e-12);
  add("digamma(1/2)", std::abs(digamma(0.5) + euler_gamma + 2.0 * std::log(2.0)), 1e-12);
  add("gamma correction (2,0)", std::abs(gamma_correction(single_fixed_point(2, 0), 1) - 4.0), 1e-10);
  add("gamma correction (0,2)", std::abs(gamma_correction(single_fixed_point(0, 2), 1) - 0.25), 1e-10);
  for (const auto& c : integral_report({std::numbers::pi / 3, std::numbers::pi / 2, 2 * std::numbers::pi / 3, std::numbers::pi}, 1e-8))
    add(c["identity"].get<std::string>(), std::abs(c["quadrature"].get<double>() - c["closed_form"].get<double>()), 1e-8);
  const Symmetry groups[] = {cyclic_group(2), cyclic_group(3), symmetric_group3()};
  for (std::uint64_t k = 0; k < 6; ++k) {
    RandomComplexOptions opt;
    opt.symmetry = groups[k % 3];
    const BilinearComplex c = generate_random_complex(seed + k, {3, 5, 3}, opt);
    const TorsionCharacter tc = equivariant_torsion(c);
    const cplx full = torsion_form_value(c, tc.lifted_generators());
    add("character identity", relative_error(evaluate_torsion_character(tc, 0).value, full), 1e-9);
    add("spectral-cutoff agreement",
        relative_error(rs_torsion(c, suggested_cutoffs(generalized_eigenspaces(c)).front()).value_at_element, full), 1e-7);
  }
  emit(g, {{"seed", seed}, {"checks", checks}, {"ok", ok}});
  return ok ? 0 : 1;
}

int cmd_run(const Globals& g, const std::string& scenario) {
  Scenario s = load_scenario(scenario);
  if (g.tolerance) s.tol.check = *g.tolerance;
  if (g.seed && *g.seed != s.seed) {
    // the seed feeds generated content, so reload with the override
    json j = io::load_json(scenario);
    j["seed"] = *g.seed;
    const std::string base = std::filesystem::path(scenario).parent_path().string();
    s = io::with_source(scenario, [&] { return read_scenario(j, base.empty() ? "." : base); });
    if (g.tolerance) s.tol.check = *g.tolerance;
  }
  const Report r = run_scenario(s);
  emit(g, r.body);
  return r.passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Equivariant symmetric bilinear torsion of finite complexes and Thom-Smale complexes"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--tolerance", g.tolerance, "Tolerance for identity checks (overrides TORSION_FORGE_TOLERANCE)")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", g.seed, "Seed for generated data");
  app.add_option("--output", g.output, "Write the JSON result to this file");

  std::string group, complex, system, hbasis, element, emit_complex, perturbed_file, geometric, scenario;
  double cutoff = 0.0;
  std::optional<double> beta, deform, compare_cutoff;

  auto* validate = app.add_subcommand("validate", "Validate a group, complex or Morse system");
  validate->add_option("--group", group, "Group JSON");
  validate->add_option("--complex", complex, "Complex JSON");
  validate->add_option("--system", system, "Morse system JSON");

  auto* torsion = app.add_subcommand("torsion", "Torsion via the canonical isomorphism");
  torsion->add_option("--complex", complex, "Complex JSON")->required();
  torsion->add_option("--group", group, "Group JSON for an action without its own group");
  torsion->add_option("--h-basis", hbasis, "Cohomology basis JSON");
  torsion->add_option("--at-element", element, "Evaluate the torsion character at this element");

  auto* equiv = app.add_subcommand("equiv-torsion", "Per-irrep torsion and its character");
  equiv->add_option("--complex", complex, "Complex JSON")->required();
  equiv->add_option("--group", group, "Group JSON for an action without its own group");
  equiv->add_option("--h-basis", hbasis, "Per-block cohomology bases JSON");

  auto* rs = app.add_subcommand("rs-torsion", "Spectral-cutoff torsion");
  rs->add_option("--complex", complex, "Complex JSON")->required();
  rs->add_option("--cutoff", cutoff, "Spectral cutoff a >= 0")->required();
  rs->add_option("--group", group, "Group JSON for an action without its own group");
  rs->add_option("--h-basis", hbasis, "Cohomology basis JSON");
  rs->add_option("--at-element", element, "Group element");

  auto* morse = app.add_subcommand("morse", "Build the Thom-Smale complex");
  morse->add_option("--system", system, "Morse system JSON")->required();
  morse->add_option("--group", group, "Group JSON");
  morse->add_option("--emit-complex", emit_complex, "Write the complex to this file");

  auto* inv = app.add_subcommand("morse-invariants", "Fixed-point sums of an element");
  inv->add_option("--system", system, "Morse system JSON")->required();
  inv->add_option("--group", group, "Group JSON");
  inv->add_option("--element", element, "Group element (default identity)");

  auto* anomaly = app.add_subcommand("anomaly", "Measured vs predicted torsion ratio under a change of fiber forms");
  anomaly->add_option("--system", system, "Morse system JSON")->required();
  anomaly->add_option("--perturbed", perturbed_file, "Same system with the new fiber forms (default: random, from --seed)");
  anomaly->add_option("--group", group, "Group JSON");
  anomaly->add_option("--element", element, "Only this element");

  auto* compare = app.add_subcommand("compare", "Torsions and comparison formulas at an element");
  compare->add_option("--system", system, "Morse system JSON")->required();
  compare->add_option("--group", group, "Group JSON");
  compare->add_option("--element", element, "Group element (default identity)");
  compare->add_option("--geometric", geometric, "Geometric inputs JSON");
  compare->add_option("--deform", deform, "Witten parameter T > 0");
  compare->add_option("--cutoff", compare_cutoff, "Spectral cutoff (default: below the spectrum)");

  auto* ident = app.add_subcommand("identities", "Quadrature checks of the two integral identities");
  ident->add_option("--beta", beta, "Angle in (0, pi]");

  app.add_subcommand("selftest", "Built-in consistency checks");

  auto* run = app.add_subcommand("run", "Run a scenario file");
  run->add_option("--scenario", scenario, "Scenario JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // help and version exit 0; usage errors share the error exit code
    return app.exit(e) == 0 ? 0 : 2;
  }
  try {
    if (*validate) return cmd_validate(g, group, complex, system);
    if (*torsion) return cmd_torsion(g, complex, group, hbasis, element, false);
    if (*equiv) return cmd_torsion(g, complex, group, hbasis, "", true);
    if (*rs) return cmd_rs(g, complex, cutoff, group, hbasis, element);
    if (*morse) return cmd_morse(g, system, group, emit_complex);
    if (*inv) return cmd_invariants(g, system, group, element);
    if (*anomaly) return cmd_anomaly(g, system, perturbed_file, group, element);
    if (*compare) return cmd_compare(g, system, group, element, geometric, deform, compare_cutoff);
    if (*ident) return cmd_identities(g, beta);
    if (app.got_subcommand("selftest")) return cmd_selftest(g);
    if (*run) return cmd_run(g, scenario);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
