#ifndef TORSION_FORGE_SCENARIO_HPP
#define TORSION_FORGE_SCENARIO_HPP

// Scenario files: a complex and/or a Morse system plus the checks to run on
// them. The report is plain JSON built in a fixed order, so the same
// scenario and seed give byte-identical output.

#include "torsion_forge/io.hpp"
#include "torsion_forge/morse_examples.hpp"
#include "torsion_forge/random.hpp"
#include "torsion_forge/spectral.hpp"

#include <filesystem>
#include <set>

namespace tforge {

inline const std::vector<std::string>& known_checks() {
  static const std::vector<std::string> names = {"validation", "character_identity", "rs_equivalence",
                                                 "cutoff_independence", "anomaly",  "witten",
                                                 "model_trace",  "integrals"};
  return names;
}

struct Scenario {
  std::uint64_t seed = 0;
  std::optional<BilinearComplex> complex;
  std::optional<MorseSystem> morse;
  std::vector<std::string> elements;  // labels; empty means every element
  std::vector<double> cutoffs;        // empty means suggested_cutoffs
  std::vector<double> deform;         // Witten parameters T
  std::vector<double> decay_T{2.0, 4.0, 6.0, 8.0};
  std::optional<GeometricInputs> geometric;
  std::vector<double> angles;         // for the integral identities
  std::vector<std::string> checks;    // empty means every applicable check
  Tolerances tol = Tolerances::from_environment();
};

namespace detail {

inline std::vector<double> read_reals(const io::json& j, const std::string& path) {
  std::vector<double> out;
  for (std::size_t k = 0; k < io::array_at(j, path).size(); ++k)
    out.push_back(io::read_real(j[k], path + "/" + std::to_string(k)));
  return out;
}

inline std::int64_t read_count(const io::json& j, const char* key, std::int64_t fallback, const std::string& path) {
  const io::json* v = io::optional_field(j, key);
  return v ? io::read_int(*v, path + "/" + key) : fallback;
}

inline MorseSystem example_system(const io::json& j, std::uint64_t seed, const std::string& path) {
  const io::json& name = io::field(j, "example", path);
  if (!name.is_string()) io::fail(path + "/example", "expected an example name");
  const std::string ex = name.get<std::string>();
  if (const io::json* s = io::optional_field(j, "seed")) seed = static_cast<std::uint64_t>(io::read_int(*s, path + "/seed"));
  auto group = [&]() -> Symmetry {
    const io::json* g = io::optional_field(j, "group");
    return g ? io::read_group(*g, path + "/group") : trivial_group();
  };
  if (ex == "circle") {
    auto get = [&](const char* key, cplx fallback) {
      const io::json* v = io::optional_field(j, key);
      return v ? io::read_complex(*v, path + "/" + key) : fallback;
    };
    return circle_system(get("mu", 1.0), get("form_min", 1.0), get("form_max", 1.0));
  }
  if (ex == "circle_reflection") return circle_reflection(seed, read_count(j, "fiber", 1, path));
  if (ex == "circle_free_rotation")
    return circle_free_rotation(seed, static_cast<std::size_t>(read_count(j, "k", 2, path)), read_count(j, "fiber", 1, path));
  if (ex == "circle_fiber_symmetry") return circle_fiber_symmetry(seed, group(), read_count(j, "max_fiber", 4, path));
  if (ex == "torus") return torus_system(seed, group(), read_count(j, "max_fiber", 3, path));
  if (ex == "sphere_rotation")
    return sphere_rotation(seed, static_cast<std::size_t>(read_count(j, "n", 2, path)), read_count(j, "max_fiber", 2, path));
  io::fail(path + "/example", "unknown example '" + ex + "'");
}

inline io::json load_ref(const io::json& j, const std::string& base, std::string& source) {
  if (!j.is_string()) return j;
  std::filesystem::path p(j.get<std::string>());
  if (p.is_relative()) p = std::filesystem::path(base) / p;
  source = p.string();
  return io::load_json(source);
}

}  // namespace detail

/// Reads a scenario; relative file references resolve against `base`.
inline Scenario read_scenario(const io::json& j, const std::string& base = ".") {
  Scenario s;
  if (!j.is_object()) io::fail("", "expected an object");
  if (const io::json* v = io::optional_field(j, "seed")) s.seed = static_cast<std::uint64_t>(io::read_int(*v, "/seed"));
  if (const io::json* v = io::optional_field(j, "tolerance")) {
    s.tol.check = io::read_real(*v, "/tolerance");
    if (!(s.tol.check > 0.0)) io::fail("/tolerance", "must be positive");
  }
  std::optional<Symmetry> group;
  if (const io::json* g = io::optional_field(j, "group")) group = io::read_group(*g, "/group");
  if (const io::json* c = io::optional_field(j, "complex")) {
    std::string src = "/complex";
    const io::json doc = detail::load_ref(*c, base, src);
    s.complex = io::with_source(src, [&] { return io::read_complex_json(doc, c->is_string() ? "" : "/complex", group); });
  }
  if (const io::json* r = io::optional_field(j, "random_complex")) {
    const std::string rp = "/random_complex";
    std::vector<Eigen::Index> dims;
    for (double d : detail::read_reals(io::field(*r, "dims", rp), rp + "/dims")) dims.push_back(static_cast<Eigen::Index>(d));
    RandomComplexOptions opt;
    if (const io::json* g = io::optional_field(*r, "group")) opt.symmetry = io::read_group(*g, rp + "/group");
    if (const io::json* b = io::optional_field(*r, "betti")) {
      std::vector<Eigen::Index> betti;
      for (double d : detail::read_reals(*b, rp + "/betti")) betti.push_back(static_cast<Eigen::Index>(d));
      opt.betti = betti;
    }
    if (s.complex) io::fail(rp, "give either complex or random_complex, not both");
    s.complex = generate_random_complex(s.seed, dims, opt);
  }
  if (const io::json* m = io::optional_field(j, "morse")) {
    std::string src = "/morse";
    const io::json doc = detail::load_ref(*m, base, src);
    s.morse = io::with_source(src, [&] {
      return io::optional_field(doc, "example") ? detail::example_system(doc, s.seed, m->is_string() ? "" : "/morse")
                                                : io::read_morse(doc, m->is_string() ? "" : "/morse", group);
    });
  }
  if (!s.complex && !s.morse && !io::optional_field(j, "angles"))
    io::fail("", "scenario needs a complex, a random_complex, a morse system or integral angles");
  if (const io::json* e = io::optional_field(j, "elements")) {
    for (std::size_t k = 0; k < io::array_at(*e, "/elements").size(); ++k) {
      if (!(*e)[k].is_string()) io::fail("/elements/" + std::to_string(k), "expected an element label");
      s.elements.push_back((*e)[k].get<std::string>());
    }
  }
  if (const io::json* v = io::optional_field(j, "cutoffs")) s.cutoffs = detail::read_reals(*v, "/cutoffs");
  if (const io::json* v = io::optional_field(j, "deform")) s.deform = detail::read_reals(*v, "/deform");
  if (const io::json* v = io::optional_field(j, "decay_T")) s.decay_T = detail::read_reals(*v, "/decay_T");
  if (const io::json* v = io::optional_field(j, "angles")) s.angles = detail::read_reals(*v, "/angles");
  if (const io::json* g = io::optional_field(j, "geometric")) {
    std::string src = "/geometric";
    const io::json doc = detail::load_ref(*g, base, src);
    s.geometric = io::with_source(src, [&] { return io::read_geometric(doc, g->is_string() ? "" : "/geometric"); });
  }
  if (const io::json* c = io::optional_field(j, "checks")) {
    for (std::size_t k = 0; k < io::array_at(*c, "/checks").size(); ++k) {
      const std::string p = "/checks/" + std::to_string(k);
      if (!(*c)[k].is_string()) io::fail(p, "expected a check name");
      const std::string name = (*c)[k].get<std::string>();
      const auto& all = known_checks();
      if (std::find(all.begin(), all.end(), name) == all.end()) io::fail(p, "unknown check '" + name + "'");
      s.checks.push_back(name);
    }
  }
  return s;
}

inline Scenario load_scenario(const std::string& file) {
  const std::string base = std::filesystem::path(file).parent_path().string();
  return io::with_source(file, [&] { return read_scenario(io::load_json(file), base.empty() ? "." : base); });
}

struct Report {
  io::json body;
  bool passed = true;
};

namespace detail {

class ReportBuilder {
 public:
  explicit ReportBuilder(const Scenario& s) : s_(s) {
    requested_ = s.checks.empty() ? std::set<std::string>() : std::set<std::string>(s.checks.begin(), s.checks.end());
  }

  bool wants(const std::string& name) const { return requested_.empty() || requested_.count(name); }

  void check(const std::string& name, const std::string& subject, double error, double tolerance) {
    const bool ok = std::isfinite(error) && error < tolerance;
    checks_.push_back({{"check", name}, {"subject", subject}, {"error", error}, {"tolerance", tolerance}, {"ok", ok}});
    passed_ = passed_ && ok;
  }
  void check_flag(const std::string& name, const std::string& subject, bool ok, const std::string& detail) {
    checks_.push_back({{"check", name}, {"subject", subject}, {"detail", detail}, {"ok", ok}});
    passed_ = passed_ && ok;
  }
  void failure(const std::string& name, const std::string& what) {
    checks_.push_back({{"check", name}, {"error_message", what}, {"ok", false}});
    passed_ = false;
  }

  io::json checks() const { return checks_; }
  bool passed() const { return passed_; }

 private:
  const Scenario& s_;
  std::set<std::string> requested_;
  io::json checks_ = io::json::array();
  bool passed_ = true;
};

inline std::vector<ElementIndex> selected_elements(const Symmetry& sym, const std::vector<std::string>& labels) {
  std::vector<ElementIndex> out;
  if (labels.empty()) {
    for (ElementIndex g = 0; g < sym.g().order(); ++g) out.push_back(g);
    return out;
  }
  for (const auto& l : labels) out.push_back(sym.g().index_of(l));
  return out;
}

inline io::json block_values(const TorsionCharacter& tc) {
  io::json out = io::json::array();
  for (const auto& e : tc.entries) out.push_back({{"block", e.name}, {"value", io::to_json(e.value)}});
  return out;
}

/// Torsion, spectral and cutoff checks on one complex.
inline io::json complex_section(const BilinearComplex& c, const Scenario& s, ReportBuilder& rb, const std::string& subject) {
  io::json out;
  out["dims"] = c.dims;
  const Diagnostic diag = validate_complex(c, s.tol);
  if (rb.wants("validation")) rb.check_flag("validation", subject, diag.ok, diag.ok ? "valid complex" : diag.message);
  if (!diag) {
    out["error"] = diag.message;
    return out;
  }
  const Symmetry sym = c.action ? c.action->symmetry : trivial_group();
  out["group_order"] = sym.g().order();
  out["betti"] = cohomology_basis(c, s.tol).betti;
  const EulerData eu = euler_data(c);
  out["euler_characteristic"] = eu.euler;

  const TorsionCharacter tc = equivariant_torsion(c, {}, s.tol);
  const cplx full = torsion_form_value(c, tc.lifted_generators(), {}, s.tol);
  io::json tor;
  tor["blocks"] = block_values(tc);
  tor["full_complex"] = io::to_json(full);
  io::json at = io::json::object();
  for (ElementIndex g : selected_elements(sym, s.elements)) {
    const CharacterValue v = evaluate_torsion_character(tc, g);
    at[sym.g().label(g)] = {{"value", io::to_json(v.value)}, {"warnings", v.warnings}};
  }
  tor["character_at"] = at;
  out["torsion"] = tor;
  if (rb.wants("character_identity"))
    rb.check("character_identity", subject,
             relative_error(evaluate_torsion_character(tc, sym.g().identity()).value, full), s.tol.check);

  const SpectralDecomposition spec = generalized_eigenspaces(c, s.tol);
  const std::vector<double> cutoffs = s.cutoffs.empty() ? suggested_cutoffs(spec) : s.cutoffs;
  out["spectrum_moduli"] = spectrum_moduli(spec);
  out["spectral_warnings"] = spec.warnings();
  io::json rs = io::json::array();
  std::vector<std::vector<cplx>> per_cutoff;
  for (double a : cutoffs) {
    io::json entry;
    entry["cutoff"] = a;
    const RsTorsionResult r = rs_torsion(c, a, {}, sym.g().identity(), s.tol);
    entry["blocks"] = block_values(r.character);
    io::json spectrum = io::json::array();
    for (const auto& deg : r.complement_spectrum) {
      io::json d = io::json::array();
      for (cplx z : deg) d.push_back(io::to_json(z));
      spectrum.push_back(d);
    }
    entry["complement_spectrum"] = spectrum;
    io::json vals = io::json::object();
    for (ElementIndex g : selected_elements(sym, s.elements)) {
      const RsTorsionResult rg = g == sym.g().identity() ? r : rs_torsion(c, a, {}, g, s.tol);
      vals[sym.g().label(g)] = {{"value", io::to_json(rg.value_at_element)}, {"warnings", rg.warnings}};
    }
    entry["value_at"] = vals;
    rs.push_back(entry);
    std::vector<cplx> v;
    for (const auto& e : r.character.entries) v.push_back(e.value);
    per_cutoff.push_back(v);
    if (rb.wants("rs_equivalence")) {
      double err = relative_error(r.value_at_element, full);
      for (std::size_t k = 0; k < v.size(); ++k) err = std::max(err, relative_error(v[k], tc.entries[k].value));
      rb.check("rs_equivalence", subject + " at cutoff " + std::to_string(a), err, s.tol.check);
    }
  }
  out["rs_torsion"] = rs;
  if (rb.wants("cutoff_independence") && per_cutoff.size() > 1) {
    double err = 0.0;
    for (std::size_t k = 1; k < per_cutoff.size(); ++k)
      for (std::size_t b = 0; b < per_cutoff[k].size(); ++b)
        err = std::max(err, relative_error(per_cutoff[k][b], per_cutoff[0][b]));
    rb.check("cutoff_independence", subject, err, s.tol.check);
  }
  return out;
}

inline io::json morse_section(const MorseSystem& ms, const Scenario& s, ReportBuilder& rb) {
  io::json out;
  const Diagnostic diag = validate_morse(ms, s.tol);
  if (rb.wants("validation")) rb.check_flag("validation", "morse system", diag.ok, diag.ok ? "valid system" : diag.message);
  if (!diag) {
    out["error"] = diag.message;
    return out;
  }
  const Symmetry sym = ms.sym();
  const BilinearComplex c = build_thom_smale(ms);
  out["thom_smale"] = complex_section(c, s, rb, "Thom-Smale complex");

  io::json elements = io::json::object();
  for (ElementIndex g : selected_elements(sym, s.elements)) {
    const std::string label = sym.g().label(g);
    io::json e;
    const FixedPointInvariants inv = fixed_point_invariants(ms, g);
    e["lefschetz_chi_g"] = io::to_json(inv.chi);
    e["chi_prime_g"] = io::to_json(inv.chi_prime);
    e["supertrace_f"] = io::to_json(inv.trace_f);
    e["gamma_correction"] = io::to_json(gamma_correction(ms, g));
    if (s.geometric) e["main_theorem_rhs"] = io::to_json(main_theorem_rhs(ms, g, *s.geometric));
    io::json pref = io::json::array(), model = io::json::array();
    for (double T : s.deform) {
      if (T <= 0.0) continue;
      pref.push_back({{"T", T}, {"value", io::to_json(deformation_prefactor(ms, g, T))}});
    }
    e["deformation_prefactor"] = pref;
    for (double T : s.decay_T) {
      const cplx m = instanton_model_trace(ms, g, T);
      model.push_back({{"T", T}, {"value", io::to_json(m)}, {"difference", std::abs(m - inv.chi_prime)}});
    }
    e["model_trace"] = model;
    if (rb.wants("model_trace") && s.decay_T.size() > 1) {
      const DecayFit fit = model_trace_decay(ms, g, s.decay_T);
      e["decay"] = {{"slope", fit.slope}, {"converged", fit.converged}};
      rb.check_flag("model_trace", "element " + label, fit.converged || fit.slope <= -1.9,
                    fit.converged ? "difference at roundoff level" : "fitted rate " + std::to_string(fit.slope));
    }
    elements[label] = e;
  }
  out["elements"] = elements;
  if (s.geometric) out["rs_anomaly_rhs"] = io::to_json(rs_anomaly_rhs(*s.geometric));

  if (rb.wants("anomaly")) {
    const FormPerturbation p = random_invariant_perturbation(ms, s.seed, 1.0);
    const MorseSystem primed = perturbed(ms, p, 1.0);
    const TrackedLogs logs = track_torsion_logs([&](double t) { return build_thom_smale(perturbed(ms, p, t)); }, 8, s.tol);
    io::json an = io::json::object();
    for (ElementIndex g : selected_elements(sym, s.elements)) {
      const cplx measured = tracked_ratio(sym.chars(), logs, g);
      const cplx predicted = milnor_anomaly_ratio(anomaly_points(ms, primed, g));
      an[sym.g().label(g)] = {{"measured", io::to_json(measured)}, {"predicted", io::to_json(predicted)}};
      rb.check("anomaly", "element " + sym.g().label(g), relative_error(measured, predicted), s.tol.check);
    }
    out["anomaly"] = an;
  }
  if (rb.wants("witten") && !s.deform.empty()) {
    io::json wt = io::json::array();
    for (double T : s.deform) {
      const TrackedLogs logs = track_torsion_logs([&](double t) { return build_thom_smale(witten_deform(ms, t * T)); }, 8, s.tol);
      io::json per = io::json::object();
      for (ElementIndex g : selected_elements(sym, s.elements)) {
        const cplx measured = tracked_ratio(sym.chars(), logs, g);
        const cplx predicted = std::exp(-2.0 * T * fixed_point_invariants(ms, g).trace_f);
        per[sym.g().label(g)] = {{"measured", io::to_json(measured)}, {"predicted", io::to_json(predicted)}};
        rb.check("witten", "T = " + std::to_string(T) + ", element " + sym.g().label(g),
                 relative_error(measured, predicted), s.tol.check);
      }
      wt.push_back({{"T", T}, {"ratio", per}});
    }
    out["witten"] = wt;
  }
  return out;
}

}  // namespace detail

inline io::json integral_report(const std::vector<double>& angles, double tol, detail::ReportBuilder* rb = nullptr) {
  io::json out = io::json::array();
  std::vector<IntegralCheck> all{first_integral_identity(tol)};
  for (double b : angles) all.push_back(angle_integral_identity(b, tol));
  for (const auto& c : all) {
    out.push_back({{"identity", c.name}, {"quadrature", c.quadrature}, {"closed_form", c.closed_form},
                   {"error_estimate", c.error_estimate}, {"ok", c.ok}});
    if (rb) rb->check("integrals", c.name, std::abs(c.quadrature - c.closed_form), tol);
  }
  return out;
}

/// Runs every requested check. Module errors become failed checks carrying
/// the error message; the report is still produced.
inline Report run_scenario(const Scenario& s) {
  detail::ReportBuilder rb(s);
  io::json body;
  body["seed"] = s.seed;
  body["tolerance"] = s.tol.check;
  auto guarded = [&](const std::string& section, auto&& f) {
    try {
      body[section] = f();
    } catch (const std::exception& e) {
      rb.failure(section, e.what());
    }
  };
  if (s.complex) guarded("complex", [&] { return detail::complex_section(*s.complex, s, rb, "complex"); });
  if (s.morse) guarded("morse", [&] { return detail::morse_section(*s.morse, s, rb); });
  if (rb.wants("integrals") && (!s.angles.empty() || !s.checks.empty()))
    guarded("integrals", [&] { return integral_report(s.angles, std::max(s.tol.check, 1e-8), &rb); });
  body["checks"] = rb.checks();
  body["passed"] = rb.passed();
  return Report{body, rb.passed()};
}

}  // namespace tforge

#endif  // TORSION_FORGE_SCENARIO_HPP
