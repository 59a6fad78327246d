#include "torsion_forge/io.hpp"
#include "torsion_forge/scenario.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>

using namespace tforge;
namespace fs = std::filesystem;

namespace {

const std::string data_dir = TF_DATA_DIR;
const std::string cli = TF_CLI_PATH;

std::string data(const std::string& name) { return data_dir + "/" + name; }

fs::path temp_file(const std::string& name) { return fs::temp_directory_path() / ("tforge_" + name); }

void expect_same_matrix(const CMatrix& a, const CMatrix& b) {
  ASSERT_EQ(a.rows(), b.rows());
  ASSERT_EQ(a.cols(), b.cols());
  EXPECT_EQ(a, b);
}

void expect_same_complex(const BilinearComplex& a, const BilinearComplex& b) {
  ASSERT_EQ(a.dims, b.dims);
  for (std::size_t i = 0; i < a.d.size(); ++i) expect_same_matrix(a.d[i], b.d[i]);
  for (std::size_t i = 0; i < a.gram.size(); ++i) expect_same_matrix(a.gram[i], b.gram[i]);
  ASSERT_EQ(a.action.has_value(), b.action.has_value());
  if (!a.action) return;
  ASSERT_EQ(a.action->matrices.size(), b.action->matrices.size());
  for (std::size_t g = 0; g < a.action->matrices.size(); ++g)
    for (std::size_t i = 0; i < a.dims.size(); ++i) expect_same_matrix(a.action->matrices[g][i], b.action->matrices[g][i]);
}

// Runs the CLI and returns its exit status; stdout goes to `out`.
int run_cli(const std::string& args, const fs::path& out) {
  const std::string cmd = "\"" + cli + "\" " + args + " > \"" + out.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string parse_error_message(const std::string& text) {
  try {
    io::parse_text(text, "inline.json");
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::parse);
    return e.what();
  }
  return "";
}

std::string read_error_message(const std::string& text) {
  try {
    io::read_complex_json(io::parse_text(text));
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(JsonRoundTrip, Groups) {
  for (const Symmetry& s : {cyclic_group(2), cyclic_group(5), symmetric_group3(), trivial_group()}) {
    const Symmetry back = io::read_group(io::group_to_json(s));
    ASSERT_EQ(back.g().order(), s.g().order());
    for (ElementIndex a = 0; a < s.g().order(); ++a)
      for (ElementIndex b = 0; b < s.g().order(); ++b) EXPECT_EQ(back.g().mul(a, b), s.g().mul(a, b));
    ASSERT_EQ(back.chars().size(), s.chars().size());
    for (IrrepIndex w = 0; w < s.chars().size(); ++w) EXPECT_EQ(back.chars()[w].values, s.chars()[w].values);
  }
  EXPECT_EQ(io::read_group(io::json("S3")).g().order(), 6u);
}

TEST(JsonRoundTrip, ComplexesAreLossless) {
  RandomComplexOptions opt;
  opt.symmetry = symmetric_group3();
  for (const BilinearComplex& c : {generate_random_complex(7, {3, 4, 2}, opt), generate_random_complex(1, {2, 2})}) {
    const io::json j = io::complex_to_json(c);
    const BilinearComplex back = io::read_complex_json(io::parse_text(j.dump()));
    expect_same_complex(c, back);
  }
}

TEST(JsonRoundTrip, MorseSystemsAreLossless) {
  for (const MorseSystem& ms : {circle_reflection(5, 2), sphere_rotation(11, 4, 2), torus_system(13, symmetric_group3())}) {
    const MorseSystem back = io::read_morse(io::parse_text(io::morse_to_json(ms).dump()));
    ASSERT_EQ(back.points.size(), ms.points.size());
    for (std::size_t x = 0; x < ms.points.size(); ++x) {
      EXPECT_EQ(back.points[x].name, ms.points[x].name);
      EXPECT_EQ(back.points[x].index, ms.points[x].index);
      EXPECT_EQ(back.points[x].value, ms.points[x].value);
      expect_same_matrix(back.points[x].fiber_gram, ms.points[x].fiber_gram);
    }
    ASSERT_EQ(back.instantons.size(), ms.instantons.size());
    expect_same_complex(build_thom_smale(ms), build_thom_smale(back));
    for (ElementIndex g = 0; g < ms.sym().g().order(); ++g) {
      EXPECT_EQ(gamma_correction(back, g), gamma_correction(ms, g));
      EXPECT_EQ(instanton_model_trace(back, g, 2.0), instanton_model_trace(ms, g, 2.0));
    }
  }
}

TEST(JsonRoundTrip, BasisAndGeometricInputs) {
  const BilinearComplex c = generate_random_complex(3, {3, 4, 2}, {std::nullopt, std::vector<Eigen::Index>{1, 1, 1}});
  const CohomologyBasis h = cohomology_basis(c);
  const CohomologyBasis back = io::read_basis(io::parse_text(io::basis_to_json(h).dump()), "", c.dims);
  ASSERT_EQ(back.representatives.size(), h.representatives.size());
  for (std::size_t i = 0; i < h.representatives.size(); ++i) expect_same_matrix(back.representatives[i], h.representatives[i]);

  GeometricInputs gi;
  gi.mq_integral = cplx(0.1, -0.7);
  gi.cs_integral = cplx(1.0 / 3.0, 0.0);
  const GeometricInputs g2 = io::read_geometric(io::parse_text(io::geometric_to_json(gi).dump()));
  EXPECT_EQ(g2.mq_integral, gi.mq_integral);
  EXPECT_EQ(g2.cs_integral, gi.cs_integral);
  EXPECT_EQ(g2.euler_log_integral, cplx(0.0));
  EXPECT_THROW(io::read_geometric(io::parse_text(R"({"mq_integrall": 1})")), Error);
}

TEST(JsonErrors, ParseErrorReportsLineAndColumn) {
  const std::string msg = parse_error_message("{\n  \"dims\": [1, 1],\n  \"d\": [[[2.0]]\n}");
  EXPECT_NE(msg.find("inline.json:4:1"), std::string::npos) << msg;
}

TEST(JsonErrors, FieldErrorsReportPath) {
  EXPECT_NE(read_error_message(R"({"dims": [1, 1], "d": [[[1.0, 2.0]]]})").find("/d/0"), std::string::npos);
  EXPECT_NE(read_error_message(R"({"dims": [1, "x"]})").find("/dims/1"), std::string::npos);
  EXPECT_NE(read_error_message(R"({"d": []})").find("dims"), std::string::npos);
}

TEST(JsonErrors, InvalidComplexRejectedOnLoad) {
  const fs::path f = temp_file("bad_complex.json");
  io::write_text(f.string(), R"({"dims": [1, 1, 1], "d": [[[1.0]], [[1.0]]]})");
  EXPECT_TRUE(validate_complex(io::load_complex(f.string())).message.find("d^2") != std::string::npos);
  fs::remove(f);
}

TEST(RandomComplex, DeterministicAndValid) {
  const BilinearComplex a = generate_random_complex(7, {1, 1});
  const BilinearComplex b = generate_random_complex(7, {1, 1});
  expect_same_complex(a, b);
  EXPECT_TRUE(validate_complex(a).ok);
  RandomComplexOptions opt;
  opt.symmetry = cyclic_group(2);
  const BilinearComplex c = generate_random_complex(7, {3, 4, 2}, opt);
  EXPECT_TRUE(validate_complex(c).ok);
  EXPECT_EQ(c.dims, (std::vector<Eigen::Index>{3, 4, 2}));
  ASSERT_TRUE(c.action.has_value());
  EXPECT_EQ(c.action->matrices.size(), 2u);
}

TEST(RandomComplex, RequestedBettiNumbers) {
  RandomComplexOptions opt;
  opt.betti = std::vector<Eigen::Index>{1, 2, 0};
  const BilinearComplex c = generate_random_complex(9, {2, 5, 2}, opt);
  EXPECT_EQ(cohomology_basis(c).betti, *opt.betti);
}

TEST(RandomComplex, InfeasibleRequestRejected) {
  RandomComplexOptions opt;
  opt.betti = std::vector<Eigen::Index>{0, 0};
  EXPECT_THROW(generate_random_complex(1, {1, 2}, opt), Error);  // Euler characteristic mismatch
  EXPECT_THROW(generate_random_complex(1, {}), Error);
}

TEST(Scenarios, BundledScenariosPass) {
  for (const char* name : {"circle_mu2.json", "random_z3.json", "sphere_rotation.json", "reflection.json"}) {
    const Report r = run_scenario(load_scenario(data("scenarios/") + name));
    EXPECT_TRUE(r.passed) << name << "\n" << r.body["checks"].dump(1);
  }
}

TEST(Scenarios, CircleMuTwoHasTorsionOne) {
  const Report r = run_scenario(load_scenario(data("scenarios/circle_mu2.json")));
  const auto& v = r.body["morse"]["thom_smale"]["torsion"]["full_complex"];
  EXPECT_NEAR(v[0].get<double>(), 1.0, 1e-12);
  EXPECT_NEAR(v[1].get<double>(), 0.0, 1e-12);
}

TEST(Scenarios, ReportsAreDeterministic) {
  const Scenario s = load_scenario(data("scenarios/random_z3.json"));
  EXPECT_EQ(run_scenario(s).body.dump(), run_scenario(s).body.dump());
}

TEST(Scenarios, MalformedScenarioNamesFileAndLine) {
  try {
    load_scenario(data("scenarios/malformed.json"));
    FAIL() << "expected a parse error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::parse);
    EXPECT_NE(std::string(e.what()).find("malformed.json:5:1"), std::string::npos) << e.what();
  }
}

TEST(Scenarios, UnknownCheckRejected) {
  EXPECT_THROW(read_scenario(io::parse_text(R"({"morse": {"example": "circle"}, "checks": ["nonsense"]})")), Error);
}

TEST(Cli, TorsionOfTwoTermComplex) {
  const fs::path out = temp_file("cli_torsion.json");
  ASSERT_EQ(run_cli("torsion --complex \"" + data("two_term.json") + "\"", out), 0);
  const io::json j = io::load_json(out.string());
  EXPECT_NEAR(j["identity_value"][0].get<double>(), 0.25, 1e-14);
  fs::remove(out);
}

TEST(Cli, RunScenarioAndExitCodes) {
  const fs::path out = temp_file("cli_run.json");
  EXPECT_EQ(run_cli("run --scenario \"" + data("scenarios/reflection.json") + "\"", out), 0);
  EXPECT_TRUE(io::load_json(out.string())["passed"].get<bool>());
  EXPECT_EQ(run_cli("run --scenario \"" + data("scenarios/malformed.json") + "\"", out), 2);
  EXPECT_EQ(run_cli("torsion", out), 2);  // missing required option
  fs::remove(out);
}

TEST(Cli, ValidateReportsFailureWithExitOne) {
  const fs::path bad = temp_file("cli_bad.json"), out = temp_file("cli_validate.txt");
  io::write_text(bad.string(), R"({"dims": [1, 1, 1], "d": [[[1.0]], [[1.0]]]})");
  EXPECT_EQ(run_cli("validate --complex \"" + bad.string() + "\"", out), 1);
  EXPECT_EQ(run_cli("validate --complex \"" + data("z2_swap.json") + "\"", out), 0);
  fs::remove(bad);
  fs::remove(out);
}

TEST(Cli, SeedAndOutputOptions) {
  const fs::path out = temp_file("cli_out.json"), log = temp_file("cli_log.txt");
  ASSERT_EQ(run_cli("identities --beta 1.5 --output \"" + out.string() + "\"", log), 0);
  const io::json j = io::load_json(out.string());
  EXPECT_FALSE(j.empty());
  EXPECT_EQ(run_cli("selftest --seed 3", log), 0);
  fs::remove(out);
  fs::remove(log);
}
