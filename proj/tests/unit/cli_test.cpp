#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "fracmaps/cli/artifacts.hpp"
#include "fracmaps/cli/config.hpp"
#include "fracmaps/cli/experiments.hpp"
#include "fracmaps/format.hpp"
#include "fracmaps/lattice_io.hpp"

using namespace fracmaps;
using namespace fracmaps::cli;
namespace fs = std::filesystem;

namespace {

ExperimentConfig parse(const std::string& text, const fs::path& base = {}) {
  std::istringstream in(text);
  return parse_config(in, base);
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::path(testing::TempDir()) / ("fracmaps_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json read_json(const fs::path& p) { return Json::parse(slurp(p)); }

// Data rows of a CSV artifact (header comments and column line dropped).
std::vector<std::vector<std::string>> rows(const fs::path& p) {
  std::istringstream in(slurp(p));
  std::vector<std::vector<std::string>> out;
  bool header = true;
  for (std::string line; std::getline(in, line);) {
    if (line.starts_with("#")) continue;
    if (header) {
      header = false;
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ls(line);
    for (std::string c; std::getline(ls, c, ',');) cells.push_back(c);
    out.push_back(cells);
  }
  return out;
}

std::string column_line(const fs::path& p) {
  std::istringstream in(slurp(p));
  for (std::string line; std::getline(in, line);)
    if (!line.starts_with("#")) return line;
  return {};
}

int run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  return run_cli(args, out, err);
}

}  // namespace

TEST(Config, DefaultsRatiosAndComments) {
  const ExperimentConfig c = parse("# comment\ns = 0.3  # trailing\nh = 1/16\nprobe_radii = 0.1, 0.2 0.3\n\n");
  EXPECT_EQ(c.s, 0.3);
  EXPECT_EQ(c.h, 0.0625);
  EXPECT_EQ(c.probe_radii, (std::vector<double>{0.1, 0.2, 0.3}));
  EXPECT_EQ(c.exterior_above, (std::vector<double>{1.0, 0.0}));
  EXPECT_EQ(c.exterior_below, (std::vector<double>{-1.0, 0.0}));
  EXPECT_EQ(c.holder_radii, (std::vector<double>{0.125, 0.25, 0.5, 1.0}));
}

TEST(Config, UnknownKeyCarriesLineAndField) {
  try {
    parse("s = 0.25\n\nsolver.tolerance = 1e-6\n");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.line(), 3);
    EXPECT_EQ(e.field(), "solver.tolerance");
  }
}

TEST(Config, DomainAndCrossFieldChecks) {
  const auto field_of = [](const std::string& text) {
    try {
      parse(text);
    } catch (const ConfigError& e) {
      return e.field() + "@" + std::to_string(e.line());
    }
    return std::string("accepted");
  };
  EXPECT_EQ(field_of("h = 1/32\ns = 0.7\n"), "s@2");
  EXPECT_EQ(field_of("s = 0.5\n"), "s@1");
  EXPECT_EQ(field_of("h = 0.3\n"), "h@1");
  EXPECT_EQ(field_of("R = 1\n"), "R@1");
  EXPECT_EQ(field_of("s = 0.2\ns = 0.3\n"), "s@2");
  EXPECT_EQ(field_of("s = abc\n"), "s@1");
  EXPECT_EQ(field_of("target = torus\n"), "target@1");
  EXPECT_EQ(field_of("exterior.above = 1 1\n"), "exterior.above@1");
  EXPECT_EQ(field_of("target_dim = 2\nexterior.above = 1 0\n"), "exterior.above@2");
  EXPECT_EQ(field_of("exterior = csv\nexterior.file = /nonexistent/map.csv\n"), "exterior.file@2");
  EXPECT_EQ(field_of("blowup.scales = 0.25 0.5 0.1\n"), "blowup.scales@1");
  EXPECT_EQ(field_of("solver.backtrack = 2\n"), "solver@0");
  EXPECT_EQ(field_of("stability.theta = 2\n"), "stability.theta@1");
  EXPECT_EQ(field_of("just text\n"), "just text@1");
  EXPECT_EQ(field_of("target = point_pair\nexterior.above = 1\nexterior.below = -1\nexterior.value = 1\n"),
            "accepted");
}

TEST(Config, RenderedConfigReparsesToItself) {
  const ExperimentConfig c = parse("s = 0.3\nh = 1/16\ntarget_dim = 2\nseed = 11\nholder.points = 0.1 0.2\n");
  const std::string text = render_config(c);
  EXPECT_EQ(render_config(parse(text)), text);
  EXPECT_NE(text.find("seed = 11\n"), std::string::npos);
  EXPECT_NE(text.find("exterior.above = 1 0 0\n"), std::string::npos);
}

TEST(Config, RelativePathsResolveAgainstTheConfigDirectory) {
  const fs::path dir = scratch("paths");
  {
    ExperimentConfig defaults;
    validate(defaults);
    std::ofstream f(dir / "map.csv");
    write_lattice_csv(f, initial_lattice(defaults));
  }
  std::ofstream(dir / "run.cfg") << "map_source = file\nmap_file = map.csv\n";
  EXPECT_EQ(load_config(dir / "run.cfg").map_file, (dir / "map.csv").lexically_normal());
}

TEST(Artifacts, Sha256KnownVectorAndTamperDetection) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  const fs::path dir = scratch("artifacts");
  const Provenance p{"test", {{"s", "0.25"}}};
  write_csv_artifact(dir / "a.csv", p, "r,theta\n1,2\n");
  write_json_artifact(dir / "a.json", p, Json{{"x", 1.5}, {"list", {1, 2}}});
  EXPECT_TRUE(verify_artifact(dir / "a.csv"));
  EXPECT_TRUE(verify_artifact(dir / "a.json"));
  EXPECT_EQ(read_json(dir / "a.json").begin().key(), "provenance");
  std::string text = slurp(dir / "a.csv");
  text.back() = '3';
  std::ofstream(dir / "a.csv", std::ios::binary) << text;
  EXPECT_FALSE(verify_artifact(dir / "a.csv"));
}

TEST(RunMinimize, ConstantExteriorGivesTheConstantMap) {
  const fs::path dir = scratch("min_const");
  std::ofstream(dir / "c.cfg") << "exterior = constant\nexterior.value = 0 1\nh = 1/16\n";
  EXPECT_EQ(run({"minimize", "--config", (dir / "c.cfg").string(), "--out", (dir / "out").string()}), exit_ok);
  const Json rep = read_json(dir / "out" / "solve_report.json");
  EXPECT_EQ(rep["termination"], "converged");
  EXPECT_LE(rep["final_energy"].get<double>(), 1e-12);
  EXPECT_TRUE(verify_artifact(dir / "out" / "map.csv"));
}

TEST(RunMinimize, JumpExteriorOnTheCircleDropsBelowTheJumpEnergy) {
  const fs::path dir = scratch("min_jump");
  std::ofstream(dir / "j.cfg") << "s = 0.25\nh = 1/16\nsolver.perturbation = 1e-3\nseed = 3\n";
  EXPECT_EQ(run({"minimize", "--config", (dir / "j.cfg").string(), "--out", (dir / "out").string()}), exit_ok);
  const Json rep = read_json(dir / "out" / "solve_report.json");
  EXPECT_LT(rep["final_energy"].get<double>(), 4.513517);
  EXPECT_NEAR(rep["initial_energy"].get<double>(), 4.51351666838205027, 1e-3);
  EXPECT_TRUE(rep["energy_monotone"].get<bool>());
  std::ifstream in(dir / "out" / "map.csv");
  EXPECT_EQ(read_lattice_csv(in).grid().h(), 1.0 / 16);
}

TEST(RunMinimize, ExitCodes) {
  const fs::path dir = scratch("exit_codes");
  std::ofstream(dir / "bad.cfg") << "s = 0.7\n";
  EXPECT_EQ(run({"minimize", "--config", (dir / "bad.cfg").string(), "--out", dir.string()}), exit_config);
  std::ofstream(dir / "short.cfg") << "solver.max_iters = 2\nsolver.perturbation = 1e-3\n";
  EXPECT_EQ(run({"minimize", "--config", (dir / "short.cfg").string(), "--out", dir.string()}),
            exit_no_convergence);
  EXPECT_EQ(run({"frobnicate"}), exit_config);
  EXPECT_EQ(run({"minimize", "--threads", "x"}), exit_config);
  EXPECT_EQ(run({"--help"}), exit_ok);
}

TEST(RunMinimize, SeedFlagOverridesTheConfig) {
  const fs::path dir = scratch("seed");
  std::ofstream(dir / "r.cfg") << "init = random\nh = 1/8\nsolver.max_iters = 3\nseed = 1\n";
  const auto map_after = [&](const std::string& seed) {
    run({"minimize", "--config", (dir / "r.cfg").string(), "--out", (dir / seed).string(), "--seed", seed});
    return slurp(dir / seed / "map.csv");
  };
  EXPECT_NE(map_after("1"), map_after("2"));
  EXPECT_NE(slurp(dir / "2" / "map.csv").find("# config seed = 2"), std::string::npos);
}

TEST(RunExtension, ConstantDataAndJumpData) {
  const fs::path dir = scratch("extend");
  std::ofstream(dir / "c.cfg") << "exterior = constant\nextension.grid = -1 1 1 1/32 1/32\n"
                                  "probe_radii = 0.125 0.25 0.5\n";
  EXPECT_EQ(run({"extend", "--config", (dir / "c.cfg").string(), "--out", (dir / "c").string()}), exit_ok);
  const Json c = read_json(dir / "c" / "residual.json");
  EXPECT_EQ(c["residual_all_nodes"].get<double>(), 0.0);
  for (const auto& row : rows(dir / "c" / "field.csv")) EXPECT_EQ(row[2] + "," + row[3], "1,0");

  std::ofstream(dir / "j.cfg") << "extension.grid = -1 1 1 1/128 1/128\nprobe_points = 0\n"
                                  "probe_radii = 0.0625 0.125 0.25 0.5\n";
  EXPECT_EQ(run({"extend", "--config", (dir / "j.cfg").string(), "--out", (dir / "j").string()}), exit_ok);
  EXPECT_EQ(column_line(dir / "j" / "profile_0.csv"), "r,theta");
  const auto profile = rows(dir / "j" / "profile_0.csv");
  ASSERT_EQ(profile.size(), 4u);
  double lo = INFINITY, hi = 0.0;
  for (const auto& r : profile) {
    ASSERT_EQ(r.size(), 2u);
    EXPECT_EQ(r[1], format_real(std::stod(r[1])));
    lo = std::min(lo, std::stod(r[1]));
    hi = std::max(hi, std::stod(r[1]));
  }
  EXPECT_LT((hi - lo) / lo, 0.02);
  const Json j = read_json(dir / "j" / "residual.json");
  EXPECT_EQ(j["refinement"].size(), 2u);
  EXPECT_LT(j["refinement"][1]["residual"].get<double>(), j["refinement"][0]["residual"].get<double>());
}

TEST(RunStability, DefaultGrid) {
  const fs::path dir = scratch("stability");
  EXPECT_EQ(run({"stability", "--out", dir.string()}), exit_ok);
  EXPECT_EQ(column_line(dir / "stability.csv"), "s,alpha,beta,E0,dE,d2E_antipodal,identity_residual,identity_check");
  const auto table = rows(dir / "stability.csv");
  EXPECT_EQ(table.size(), 36u);
  for (const auto& r : table) {
    EXPECT_EQ(r[7], "pass");
    EXPECT_LT(std::stod(r[5]), 0.0);
    if (std::stod(r[2]) == 0.0) EXPECT_EQ(std::stod(r[4]), 0.0);
    else EXPECT_LT(std::stod(r[4]), 0.0);
  }
}

TEST(RunBlowup, ConstantJumpAndMinimizer) {
  const fs::path dir = scratch("blowup");
  const std::string grid = "extension.grid = -1.25 1.25 0.25 1/256 1/256\nprobe_radii = 1/64 1/32 1/16\n";
  std::ofstream(dir / "c.cfg") << grid << "exterior = constant\n";
  std::ofstream(dir / "j.cfg") << grid;
  std::ofstream(dir / "m.cfg") << grid << "map_source = minimize\nsolver.perturbation = 1e-3\nseed = 7\n"
                                          "holder.points = -0.5 0 0.5\n";
  for (const char* name : {"c", "j", "m"}) {
    EXPECT_EQ(run({"blowup", "--config", (dir / (std::string(name) + ".cfg")).string(), "--out",
                   (dir / name).string()}),
              exit_ok)
        << name;
  }
  EXPECT_TRUE(read_json(dir / "c" / "singular_set.json")["flagged"].empty());
  const Json j = read_json(dir / "j" / "singular_set.json");
  ASSERT_EQ(j["flagged"].size(), 1u);
  EXPECT_EQ(j["flagged"][0].get<double>(), 0.0);
  EXPECT_EQ(j["tangents"][0]["kind"], "jump");
  EXPECT_TRUE(read_json(dir / "m" / "singular_set.json")["flagged"].empty());
  const auto exps = rows(dir / "m" / "exponents.csv");
  ASSERT_EQ(exps.size(), 3u);
  for (const auto& r : exps) EXPECT_GT(std::stod(r[1]), 0.0);
}

TEST(RunSelftest, AllChecksPass) {
  const fs::path dir = scratch("selftest");
  EXPECT_EQ(run({"selftest", "--out", dir.string()}), exit_ok);
  const Json rep = read_json(dir / "selftest.json");
  EXPECT_TRUE(rep["all_pass"].get<bool>());
  EXPECT_GE(rep["checks"].size(), 8u);
}
