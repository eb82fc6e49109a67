#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qvolterra/cli.hpp"
#include "qvolterra/version.hpp"

namespace fs = std::filesystem;
using qvolterra::Json;

namespace {

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("qv_cli_") + info->name() + "_" + std::to_string(::getpid()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write_config(const std::string& name, const std::string& text) const {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p;
  }

  // Runs the binary; stderr goes to dir_/stderr.txt.
  int cli(const std::string& args) const {
    const std::string cmd = std::string(QV_CLI_PATH) + " " + args + " > " + (dir_ / "stdout.txt").string() + " 2> " +
                            (dir_ / "stderr.txt").string();
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  }

  std::string read(const fs::path& p) const {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
  }
  Json json(const fs::path& p) const { return Json::parse(read(p)); }
  std::string err() const { return read(dir_ / "stderr.txt"); }
  std::string out(const std::string& sub) const { return (dir_ / sub).string(); }

  fs::path dir_;
};

std::vector<double> weights(const Json& pts, std::size_t n) {
  std::vector<double> w(n + 1, 0.0);
  for (const auto& e : pts) w[e[0].get<std::size_t>()] = e[1].get<double>();
  return w;
}

}  // namespace

TEST_F(CliTest, MalformedConfigNamesField) {
  const auto cfg = write_config("bad.json", R"({"operator": {"kind": "dense", "entries": [[0, 1], ["x", 0]]},
                                               "initial": [[1, 0.5], [2, 0.5]]})");
  EXPECT_EQ(cli("apply --config " + cfg.string() + " --out " + out("o")), 2);
  EXPECT_NE(err().find("/operator/entries/1/0"), std::string::npos) << err();
}

TEST_F(CliTest, NonSkewMatrixIsConfigError) {
  const auto cfg = write_config("bad.json", R"({"operator": {"kind": "dense", "entries": [[0, 1], [1, 0]]},
                                               "initial": [[1, 1.0]]})");
  EXPECT_EQ(cli("apply --config " + cfg.string() + " --out " + out("o")), 2);
  EXPECT_NE(err().find("/operator"), std::string::npos) << err();
}

TEST_F(CliTest, UnknownFieldAndUnparseableJson) {
  const auto a = write_config("a.json", R"({"operatr": {"kind": "zero"}})");
  EXPECT_EQ(cli("apply --config " + a.string()), 2);
  EXPECT_NE(err().find("/operatr"), std::string::npos) << err();
  const auto b = write_config("b.json", "{ not json");
  EXPECT_EQ(cli("apply --config " + b.string()), 2);
  EXPECT_EQ(cli("apply --config " + (dir_ / "missing.json").string()), 2);
}

TEST_F(CliTest, BadArgumentsExitTwo) {
  EXPECT_EQ(cli("apply"), 2);
  EXPECT_EQ(cli("apply --scenario nosuch"), 2);
  EXPECT_EQ(cli("frobnicate --scenario shift"), 2);
  EXPECT_EQ(cli("qset --scenario example-5.2 --emptiness 5-20"), 2);
  EXPECT_EQ(cli("--version"), 0);
}

TEST_F(CliTest, InvalidPointIsConfigError) {
  const auto cfg = write_config("p.json", R"({"operator": {"kind": "zero"}, "initial": [[1, 0.5], [2, 0.6]]})");
  EXPECT_EQ(cli("apply --config " + cfg.string() + " --out " + out("o")), 2);
  EXPECT_NE(err().find("/initial"), std::string::npos) << err();
}

TEST_F(CliTest, ApplyZeroIsIdentity) {
  const auto cfg = write_config("z.json", R"({"operator": {"kind": "zero"}, "initial": [[1, 0.25], [3, 0.75]]})");
  ASSERT_EQ(cli("apply --config " + cfg.string() + " --out " + out("o")), 0) << err();
  const Json rep = json(dir_ / "o" / "apply.json");
  EXPECT_EQ(rep["image"], rep["input"]);
  EXPECT_TRUE(rep["sum_check"].get<bool>());
  EXPECT_EQ(rep["fixed_point_residual"].get<double>(), 0.0);
  EXPECT_EQ(rep["conjugate"], rep["input"]);
}

TEST_F(CliTest, ApplyTransitiveDense) {
  const auto cfg = write_config("t.json", R"({"operator": {"kind": "dense", "entries": [[0,1,1],[-1,0,1],[-1,-1,0]]},
                                             "initial": {"uniform": 3}})");
  ASSERT_EQ(cli("apply --config " + cfg.string() + " --out " + out("o")), 0) << err();
  const auto w = weights(json(dir_ / "o" / "apply.json")["image"], 3);
  EXPECT_NEAR(w[1], 5.0 / 9.0, 1e-15);
  EXPECT_NEAR(w[2], 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(w[3], 1.0 / 9.0, 1e-15);
}

TEST_F(CliTest, ApplyCyclicRpsFixesUniform) {
  const auto cfg = write_config("r.json", R"({"initial": {"uniform": 3}})");
  ASSERT_EQ(cli("apply --scenario rps --config " + cfg.string() + " --out " + out("o")), 0) << err();
  const auto w = weights(json(dir_ / "o" / "apply.json")["image"], 3);
  for (int k = 1; k <= 3; ++k) EXPECT_NEAR(w[k], 1.0 / 3.0, 1e-15);
}

TEST_F(CliTest, IterateExample51) {
  ASSERT_EQ(cli("iterate --scenario example-5.1 --out " + out("o")), 0) << err();
  const Json d = json(dir_ / "o" / "diagnostics.json");
  EXPECT_EQ(d["verdict"]["status"], "Converged");
  EXPECT_TRUE(d["growth_bound"]["ok"].get<bool>());
  EXPECT_TRUE(d["limit_in_q"]["ok"].get<bool>());
  const auto lim = weights(d["verdict"]["limit"], 40);
  double odd = 0.0;
  for (int k = 1; k <= 40; k += 2) odd += lim[k];
  EXPECT_LT(odd, 1e-6);
  const std::string csv = read(dir_ / "o" / "trajectory.csv");
  EXPECT_EQ(csv.rfind("step,index,weight\n", 0), 0u);
  const std::string svg = read(dir_ / "o" / "trajectory.svg");
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("<polyline"), std::string::npos);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
}

TEST_F(CliTest, IterateShift) {
  ASSERT_EQ(cli("iterate --scenario shift --out " + out("o")), 0) << err();
  const Json d = json(dir_ / "o" / "diagnostics.json");
  EXPECT_EQ(d["verdict"]["status"], "Oscillating");
  EXPECT_EQ(d["final_support"]["min_index"], 101);
  EXPECT_EQ(d["final_support"]["size"], 1);
  EXPECT_FALSE(d.contains("growth_bound"));
  EXPECT_FALSE(fs::exists(dir_ / "o" / "trajectory.svg"));
}

TEST_F(CliTest, IterateRps) {
  ASSERT_EQ(cli("iterate --scenario rps --out " + out("o")), 0) << err();
  const Json d = json(dir_ / "o" / "diagnostics.json");
  const std::string s = d["verdict"]["status"];
  EXPECT_TRUE(s == "NotConvergedWithinBudget" || s == "Oscillating") << s;
  EXPECT_TRUE(d["growth_bound"]["ok"].get<bool>());
  EXPECT_EQ(d["stride"], 100);
}

TEST_F(CliTest, QsetZeroFace) {
  const auto cfg = write_config("z.json", R"({"operator": {"kind": "zero"}, "face": [1, 2, 3, 4, 5]})");
  ASSERT_EQ(cli("qset --config " + cfg.string() + " --out " + out("o")), 0) << err();
  const Json q = json(dir_ / "o" / "qset.json");
  EXPECT_EQ(q["result"]["status"], "Feasible");
  EXPECT_LE(q["fixed_point_residual"].get<double>(), 1e-9);
}

TEST_F(CliTest, QsetPairFace) {
  const auto cfg = write_config("p.json", R"({"operator": {"kind": "pair", "coeffs": [1.0]}, "face": [1, 2]})");
  ASSERT_EQ(cli("qset --config " + cfg.string() + " --out " + out("o")), 0) << err();
  const Json q = json(dir_ / "o" / "qset.json");
  ASSERT_EQ(q["result"]["status"], "Feasible");
  const auto w = weights(q["result"]["witness"], 2);
  EXPECT_EQ(w[1], 0.0);
  EXPECT_EQ(w[2], 1.0);
}

TEST_F(CliTest, QsetEmptinessRange) {
  ASSERT_EQ(cli("qset --scenario example-5.2 --emptiness 5:20 --out " + out("o")), 0) << err();
  const Json q = json(dir_ / "o" / "qset.json");
  EXPECT_TRUE(q["emptiness_certified"].get<bool>());
  ASSERT_EQ(q["emptiness"].size(), 16u);
  for (const auto& r : q["emptiness"]) EXPECT_EQ(r["status"], "Infeasible");
}

TEST_F(CliTest, TruncationStudyScenario) {
  ASSERT_EQ(cli("truncation-study --scenario truncation --out " + out("o")), 0) << err();
  const Json s = json(dir_ / "o" / "summary.json");
  EXPECT_EQ(s["cells"], 45);
  EXPECT_EQ(s["violations"], 0);
  EXPECT_LE(s["max_gap_over_bound"].get<double>(), 1.0);
  EXPECT_GT(s["max_gap_over_bound"].get<double>(), 0.0);
  ASSERT_EQ(s["w_equals_v"].size(), 3u);
  for (const auto& r : s["w_equals_v"]) EXPECT_TRUE(r["verdict"]["ok"].get<bool>());
  EXPECT_LT(s["converge_power"]["bound"].get<double>(), 1e-6);
  EXPECT_EQ(read(dir_ / "o" / "gaps.csv").rfind("m,n,p,k,gap,bound\n", 0), 0u);
}

TEST_F(CliTest, TruncationStudyInsideSupportIsZero) {
  const auto cfg = write_config("s.json", R"({"study": {"base": {"kind": "alternating"},
      "profile": {"uniform": 10}, "m": [1, 3], "n": [10, 12], "p": [5]}})");
  ASSERT_EQ(cli("truncation-study --config " + cfg.string() + " --out " + out("o")), 0) << err();
  std::istringstream csv(read(dir_ / "o" / "gaps.csv"));
  std::string line;
  std::getline(csv, line);
  int rows = 0;
  while (std::getline(csv, line)) {
    ++rows;
    std::vector<std::string> cols;
    std::stringstream ls(line);
    for (std::string c; std::getline(ls, c, ',');) cols.push_back(c);
    ASSERT_EQ(cols.size(), 6u);
    EXPECT_EQ(std::stod(cols[4]), 0.0) << line;
  }
  EXPECT_EQ(rows, 4 * 10);
  EXPECT_EQ(json(dir_ / "o" / "summary.json")["max_gap_over_bound"].get<double>(), 0.0);
}

TEST_F(CliTest, TruncationStudyNeedsFullGrid) {
  const auto cfg = write_config("s.json", R"({"study": {"base": {"kind": "zero"}, "profile": {"uniform": 4},
      "m": [1]}})");
  EXPECT_EQ(cli("truncation-study --config " + cfg.string() + " --out " + out("o")), 2);
  EXPECT_NE(err().find("/study"), std::string::npos);
}

TEST_F(CliTest, ReportsCarryHashAndVersion) {
  ASSERT_EQ(cli("iterate --scenario shift --out " + out("a")), 0);
  ASSERT_EQ(cli("iterate --scenario shift --seed 5 --out " + out("b")), 0);
  const Json a = json(dir_ / "a" / "diagnostics.json"), b = json(dir_ / "b" / "diagnostics.json");
  EXPECT_EQ(a["version"], std::string(qvolterra::kVersion));
  EXPECT_EQ(a["config_hash"].get<std::string>().size(), 16u);
  EXPECT_NE(a["config_hash"], b["config_hash"]);
}

TEST_F(CliTest, RerunsAreByteIdentical) {
  const auto cfg = write_config("r.json", R"({"operator": {"kind": "alternating"}, "initial": {"random": 12},
                                             "steps": 300, "plot": {"coords": [1, 2]}})");
  for (const char* sub : {"a", "b"}) ASSERT_EQ(cli("iterate --config " + cfg.string() + " --seed 9 --out " + out(sub)), 0);
  for (const char* f : {"trajectory.csv", "diagnostics.json", "trajectory.svg"}) {
    EXPECT_EQ(read(dir_ / "a" / f), read(dir_ / "b" / f)) << f;
  }
  ASSERT_EQ(cli("iterate --config " + cfg.string() + " --seed 10 --out " + out("c")), 0);
  EXPECT_NE(read(dir_ / "a" / "trajectory.csv"), read(dir_ / "c" / "trajectory.csv"));
}

TEST(CliLibrary, ParseConfigDefaults) {
  const auto cfg = qvolterra::cli::parse_config(qvolterra::cli::scenario_config("example-5.1"));
  ASSERT_TRUE(cfg.op && cfg.initial && cfg.face);
  EXPECT_EQ(cfg.steps, 5000u);
  EXPECT_EQ(cfg.initial->support_size(), 40u);
  EXPECT_EQ(cfg.plot_coords, (std::vector<qvolterra::Index>{1, 2}));
}

TEST(CliLibrary, HashIsStable) {
  const Json a = qvolterra::cli::scenario_config("shift");
  EXPECT_EQ(qvolterra::cli::config_hash(a), qvolterra::cli::config_hash(Json::parse(a.dump())));
  Json b = a;
  b["steps"] = 101;
  EXPECT_NE(qvolterra::cli::config_hash(a), qvolterra::cli::config_hash(b));
}
