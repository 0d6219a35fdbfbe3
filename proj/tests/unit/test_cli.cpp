#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

#include <json.hpp>

#include "commands.hpp"
#include "run_config.hpp"

using namespace bhlab::cli;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("bhlab_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                        "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int run(RunConfig cfg, std::string* log_text = nullptr) {
  std::ostringstream log;
  int code;
  try {
    finalize(cfg);
    code = run_command(cfg, log);
  } catch (const ConfigError& e) {
    log << "error: " << e.what() << "\n";
    code = kExitConfigError;
  }
  if (log_text) *log_text = log.str();
  return code;
}

RunConfig command(const std::string& name) {
  RunConfig c;
  c.command = name;
  return c;
}

// Runs the built executable; returns its exit status.
int shell(const std::string& args) {
  const std::string cmd = std::string(BHLAB_BINARY) + " " + args;
  const int raw = std::system(cmd.c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

}  // namespace

TEST(Pipeline, LinearMapReportsFullMeasure) {
  TempDir t;
  auto c = command("pipeline");
  c.map_text = "linear";
  c.N = 6;
  c.D = 7;
  c.out = t.file("report.json");
  ASSERT_EQ(run(c), kExitPass);
  const auto j = nlohmann::json::parse(slurp(c.out));
  EXPECT_EQ(j["E_N"]["measure"], 1.0);
  EXPECT_EQ(j["E_N"]["delta"], 0.0);
  EXPECT_EQ(j["final_integral"], 0.0);
  EXPECT_EQ(j["certificates_pass"], true);
}

TEST(Pipeline, SmoothNSixDThreePasses) {
  TempDir t;
  auto c = command("pipeline");
  c.out = t.file("report.json");
  c.norms_out = t.file("norms.csv");
  std::string log;
  ASSERT_EQ(run(c, &log), kExitPass) << log;
  const auto j = nlohmann::json::parse(slurp(c.out));
  EXPECT_EQ(j["certificates_pass"], true);
  EXPECT_EQ(j["identity"]["holds"], true);
  EXPECT_EQ(slurp(c.norms_out).rfind("n,norm\n", 0), 0u);
}

TEST(Pipeline, CorruptedFixtureFailsOnTheIdentity) {
  TempDir t;
  const double two_pi = 2 * 3.14159265358979323846;
  nlohmann::json fx = {{"Q", 5},
                       {"D", 5},
                       {"numerators", {0, 1, 2, 3, 4}},
                       {"angles", {0.0, two_pi / 5, 2 * two_pi / 5 + 0.01, 3 * two_pi / 5, 4 * two_pi / 5}}};
  std::ofstream(t.file("phi.json")) << fx.dump();
  auto c = command("pipeline");
  c.map_text = "linear";
  c.N = 5;
  c.phi_n = t.file("phi.json");
  c.out = t.file("report.json");
  EXPECT_EQ(run(c), kExitCertificateFailed);
  const auto j = nlohmann::json::parse(slurp(c.out));
  EXPECT_EQ(j["identity"]["holds"], false);
}

TEST(Pipeline, FixtureWithWrongLengthIsAConfigError) {
  TempDir t;
  std::ofstream(t.file("phi.json")) << R"({"N": 5, "Q": 2, "numerators": [0, 1]})";
  auto c = command("pipeline");
  c.N = 5;
  c.phi_n = t.file("phi.json");
  c.out = t.file("r.json");
  EXPECT_EQ(run(c), kExitConfigError);
}

TEST(Pipeline, BudgetExhaustionIsNotFatal) {
  TempDir t;
  auto c = command("pipeline");
  c.N = 8;
  c.D = 50;
  c.budget = 5;
  c.out = t.file("r.json");
  EXPECT_EQ(run(c), kExitPass);
  EXPECT_EQ(nlohmann::json::parse(slurp(c.out))["phi_N"]["status"], "skipped");
}

TEST(Pipeline, CsvIsAKeyValueTable) {
  TempDir t;
  auto c = command("pipeline");
  c.format = "csv";
  c.out = t.file("r.csv");
  ASSERT_EQ(run(c), kExitPass);
  const auto s = slurp(c.out);
  EXPECT_EQ(s.rfind("key,value\n", 0), 0u);
  EXPECT_NE(s.find("/certificates_pass,true"), std::string::npos);
}

TEST(Growth, LinearMapGivesAllOnes) {
  TempDir t;
  auto c = command("growth");
  c.map_text = "linear";
  c.out = t.file("g.csv");
  ASSERT_EQ(run(c), kExitPass);
  std::istringstream in(slurp(c.out));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "n,norm,grid,converged");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    std::istringstream r(line);
    std::string n, norm;
    std::getline(r, n, ',');
    std::getline(r, norm, ',');
    EXPECT_EQ(std::stod(norm), 1.0) << line;
  }
  EXPECT_EQ(rows, 7);  // 16, 32, ..., 1024
}

TEST(Growth, JsonCarriesFits) {
  TempDir t;
  auto c = command("growth");
  c.map_text = "smooth";
  c.n_min = 4;
  c.n_max = 64;
  c.format = "json";
  c.out = t.file("g.json");
  ASSERT_EQ(run(c), kExitPass);
  const auto j = nlohmann::json::parse(slurp(c.out));
  EXPECT_EQ(j["entries"].size(), 5u);
  EXPECT_TRUE(j["fits"].contains("power"));
  EXPECT_EQ(j["floor_holds"], true);
}

TEST(Sections, ExhaustiveFourByFourPasses) {
  TempDir t;
  auto c = command("sections");
  c.out = t.file("s.json");
  std::string log;
  ASSERT_EQ(run(c, &log), kExitPass);
  const auto j = nlohmann::json::parse(slurp(c.out));
  EXPECT_EQ(j["subsets"], 65536);
  EXPECT_EQ(j["violations"], 0);
  EXPECT_EQ(j["trace_failures"], 0);
  EXPECT_NE(log.find("worst slack"), std::string::npos);
}

TEST(Sections, RandomModeNeedsSeed) {
  auto c = command("sections");
  c.mode = "random";
  c.shape = "3x3x3";
  EXPECT_EQ(run(c), kExitConfigError);
}

TEST(Sections, TooManyCellsForExhaustiveMode) {
  auto c = command("sections");
  c.shape = "5x5";
  EXPECT_EQ(run(c), kExitConfigError);
}

TEST(Littlewood, CompositeIsRejected) {
  auto c = command("littlewood");
  c.N = 15;
  std::string log;
  EXPECT_EQ(run(c, &log), kExitConfigError);
  EXPECT_NE(log.find("N must be prime (got 15)"), std::string::npos);
}

TEST(Littlewood, PrimesListCsv) {
  TempDir t;
  auto c = command("littlewood");
  c.primes = {5, 7, 11, 13, 17, 19};
  c.out = t.file("l.csv");
  ASSERT_EQ(run(c), kExitPass);
  const auto s = slurp(c.out);
  EXPECT_EQ(s.rfind("N,strategy,best_ratio,envelope,alt_envelope,witness\n", 0), 0u);
  EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 7);
}

TEST(Littlewood, RandomSetsNeedSeed) {
  auto c = command("littlewood");
  c.N = 17;
  c.strategy = "random_sets";
  EXPECT_EQ(run(c), kExitConfigError);
}

TEST(Operators, SmoothPowersAreSubmultiplicative) {
  TempDir t;
  auto c = command("operators");
  c.format = "json";
  c.out = t.file("o.json");
  ASSERT_EQ(run(c), kExitPass);
  const auto j = nlohmann::json::parse(slurp(c.out));
  EXPECT_EQ(j["powers"].size(), 17u);
  EXPECT_EQ(j["submultiplicative"], true);
}

TEST(Operators, SupportCapIsASkip) {
  TempDir t;
  auto c = command("operators");
  c.caps.kernel_support = 8;
  c.out = t.file("o.csv");
  EXPECT_EQ(run(c), kExitPass);
  EXPECT_EQ(slurp(c.out), "n,power_norm,support_width,tail_mass\n");
}

TEST(Config, JsonOverridesAndUnknownKeys) {
  RunConfig c = command("pipeline");
  apply_config_json(c, nlohmann::json{{"N", 5}, {"D", 4}, {"map", "tent"}});
  EXPECT_EQ(c.N, 5u);
  EXPECT_EQ(c.D, 4);
  EXPECT_EQ(c.map_text, "tent");
  EXPECT_THROW(apply_config_json(c, nlohmann::json{{"colour", 1}}), ConfigError);
}

TEST(Config, RangeChecks) {
  auto c = command("pipeline");
  c.N = 0;
  EXPECT_EQ(run(c), kExitConfigError);
  auto g = command("growth");
  g.tol = -1;
  EXPECT_EQ(run(g), kExitConfigError);
  auto m = command("pipeline");
  m.map_text = "spiral";
  EXPECT_EQ(run(m), kExitConfigError);
}

TEST(Config, ParseShape) {
  EXPECT_EQ(parse_shape("3x3x3"), (std::vector<std::size_t>{3, 3, 3}));
  EXPECT_THROW(parse_shape("4x"), ConfigError);
  EXPECT_THROW(parse_shape("0x2"), ConfigError);
}

TEST(Config, EnvironmentCaps) {
  RunConfig c;
  ::setenv("BHLAB_IDENTITY_CAP", "12345", 1);
  apply_env_caps(c);
  ::unsetenv("BHLAB_IDENTITY_CAP");
  EXPECT_EQ(c.caps.identity_work, 12345u);
  ::setenv("BHLAB_TRIPLE_CAP", "many", 1);
  EXPECT_THROW(apply_env_caps(c), ConfigError);
  ::unsetenv("BHLAB_TRIPLE_CAP");
}

TEST(Binary, ExitCodes) {
  TempDir t;
  EXPECT_EQ(shell("pipeline --map linear --N 6 --D 7 --out " + t.file("a.json") + " 2>/dev/null"), 0);
  EXPECT_EQ(shell("littlewood --N 15 2>/dev/null"), 2);
  EXPECT_EQ(shell("pipeline --bogus 1 >/dev/null 2>&1"), 2);
  std::ofstream(t.file("bad.json")) << "{not json";
  EXPECT_EQ(shell("pipeline --config " + t.file("bad.json") + " 2>/dev/null"), 2);
  std::ofstream(t.file("cfg.json")) << R"({"map": "linear", "N": 4, "D": 5})";
  ASSERT_EQ(shell("pipeline --N 6 --config " + t.file("cfg.json") + " --out " + t.file("c.json") + " 2>/dev/null"), 0);
  EXPECT_EQ(nlohmann::json::parse(slurp(t.file("c.json")))["inputs"]["N"], 4);
}

TEST(Binary, SeededRunsAreByteIdentical) {
  TempDir t;
  const std::vector<std::string> cmds{
      "littlewood --strategy random_sets --primes 17,31 --trials 300 --seed 11",
      "sections --mode random --shape 3x3x3 --trials 2000 --seed 5",
      "pipeline --map smooth --N 6 --D 3 --seed 1",
  };
  for (std::size_t i = 0; i < cmds.size(); ++i) {
    const auto a = t.file("a" + std::to_string(i)), b = t.file("b" + std::to_string(i));
    ASSERT_EQ(shell(cmds[i] + " --out " + a + " 2>/dev/null"), 0) << cmds[i];
    ASSERT_EQ(shell(cmds[i] + " --out " + b + " 2>/dev/null"), 0) << cmds[i];
    EXPECT_EQ(slurp(a), slurp(b)) << cmds[i];
    EXPECT_FALSE(slurp(a).empty());
  }
}
