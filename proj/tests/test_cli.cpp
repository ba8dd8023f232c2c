#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace {

namespace fs = std::filesystem;

struct Workdir {
  fs::path path;
  Workdir() {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    path = fs::temp_directory_path() / (std::string("sprice_cli_") + info->name() + "_" +
                                        std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~Workdir() { fs::remove_all(path); }
};

int sprice(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string(SPRICE_CLI) + " " + args + " > " + (log.string() + ".out") +
                          " 2> " + (log.string() + ".err");
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string scenario(const std::string& name) { return std::string(SPRICE_SCENARIOS) + "/" + name; }

std::vector<std::vector<std::string>> csv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(slurp(p));
  for (std::string line; std::getline(in, line);) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    for (std::string c; std::getline(ls, c, ',');) cells.push_back(c);
    rows.push_back(cells);
  }
  return rows;
}

TEST(Cli, QuadraticSeriesFollowsTheClosedForm) {
  Workdir w;
  ASSERT_EQ(sprice("run --scenario " + scenario("quadratic_1d.json") + " --out " + (w.path / "o").string(),
                   w.path / "log"),
            0);
  const auto rows = csv(w.path / "o" / "series.csv");
  ASSERT_EQ(rows.front(), (std::vector<std::string>{"index", "x", "p_opt", "v_opt", "target", "captured"}));
  ASSERT_EQ(rows.size(), 42u);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const double x = std::stod(rows[r][1]);
    EXPECT_NEAR(std::stod(rows[r][2]), x / 2 - x * x / 4, 0.02) << "x = " << x;
  }
}

TEST(Cli, IntervalSubregionReportsBothInterfacePrices) {
  Workdir w;
  ASSERT_EQ(sprice("run --scenario " + scenario("subregion_1d.json") + " --out " + (w.path / "o").string(),
                   w.path / "log"),
            0);
  const auto j = nlohmann::json::parse(slurp(w.path / "o" / "result.json"));
  EXPECT_NEAR(j["summary"]["p1"].get<double>(), 0.2, 1e-12);
  EXPECT_NEAR(j["summary"]["p2"].get<double>(), 0.2, 1e-12);
  EXPECT_NEAR(j["summary"]["profit"].get<double>(), 0.2 * 10.0 / 21.0, 1e-12);
  EXPECT_EQ(j["series"]["price"].size(), 21u);
  const auto rows = csv(w.path / "o" / "series.csv");
  EXPECT_EQ(rows.front().back(), "omega1");
}

TEST(Cli, MalformedScenarioExitsTwoWithoutOutput) {
  Workdir w;
  std::ofstream(w.path / "bad.json") << R"({"model": "one", "region": )";
  EXPECT_EQ(sprice("run --scenario " + (w.path / "bad.json").string() + " --out " + (w.path / "o").string(),
                   w.path / "log"),
            2);
  EXPECT_FALSE(fs::exists(w.path / "o"));
  EXPECT_NE(slurp(w.path / "log.err").find("error:"), std::string::npos);
}

TEST(Cli, BadFlagsExitTwo) {
  Workdir w;
  EXPECT_EQ(sprice("run --scenario x.json", w.path / "a"), 2);
  EXPECT_EQ(sprice("run --scenario x.json --out o --format yaml", w.path / "b"), 2);
  EXPECT_EQ(sprice("frobnicate", w.path / "c"), 2);
  EXPECT_EQ(sprice("run --scenario " + scenario("metric_1d.json") + " --out " + (w.path / "o").string() +
                       " --method one_d",
                   w.path / "d"),
            2);
}

TEST(Cli, ExhaustiveBudgetRefusalExitsThree) {
  Workdir w;
  std::ofstream(w.path / "big.json") << R"({
    "model": "one", "method": "general_search",
    "region": {"dimension": 1, "n": 30},
    "cost": {"kind": "quadratic"},
    "prices": {"p0": 1},
    "search": {"mode": "exhaustive", "levels": 8, "budget": 1000}
  })";
  EXPECT_EQ(sprice("run --scenario " + (w.path / "big.json").string() + " --out " + (w.path / "o").string(),
                   w.path / "log"),
            3);
  EXPECT_FALSE(fs::exists(w.path / "o"));
}

TEST(Cli, BundlesAreByteIdenticalAcrossRunsAndThreads) {
  Workdir w;
  for (const char* name : {"quadratic_1d.json", "subregion_grid.json", "nash_1d.json"}) {
    const auto a = w.path / (std::string(name) + "_a");
    const auto b = w.path / (std::string(name) + "_b");
    ASSERT_EQ(sprice("run --scenario " + scenario(name) + " --out " + a.string() + " --threads 1", w.path / "l"), 0);
    ASSERT_EQ(sprice("run --scenario " + scenario(name) + " --out " + b.string() + " --threads 4", w.path / "l"), 0);
    for (const auto& entry : fs::directory_iterator(a)) {
      EXPECT_EQ(slurp(entry.path()), slurp(b / entry.path().filename())) << name << " " << entry.path().filename();
    }
  }
}

TEST(Cli, CsvFormatWritesSummaryInsteadOfJson) {
  Workdir w;
  ASSERT_EQ(sprice("run --scenario " + scenario("metric_1d.json") + " --out " + (w.path / "o").string() +
                       " --format csv",
                   w.path / "log"),
            0);
  EXPECT_FALSE(fs::exists(w.path / "o" / "result.json"));
  const auto rows = csv(w.path / "o" / "summary.csv");
  EXPECT_EQ(rows.front(), (std::vector<std::string>{"key", "value"}));
  EXPECT_EQ(rows[1][0], "profit");
}

TEST(Cli, CheckRevalidatesAndCatchesTampering) {
  Workdir w;
  for (const char* name : {"metric_1d.json", "subregion_1d.json", "nash_verify.json"}) {
    const auto out = w.path / name;
    ASSERT_EQ(sprice("run --scenario " + scenario(name) + " --out " + out.string(), w.path / "l"), 0);
    EXPECT_EQ(sprice("check --scenario " + scenario(name) + " --result " + (out / "result.json").string(),
                     w.path / "l"),
              0)
        << name << ": " << slurp(w.path / "l.out");
    auto j = nlohmann::json::parse(slurp(out / "result.json"));
    const char* key = j["summary"].contains("payoff_a") ? "payoff_a" : "profit";
    j["summary"][key] = j["summary"][key].get<double>() + 0.01;
    std::ofstream(out / "tampered.json") << j.dump();
    EXPECT_EQ(sprice("check --scenario " + scenario(name) + " --result " + (out / "tampered.json").string(),
                     w.path / "l"),
              2)
        << name;
    EXPECT_NE(slurp(w.path / "l.out").find("problem:"), std::string::npos);
  }
}

TEST(Cli, CompareTablesOneRowPerMethod) {
  Workdir w;
  ASSERT_EQ(sprice("compare --scenario " + scenario("subregion_1d.json") +
                       " --method one_d --method w_search --method boundary_control --out " + w.path.string(),
                   w.path / "log"),
            0);
  const auto rows = csv(w.path / "compare.csv");
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"method", "profit", "profit_delta", "max_price_deviation",
                                               "runtime_s"}));
  for (std::size_t r = 1; r < rows.size(); ++r) {
    // 2 * grid step * mass + 2 * largest atom * p0
    EXPECT_LE(std::abs(std::stod(rows[r][2])), 2.0 * (0.4 / 200.0) + 2.0 / 21.0 * 0.4);
  }
  ASSERT_EQ(sprice("compare --scenario " + scenario("metric_1d.json") + " --method metric_closed_form",
                   w.path / "one"),
            0);
  EXPECT_EQ(csv(w.path / "one.out").size(), 2u);
  EXPECT_EQ(sprice("compare --scenario " + scenario("metric_1d.json") + " --method metric_closed_form,one_d",
                   w.path / "bad"),
            2);
}

TEST(Cli, CompareOnMetricInstanceWithinQuantization) {
  Workdir w;
  ASSERT_EQ(sprice("compare --scenario " + scenario("metric_1d.json") +
                       " --method metric_closed_form,general_search",
                   w.path / "log"),
            0);
  const auto rows = csv(w.path / "log.out");
  ASSERT_EQ(rows.size(), 3u);
  // price range of the instance is below 1 + diameter = 2, L = 8
  EXPECT_LE(std::abs(std::stod(rows[2][2])), 2.0 * 2.0 / 8.0);
}

}  // namespace
