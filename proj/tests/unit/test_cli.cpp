#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "martinpot_cli/cli.hpp"

namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = martinpot::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string without_wall_column(const std::string& csv) {
  std::istringstream in(csv);
  std::string line, kept;
  while (std::getline(in, line)) kept += line.substr(0, line.rfind(',')) + "\n";
  return kept;
}

}  // namespace

TEST(Cli, UnknownSubcommandIsUsageError) {
  const CliResult r = run({"bogus"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("bogus"), std::string::npos);
  EXPECT_EQ(run({}).code, 1);
}

TEST(Cli, MalformedJsonReportsPosition) {
  const CliResult r = run({"access", "--seed", "1", "--alpha", "1", "--d", "2", "--target", "infinity", "--domain",
                     R"({"type":"ball",)"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("line 1"), std::string::npos);
  EXPECT_NE(r.err.find("column"), std::string::npos);
}

TEST(Cli, MonteCarloCommandsNeedASeed) {
  const CliResult r = run({"simulate", "--alpha", "1", "--d", "2", "--estimator", "exit_time", "--x", "0,0"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("seed"), std::string::npos);
}

TEST(Cli, LogThornBelowThresholdDiverges) {
  const CliResult r = run({"thorn", "--alpha", "1", "--d", "3", "--profile", "log_power:0.2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["report"]["verdict"], "divergent");
}

TEST(Cli, InconclusiveVerdictExitsWithTwo) {
  EXPECT_EQ(run({"thorn", "--alpha", "1", "--d", "3", "--profile", "log_power:0.38"}).code, 2);
}

TEST(Cli, ScheduleFixedPoint) {
  const CliResult r = run({"schedule", "--eta", "0.1", "--C", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_DOUBLE_EQ(j["fixed_point"].get<double>(), 1.15);
  EXPECT_EQ(j["l"].get<int>(), 5);
}

TEST(Cli, ConfigFileKeysMustBeKnown) {
  const std::string good = ::testing::TempDir() + "martinpot_good.json";
  const std::string bad = ::testing::TempDir() + "martinpot_bad.json";
  std::ofstream(good) << R"({"eta": 0.1, "C": 2})";
  std::ofstream(bad) << R"({"eta": 0.1, "C": 2, "colour": "red"})";
  EXPECT_EQ(run({"schedule", "--config", good}).code, 0);
  const CliResult r = run({"schedule", "--config", bad});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("colour"), std::string::npos);
}

TEST(Cli, CsvRowsCarryParametersAndSeed) {
  const CliResult r = run({"simulate", "--alpha", "1", "--d", "2", "--estimator", "exit_time", "--x", "0,0", "--n", "100",
                     "--seed", "17", "--format", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  EXPECT_EQ(header, "op,params_json,value,stderr,n,seed,flags,wall_ms");
  EXPECT_NE(row.find("\"\"version\"\""), std::string::npos);
  EXPECT_NE(row.find(",17,"), std::string::npos);
}

TEST(Cli, WorkerEnvironmentVariable) {
  const std::vector<std::string> args{"simulate", "--alpha", "1.5", "--d", "2", "--estimator", "green", "--x",
                                      "0.2,0.1",  "--y",     "-0.3,0", "--n", "3000", "--seed", "4", "--format", "csv"};
  const std::string serial = without_wall_column(run(args).out);
  ::setenv("MARTINPOT_WORKERS", "3", 1);
  const CliResult threaded = run(args);
  ::setenv("MARTINPOT_WORKERS", "many", 1);
  const CliResult broken = run(args);
  ::unsetenv("MARTINPOT_WORKERS");
  EXPECT_EQ(without_wall_column(threaded.out), serial);
  EXPECT_EQ(broken.code, 1);
}
