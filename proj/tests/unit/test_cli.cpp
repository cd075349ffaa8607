// Copyright 2026 The IslandRun Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "islandrun/cli.hpp"

namespace islandrun::cli {
namespace {

namespace fs = std::filesystem;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

const std::string kGolden = ISLANDRUN_TEST_DATA_DIR "/golden_scenario.yaml";

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("islandrun-cli-" + name);
  fs::remove_all(dir);
  return dir;
}

TEST(Cli, ValidateReportsValid) {
  auto r = cli({"validate", "--config", kGolden});
  EXPECT_EQ(r.code, kSuccess);
  EXPECT_EQ(r.out, "valid\n");
}

TEST(Cli, ValidateReportsViolations) {
  auto dir = scratch("invalid");
  fs::create_directories(dir);
  std::ifstream in(kGolden);
  std::stringstream text;
  text << in.rdbuf();
  auto yaml = text.str();
  yaml.replace(yaml.find("privacy: 0.5}"), 13, "privacy: 0.9}");
  std::ofstream(dir / "bad.yaml") << yaml;
  auto r = cli({"validate", "--config", (dir / "bad.yaml").string()});
  EXPECT_EQ(r.code, kValidationFailure);
  EXPECT_NE(r.err.find("line 6"), std::string::npos) << r.err;
  EXPECT_EQ(cli({"run", "--config", (dir / "bad.yaml").string()}).code, kValidationFailure);
}

TEST(Cli, RunWritesTraceAndMetrics) {
  auto dir = scratch("run");
  auto r = cli({"run", "--config", kGolden, "--out", dir.string()});
  ASSERT_EQ(r.code, kSuccess) << r.err;
  EXPECT_NE(r.out.find("privacy_violations: 0"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir / "trace-islandrun.jsonl"));
  EXPECT_TRUE(fs::exists(dir / "trace-islandrun.metrics.txt"));
}

TEST(Cli, AblateAndCompare) {
  auto dir = scratch("ablate");
  auto a = cli({"ablate", "--config", kGolden, "--disable", "tide", "--out", dir.string()});
  ASSERT_EQ(a.code, kSuccess) << a.err;
  EXPECT_TRUE(fs::exists(dir / "trace-no-tide.jsonl"));

  auto c = cli({"compare", "--config", kGolden, "--out", dir.string()});
  ASSERT_EQ(c.code, kSuccess) << c.err;
  EXPECT_TRUE(fs::exists(dir / "compare.txt"));
  EXPECT_TRUE(fs::exists(dir / "trace-privacy-only.jsonl"));
  EXPECT_NE(c.out.find("islandrun"), std::string::npos);
}

TEST(Cli, SeedAndModeOverrides) {
  auto r = cli({"run", "--config", kGolden, "--seed", "5", "--mode", "constraint"});
  // The golden scenario declares no budget.
  EXPECT_EQ(r.code, kValidationFailure);
  EXPECT_NE(r.err.find("budget"), std::string::npos);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(cli({}).code, kValidationFailure);
  EXPECT_EQ(cli({"run"}).code, kValidationFailure);
  EXPECT_EQ(cli({"run", "--config", kGolden, "--policy", "random"}).code, kValidationFailure);
  EXPECT_EQ(cli({"ablate", "--config", kGolden}).code, kValidationFailure);
  EXPECT_EQ(cli({"validate", "--config", "/nonexistent.yaml"}).code, kValidationFailure);
  EXPECT_EQ(cli({"--help"}).code, kSuccess);
}

}  // namespace
}  // namespace islandrun::cli
