// Copyright 2026-present the secrel authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "secrel/cli.hpp"
#include "secrel/io.hpp"

namespace secrel::cli {
namespace {

namespace fs = std::filesystem;

const std::string kTable = std::string(SECREL_TEST_DATA) + "/companies_sample.csv";

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("secrel-cli-" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override {
        fs::remove_all(dir_);
    }

    int call(std::vector<std::string> args) {
        args.insert(args.begin(), "secrel");
        out_.str({});
        err_.str({});
        return run(args, out_, err_);
    }
    std::string file(const std::string& name) const {
        return io::read_file(dir_ / name);
    }
    std::string path(const std::string& name) const {
        return (dir_ / name).string();
    }

    fs::path dir_;
    std::ostringstream out_;
    std::ostringstream err_;
};

TEST_F(CliTest, StatsOnFixture) {
    ASSERT_EQ(call({"--out-dir", dir_.string(), "stats", "--input", kTable}), 0) << err_.str();
    EXPECT_NE(file("stats.json").find("\"n_companies\": 7"), std::string::npos);
    EXPECT_NE(file("histogram.tsv").find("4\t1"), std::string::npos);
}

TEST_F(CliTest, RelativeSupportMatchesAbsolute) {
    const auto records = path("abc.csv");
    io::write_file_atomic(records, "company_id,sector_ids\n1,\"A,B\"\n2,\"A,B,C\"\n3,\"B,C\"\n");
    ASSERT_EQ(call({"--out-dir", path("rel"), "mine", "--input", records, "--min-support", "2/3"}), 0) << err_.str();
    ASSERT_EQ(call({"--out-dir", path("abs"), "mine", "--input", records, "--min-support", "2"}), 0) << err_.str();
    EXPECT_EQ(io::read_file(dir_ / "rel" / "itemsets.tsv"), io::read_file(dir_ / "abs" / "itemsets.tsv"));
    EXPECT_NE(io::read_file(dir_ / "abs" / "pairs.tsv").find("A\tB\t2"), std::string::npos);
}

TEST_F(CliTest, SynthExtractEvaluate) {
    ASSERT_EQ(call({"--out-dir", dir_.string(), "synth", "--companies", "600"}), 0) << err_.str();
    const auto records = path("records.csv");
    for (std::string engine : {"fim", "pearson", "kendall", "spearman", "als"}) {
        std::vector<std::string> args{"--out-dir", dir_.string(), "extract", "--input", records, "--engine", engine,
                                      "--k", "4"};
        if (engine == "als") {
            args.insert(args.end(), {"--factors", "4"});
        }
        ASSERT_EQ(call(args), 0) << engine << ": " << err_.str();
    }
    ASSERT_EQ(call({"--out-dir", dir_.string(), "evaluate", "--labels", path("truth_labels.tsv"), "--model",
                    "fim=" + path("relations_fim.tsv"), "--model", "als=" + path("relations_als.tsv"), "--ks",
                    "3,5"}),
              0)
        << err_.str();
    EXPECT_NE(out_.str().find("model\tP@3\tP@5\tMAP@3\tMAP@5\tMRR"), std::string::npos) << out_.str();
    EXPECT_TRUE(fs::exists(dir_ / "report.json"));
    EXPECT_TRUE(fs::exists(dir_ / "precision_at_k.tsv"));
    EXPECT_TRUE(fs::exists(dir_ / "map_at_k.tsv"));

    ASSERT_EQ(call({"--out-dir", dir_.string(), "candidates", "--relations", path("relations_fim.tsv"),
                    path("relations_pearson.tsv"), "--threshold", "0.8"}),
              0)
        << err_.str();
    EXPECT_TRUE(fs::exists(dir_ / "candidates.tsv"));
}

TEST_F(CliTest, RerunIsByteIdentical) {
    ASSERT_EQ(call({"--out-dir", path("a"), "synth", "--companies", "300"}), 0);
    ASSERT_EQ(call({"--out-dir", path("b"), "synth", "--companies", "300"}), 0);
    EXPECT_EQ(io::read_file(dir_ / "a" / "records.csv"), io::read_file(dir_ / "b" / "records.csv"));
    const auto records = (dir_ / "a" / "records.csv").string();
    for (auto sub : {"a", "b"}) {
        ASSERT_EQ(call({"--out-dir", path(sub), "extract", "--input", records, "--engine", "als", "--factors", "3"}),
                  0)
            << err_.str();
    }
    EXPECT_EQ(io::read_file(dir_ / "a" / "relations_als.tsv"), io::read_file(dir_ / "b" / "relations_als.tsv"));
}

TEST_F(CliTest, FailureWritesNothing) {
    EXPECT_NE(call({"--out-dir", path("out"), "extract", "--input", kTable, "--engine", "fim", "--k", "0"}), 0);
    EXPECT_FALSE(fs::exists(dir_ / "out" / "relations_fim.tsv"));
    EXPECT_NE(call({"--out-dir", path("out"), "extract", "--input", path("missing.csv")}), 0);
    EXPECT_NE(err_.str().find("missing.csv"), std::string::npos) << err_.str();
    EXPECT_NE(call({"--out-dir", path("out"), "synth", "--size-weights", "0.5,0.5", "--noise", "2"}), 0);
    EXPECT_FALSE(fs::exists(dir_ / "out" / "records.csv"));
}

TEST_F(CliTest, UnknownSubcommandFails) {
    EXPECT_NE(call({"frobnicate"}), 0);
    EXPECT_NE(call({}), 0);
}

TEST_F(CliTest, ConfigFileAndFlagPrecedence) {
    const auto config = path("secrel.ini");
    io::write_file_atomic(config, "seed=7\n");
    ASSERT_EQ(call({"--config", config, "--out-dir", path("cfg"), "synth", "--companies", "100"}), 0) << err_.str();
    ASSERT_EQ(call({"--seed", "7", "--out-dir", path("flag"), "synth", "--companies", "100"}), 0) << err_.str();
    ASSERT_EQ(call({"--config", config, "--seed", "8", "--out-dir", path("over"), "synth", "--companies", "100"}), 0)
        << err_.str();
    const auto cfg = io::read_file(dir_ / "cfg" / "records.csv");
    EXPECT_EQ(cfg, io::read_file(dir_ / "flag" / "records.csv"));
    EXPECT_NE(cfg, io::read_file(dir_ / "over" / "records.csv"));
}

TEST_F(CliTest, ConfigFromEnvironment) {
    const auto config = path("env.ini");
    io::write_file_atomic(config, "seed=7\n");
    ::setenv(kConfigEnv, config.c_str(), 1);
    const int rc = call({"--out-dir", path("env"), "synth", "--companies", "100"});
    ::unsetenv(kConfigEnv);
    ASSERT_EQ(rc, 0) << err_.str();
    ASSERT_EQ(call({"--seed", "7", "--out-dir", path("flag"), "synth", "--companies", "100"}), 0);
    EXPECT_EQ(io::read_file(dir_ / "env" / "records.csv"), io::read_file(dir_ / "flag" / "records.csv"));
}

}  // namespace
}  // namespace secrel::cli
