/*
 * Copyright (c) 2026, The hedcore Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "cli.hpp"
#include "hedcore/error.hpp"
#include "hedcore/game_model.hpp"

namespace hedcore::cli {
namespace {

namespace fs = std::filesystem;
using hedcore::from_compact;
using hedcore::read_game_json;

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome invoke(std::vector<std::string> args)
{
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override
    {
        dir_ = fs::temp_directory_path() /
               (std::string("hedcore-cli-") + ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    std::string write(const std::string& name, const std::string& content) const
    {
        std::ofstream(dir_ / name) << content;
        return path(name);
    }

    fs::path dir_;
};

TEST(ParseSizes, Forms)
{
    EXPECT_EQ(parse_sizes("2..5"), (std::vector<int>{2, 3, 4, 5}));
    EXPECT_EQ(parse_sizes("3,5"), (std::vector<int>{3, 5}));
    EXPECT_EQ(parse_sizes("7"), (std::vector<int>{7}));
    EXPECT_THROW(parse_sizes("5..2"), Error);
    EXPECT_THROW(parse_sizes("x"), Error);
}

TEST_F(CliTest, GenIsDeterministic)
{
    const auto a = invoke({"gen", "--players", "4", "--seed", "42"});
    const auto b = invoke({"gen", "--players", "4", "--seed", "42"});
    ASSERT_EQ(a.code, kExitOk);
    EXPECT_EQ(a.out, b.out);
    EXPECT_TRUE(a.err.empty());
    EXPECT_EQ(read_game_json(a.out).players(), 4);
    const auto other = invoke({"gen", "--players", "4", "--seed", "42", "--index", "1"});
    EXPECT_NE(other.out, a.out);
    const auto compact = invoke({"gen", "--players", "4", "--seed", "42", "--format", "compact"});
    EXPECT_EQ(from_compact(compact.out), read_game_json(a.out));
}

TEST_F(CliTest, GenRejectsBadPlayerCount)
{
    const auto r = invoke({"gen", "--players", "0"});
    EXPECT_EQ(r.code, kExitUsage);
    EXPECT_EQ(r.err.rfind("error[", 0), 0u);
    EXPECT_TRUE(r.out.empty());
}

TEST_F(CliTest, SolveExampleGame)
{
    const auto game = write("game.json", R"({"players":3,"ranks":[[4,1,3,2],[1,2,3,4],[2,1,4,3]]})");
    const auto r = invoke({"solve", game});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto json = nlohmann::json::parse(r.out);
    EXPECT_EQ(json.at("core_size"), 1);
    EXPECT_EQ(json.at("core"), nlohmann::json::array({"123"}));

    const auto compact = write("game.txt", "3;4,1,3,2;1,2,3,4;2,1,4,3\n");
    const auto out_file = path("core.json");
    const auto c = invoke({"solve", compact, "--out", out_file});
    EXPECT_EQ(c.out, "core_size: 1\n");
    std::ifstream in(out_file);
    EXPECT_EQ(nlohmann::json::parse(in), json);
}

TEST_F(CliTest, SolveRejectsMalformedGame)
{
    const auto broken = write("bad.json", "{\"players\":3,");
    const auto r = invoke({"solve", broken});
    EXPECT_EQ(r.code, kExitInvalidInput);
    EXPECT_EQ(r.err.rfind("error[validation]", 0), 0u) << r.err;
    const auto invalid = write("dup.json", R"({"players":3,"ranks":[[1,1,3,2],[1,2,3,4],[2,1,4,3]]})");
    EXPECT_EQ(invoke({"solve", invalid}).code, kExitInvalidInput);
}

TEST_F(CliTest, ExperimentTwoPlayers)
{
    const auto r = invoke({"experiment", "--sizes", "2..2", "--games", "1000", "--seed", "5"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_EQ(r.out, "players,core_size,count\n2,1,1000\n");
    EXPECT_EQ(invoke({"experiment", "--sizes", "2..2", "--games", "1000", "--seed", "5"}).out, r.out);
}

TEST_F(CliTest, ExperimentCensus)
{
    const auto r = invoke({"experiment", "--sizes", "3", "--census"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_EQ(r.out, "players,core_size,count\n3,0,100\n3,1,13136\n3,2,588\n");
    EXPECT_EQ(invoke({"experiment", "--sizes", "4", "--census"}).code, kExitUsage);
}

TEST_F(CliTest, ExperimentCheckpointMismatch)
{
    const auto ck = path("ck.json");
    const auto first =
        invoke({"experiment", "--sizes", "3", "--games", "500", "--checkpoint", ck, "--stop-after", "100"});
    ASSERT_EQ(first.code, kExitOk) << first.err;
    const auto bad = invoke({"experiment", "--sizes", "3", "--games", "500", "--seed", "9", "--checkpoint", ck,
                             "--resume"});
    EXPECT_EQ(bad.code, kExitCheckpoint);
    EXPECT_EQ(bad.err.rfind("error[checkpoint]", 0), 0u) << bad.err;
    const auto resumed = invoke({"experiment", "--sizes", "3", "--games", "500", "--checkpoint", ck, "--resume"});
    EXPECT_EQ(resumed.code, kExitOk);
    EXPECT_EQ(resumed.out, invoke({"experiment", "--sizes", "3", "--games", "500"}).out);
}

TEST_F(CliTest, FitReport)
{
    const auto results = write("results.csv", "players,core_size,count\n2,1,1000\n5,0,125\n5,1,700\n5,2,150\n5,3,25\n");
    const auto r = invoke({"fit", results, "--dist", "weibull,gamma", "--zero-policy", "drop_zeros"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto report = nlohmann::json::parse(r.out);
    ASSERT_EQ(report.at("results").size(), 2u);
    const auto& two = report.at("results")[0];
    EXPECT_EQ(two.at("players"), 2);
    EXPECT_TRUE(two.at("fits").empty());
    EXPECT_EQ(two.at("errors").size(), 2u);
    const auto& five = report.at("results")[1];
    EXPECT_EQ(five.at("fits").size(), 2u);
    EXPECT_EQ(five.at("ranking").at("aic").size(), 2u);
    EXPECT_TRUE(r.err.empty());
}

TEST_F(CliTest, ExportTable)
{
    const auto results = write("results.csv", "players,core_size,count\n2,1,10\n");
    const auto r = invoke({"export", results});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_EQ(r.out, "players,core_size,count,frequency,ecdf\n2,1,10,1,1\n");
}

TEST_F(CliTest, Info)
{
    EXPECT_EQ(invoke({"info", "--bell", "13"}).out, "27644437\n");
    EXPECT_EQ(invoke({"info", "--count-games", "3"}).out, "13824\n");
    EXPECT_EQ(invoke({"info", "--bell", "17"}).code, kExitUsage);
}

TEST_F(CliTest, UnknownCommandIsUsageError)
{
    const auto r = invoke({"frobnicate"});
    EXPECT_EQ(r.code, kExitUsage);
    EXPECT_FALSE(r.err.empty());
}

}  // namespace
}  // namespace hedcore::cli
