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

#include <gtest/gtest.h>

#include "hedcore/error.hpp"
#include "hedcore/experiment.hpp"
#include "hedcore/generator.hpp"

namespace hedcore {
namespace {

namespace fs = std::filesystem;

ErrorKind error_kind_of(auto&& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "expected hedcore::Error";
    return ErrorKind::usage;
}

class TempDir {
public:
    TempDir()
    {
        path_ = fs::temp_directory_path() /
                ("hedcore-test-" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "-" +
                 ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    fs::path operator/(const std::string& name) const { return path_ / name; }

private:
    fs::path path_;
};

ExperimentConfig config_for(std::vector<int> sizes, std::uint64_t games, std::uint64_t seed = 42)
{
    ExperimentConfig c;
    c.sizes = std::move(sizes);
    c.games_per_size = games;
    c.seed = seed;
    return c;
}

TEST(RunExperiment, TwoPlayersAlwaysHaveOneCorePartition)
{
    const auto h = run_experiment(config_for({2}, 10'000));
    EXPECT_EQ(h.counts(2), (CoreSizeHistogram::Counts{{1, 10'000}}));
}

TEST(RunExperiment, ThreePlayerCensusCounts)
{
    auto config = config_for({3}, 1);
    config.census = true;
    const auto h = run_experiment(config);
    EXPECT_EQ(h.counts(3), (CoreSizeHistogram::Counts{{0, 100}, {1, 13'136}, {2, 588}}));
    EXPECT_EQ(h.total(3), 13'824u);
}

TEST(RunExperiment, NoSizesGivesEmptyHistogram)
{
    EXPECT_TRUE(run_experiment(config_for({}, 100)).empty());
}

TEST(RunExperiment, WorkerCountDoesNotChangeResults)
{
    auto config = config_for({2, 3, 4, 5}, 3'000, 7);
    const auto one = run_experiment(config);
    for (unsigned workers : {4u, 8u}) {
        config.worker_count = workers;
        EXPECT_EQ(run_experiment(config), one) << workers << " workers";
    }
}

TEST(RunExperiment, CountsAreConserved)
{
    const auto h = run_experiment(config_for({2, 3, 4, 5, 6}, 2'000, 3));
    for (int n = 2; n <= 6; ++n)
        EXPECT_EQ(h.total(n), 2'000u);
}

TEST(RunExperiment, EmptyCoreShareGrowsWithSize)
{
    // Coarse trend check; the exact shares are covered by the acceptance run.
    const auto h = run_experiment(config_for({3, 5, 7}, 20'000, 11));
    auto empty_share = [&](int n) {
        const auto& c = h.counts(n);
        const auto it = c.find(0);
        return (it == c.end() ? 0.0 : static_cast<double>(it->second)) / h.total(n);
    };
    EXPECT_LT(empty_share(3), empty_share(5));
    EXPECT_LT(empty_share(5), empty_share(7));
}

TEST(RunExperiment, GameResultIsPureFunctionOfIndex)
{
    const auto config = config_for({4}, 100, 5);
    auto stream = derive_game_stream(5, 4, 37);
    EXPECT_EQ(solve_game(config, 4, 37), find_core(random_matrix(4, stream)).core_size);
}

TEST(ValidateConfig, RejectsBadConfigs)
{
    EXPECT_EQ(error_kind_of([] { validate_config(config_for({1}, 10)); }), ErrorKind::usage);
    EXPECT_EQ(error_kind_of([] { validate_config(config_for({17}, 10)); }), ErrorKind::usage);
    EXPECT_EQ(error_kind_of([] { validate_config(config_for({3, 3}, 10)); }), ErrorKind::usage);
    EXPECT_EQ(error_kind_of([] { validate_config(config_for({3}, 0)); }), ErrorKind::usage);
    auto census = config_for({4}, 10);
    census.census = true;
    EXPECT_EQ(error_kind_of([&] { validate_config(census); }), ErrorKind::usage);
}

TEST(ConfigHash, IgnoresWorkersAndInterval)
{
    auto a = config_for({2, 3}, 100);
    auto b = a;
    b.worker_count = 8;
    b.checkpoint_interval = 3;
    EXPECT_EQ(config_hash(a), config_hash(b));
    b.seed = 43;
    EXPECT_NE(config_hash(a), config_hash(b));
}

TEST(CoreSizeHistogram, MergeIdentityAndCommutativity)
{
    CoreSizeHistogram a, b, empty;
    a.add(3, 0, 4);
    a.add(3, 1, 10);
    b.add(3, 1, 5);
    b.add(4, 2, 1);
    EXPECT_EQ(merge_histograms(a, empty), a);
    EXPECT_EQ(merge_histograms(a, b), merge_histograms(b, a));
    const auto m = merge_histograms(a, b);
    EXPECT_EQ(m.total(3), 19u);
    EXPECT_EQ(m.counts(3).at(1), 15u);
    EXPECT_EQ(m.max_core_size(4), 2u);
}

TEST(ResultsCsv, RoundTrip)
{
    CoreSizeHistogram h;
    h.add(2, 1, 10);
    h.add(5, 0, 3);
    h.add(5, 3, 1);
    const auto text = write_results_csv(h);
    EXPECT_EQ(text, "players,core_size,count\n2,1,10\n5,0,3\n5,3,1\n");
    EXPECT_EQ(read_results_csv(text), h);
    EXPECT_EQ(error_kind_of([] { read_results_csv("players,core_size,count\n2,1\n"); }), ErrorKind::validation);
    EXPECT_EQ(error_kind_of([] { read_results_csv("a,b,c\n"); }), ErrorKind::validation);
}

TEST(Checkpoint, InterruptedRunResumesToSameResult)
{
    TempDir dir;
    auto config = config_for({3, 4}, 10'000, 99);
    config.checkpoint_interval = 1'000;
    const auto uninterrupted = run_experiment(config);

    RunControl control;
    control.checkpoint = dir / "run.json";
    control.stop_after = 5'000;
    const auto partial = run_experiment(config, control);
    EXPECT_FALSE(partial.finished());
    ASSERT_TRUE(fs::exists(*control.checkpoint));

    control.stop_after.reset();
    control.resume = true;
    config.worker_count = 3;
    const auto resumed = run_experiment(config, control);
    EXPECT_TRUE(resumed.finished());
    EXPECT_EQ(resumed.histogram, uninterrupted);
}

TEST(Checkpoint, RejectsMismatchedAndBrokenFiles)
{
    TempDir dir;
    auto config = config_for({3}, 2'000, 1);
    RunControl control;
    control.checkpoint = dir / "run.json";
    control.stop_after = 500;
    run_experiment(config, control);

    auto other_seed = config;
    other_seed.seed = 2;
    EXPECT_EQ(error_kind_of([&] { checkpoint_resume(*control.checkpoint, other_seed); }), ErrorKind::checkpoint);
    auto other_games = config;
    other_games.games_per_size = 3'000;
    EXPECT_EQ(error_kind_of([&] { checkpoint_resume(*control.checkpoint, other_games); }), ErrorKind::checkpoint);
    EXPECT_EQ(checkpoint_resume(*control.checkpoint, config).completed.at(3), 500u);

    EXPECT_EQ(error_kind_of([&] { checkpoint_resume(dir / "missing.json", config); }), ErrorKind::checkpoint);
    {
        std::ofstream(dir / "corrupt.json") << "{\"format\": ";
    }
    EXPECT_EQ(error_kind_of([&] { checkpoint_resume(dir / "corrupt.json", config); }), ErrorKind::checkpoint);
}

}  // namespace
}  // namespace hedcore
