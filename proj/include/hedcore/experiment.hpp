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

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "hedcore/core_solver.hpp"

namespace hedcore {

struct ExperimentConfig {
    std::vector<int> sizes;
    std::uint64_t games_per_size = 100'000;
    std::uint64_t seed = 0;
    SolveMode mode = SolveMode::full;
    unsigned worker_count = 1;
    std::uint64_t checkpoint_interval = 10'000;
    /// Enumerate every game instead of sampling; only for sizes <= 3.
    /// games_per_size is then ignored.
    bool census = false;
};

/// Throws ErrorKind::usage for an unusable configuration.
void validate_config(const ExperimentConfig& config);

/// Games to run for size n under this configuration.
std::uint64_t planned_games(const ExperimentConfig& config, int n);

/// FNV-1a over the fields that determine results (sizes, games, seed, mode,
/// census). worker_count and checkpoint_interval are excluded.
std::uint64_t config_hash(const ExperimentConfig& config);

/// Per game size, the number of games observed at each core size.
class CoreSizeHistogram {
public:
    using Counts = std::map<std::uint64_t, std::uint64_t>;

    void add(int n, std::uint64_t core_size, std::uint64_t count = 1);
    void merge(const CoreSizeHistogram& other);

    const std::map<int, Counts>& sizes() const noexcept { return counts_; }
    const Counts& counts(int n) const;
    bool has(int n) const { return counts_.contains(n); }
    bool empty() const noexcept { return counts_.empty(); }

    std::uint64_t total(int n) const;
    std::uint64_t max_core_size(int n) const;

    bool operator==(const CoreSizeHistogram&) const = default;

private:
    std::map<int, Counts> counts_;
};

CoreSizeHistogram merge_histograms(const CoreSizeHistogram& a, const CoreSizeHistogram& b);

/// "players,core_size,count" rows for every nonzero count, sorted.
std::string write_results_csv(const CoreSizeHistogram& histogram);
CoreSizeHistogram read_results_csv(std::string_view text);

/// Resumable progress of a run.
struct ExperimentState {
    std::uint64_t config_hash = 0;
    ExperimentConfig config;
    /// Games finished per size; always a prefix 0..completed-1 of the indices.
    std::map<int, std::uint64_t> completed;
    CoreSizeHistogram histogram;

    bool finished() const;
};

void checkpoint_save(const std::filesystem::path& path, const ExperimentState& state);

/// Loads a checkpoint and checks it against config. Missing, corrupt or
/// mismatched files throw ErrorKind::checkpoint.
ExperimentState checkpoint_resume(const std::filesystem::path& path, const ExperimentConfig& config);

struct RunControl {
    /// Written after every checkpoint_interval games and at the end.
    std::optional<std::filesystem::path> checkpoint;
    /// Continue from the checkpoint file instead of starting fresh.
    bool resume = false;
    /// Stop after this many games in this invocation (simulated interruption).
    std::optional<std::uint64_t> stop_after;
};

/// Core size of game `index` of size n under config (random or census).
std::uint64_t solve_game(const ExperimentConfig& config, int n, std::uint64_t index);

/// Runs the experiment. Each game is a pure function of (seed, n, index), and
/// per-worker counts are summed, so the result does not depend on
/// worker_count or on interruptions.
ExperimentState run_experiment(const ExperimentConfig& config, const RunControl& control);

CoreSizeHistogram run_experiment(const ExperimentConfig& config);

}  // namespace hedcore
