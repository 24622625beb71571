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

#include "hedcore/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <exception>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "hedcore/error.hpp"
#include "hedcore/generator.hpp"

namespace hedcore {

namespace {

constexpr std::string_view kCheckpointFormat = "hedcore-checkpoint";
constexpr int kCheckpointVersion = 1;
constexpr std::string_view kCsvHeader = "players,core_size,count";

std::string_view mode_name(SolveMode mode) { return mode == SolveMode::full ? "full" : "first_only"; }

std::string hex64(std::uint64_t v) { return fmt::format("{:#018x}", v); }

}  // namespace

void validate_config(const ExperimentConfig& config)
{
    std::set<int> seen;
    for (int n : config.sizes) {
        if (n < 2 || n > kMaxPlayers)
            throw Error(ErrorKind::usage, fmt::format("game size {} outside 2..{}", n, kMaxPlayers));
        if (!seen.insert(n).second)
            throw Error(ErrorKind::usage, fmt::format("game size {} listed twice", n));
        if (config.census && n > kMaxCensusPlayers)
            throw Error(ErrorKind::usage,
                        fmt::format("census needs sizes <= {}, got {}", kMaxCensusPlayers, n));
    }
    if (!config.census && config.games_per_size < 1)
        throw Error(ErrorKind::usage, "games per size must be at least 1");
    if (config.games_per_size > kMaxGameIndex + 1)
        throw Error(ErrorKind::usage, "games per size exceeds 2^48");
    if (config.worker_count < 1)
        throw Error(ErrorKind::usage, "worker count must be at least 1");
    if (config.checkpoint_interval < 1)
        throw Error(ErrorKind::usage, "checkpoint interval must be at least 1");
}

std::uint64_t planned_games(const ExperimentConfig& config, int n)
{
    return config.census ? census_size(n) : config.games_per_size;
}

std::uint64_t config_hash(const ExperimentConfig& config)
{
    const std::string canonical =
        fmt::format("sizes={};games={};seed={};mode={};census={}", fmt::join(config.sizes, ","),
                    config.census ? 0 : config.games_per_size, config.seed,
                    mode_name(config.mode), config.census ? 1 : 0);
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : canonical) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

void CoreSizeHistogram::add(int n, std::uint64_t core_size, std::uint64_t count)
{
    auto& bucket = counts_[n];
    if (count > 0)
        bucket[core_size] += count;
}

void CoreSizeHistogram::merge(const CoreSizeHistogram& other)
{
    for (const auto& [n, counts] : other.counts_) {
        auto& mine = counts_[n];
        for (const auto& [size, count] : counts)
            mine[size] += count;
    }
}

const CoreSizeHistogram::Counts& CoreSizeHistogram::counts(int n) const
{
    auto it = counts_.find(n);
    if (it == counts_.end())
        throw Error(ErrorKind::out_of_range, fmt::format("histogram has no size {}", n));
    return it->second;
}

std::uint64_t CoreSizeHistogram::total(int n) const
{
    auto it = counts_.find(n);
    if (it == counts_.end())
        return 0;
    std::uint64_t sum = 0;
    for (const auto& [size, count] : it->second)
        sum += count;
    return sum;
}

std::uint64_t CoreSizeHistogram::max_core_size(int n) const
{
    auto it = counts_.find(n);
    if (it == counts_.end() || it->second.empty())
        return 0;
    return it->second.rbegin()->first;
}

CoreSizeHistogram merge_histograms(const CoreSizeHistogram& a, const CoreSizeHistogram& b)
{
    CoreSizeHistogram out = a;
    out.merge(b);
    return out;
}

std::string write_results_csv(const CoreSizeHistogram& histogram)
{
    std::string out(kCsvHeader);
    out += '\n';
    for (const auto& [n, counts] : histogram.sizes())
        for (const auto& [size, count] : counts)
            if (count > 0)
                out += fmt::format("{},{},{}\n", n, size, count);
    return out;
}

CoreSizeHistogram read_results_csv(std::string_view text)
{
    std::istringstream in{std::string(text)};
    std::string line;
    if (!std::getline(in, line) || (line != kCsvHeader && line != std::string(kCsvHeader) + "\r"))
        throw Error(ErrorKind::validation,
                    fmt::format("results CSV must start with '{}'", kCsvHeader));
    CoreSizeHistogram histogram;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        std::uint64_t fields[3];
        std::string_view rest = line;
        for (int f = 0; f < 3; ++f) {
            auto comma = rest.find(',');
            if ((f < 2) != (comma != std::string_view::npos))
                throw Error(ErrorKind::validation, fmt::format("results CSV line {}: expected 3 fields", line_no));
            auto field = rest.substr(0, comma);
            auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), fields[f]);
            if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size())
                throw Error(ErrorKind::validation,
                            fmt::format("results CSV line {}: bad integer '{}'", line_no, field));
            rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
        }
        if (fields[0] < 1 || fields[0] > static_cast<std::uint64_t>(kMaxPlayers))
            throw Error(ErrorKind::validation,
                        fmt::format("results CSV line {}: player count {}", line_no, fields[0]));
        histogram.add(static_cast<int>(fields[0]), fields[1], fields[2]);
    }
    return histogram;
}

bool ExperimentState::finished() const
{
    for (int n : config.sizes) {
        auto it = completed.find(n);
        if (it == completed.end() || it->second < planned_games(config, n))
            return false;
    }
    return true;
}

void checkpoint_save(const std::filesystem::path& path, const ExperimentState& state)
{
    nlohmann::json completed = nlohmann::json::object();
    for (const auto& [n, done] : state.completed)
        completed[std::to_string(n)] = done;
    nlohmann::json counts = nlohmann::json::object();
    for (const auto& [n, bucket] : state.histogram.sizes()) {
        nlohmann::json row = nlohmann::json::object();
        for (const auto& [size, count] : bucket)
            row[std::to_string(size)] = count;
        counts[std::to_string(n)] = std::move(row);
    }
    const auto& c = state.config;
    nlohmann::json doc = {
        {"format", kCheckpointFormat},
        {"version", kCheckpointVersion},
        {"config_hash", hex64(state.config_hash)},
        {"config",
         {{"sizes", c.sizes},
          {"games_per_size", c.games_per_size},
          {"seed", hex64(c.seed)},
          {"mode", mode_name(c.mode)},
          {"census", c.census}}},
        {"completed", std::move(completed)},
        {"counts", std::move(counts)},
    };

    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << doc.dump(1) << '\n';
        if (!out)
            throw Error(ErrorKind::io, fmt::format("cannot write checkpoint {}", tmp.string()));
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec)
        throw Error(ErrorKind::io,
                    fmt::format("cannot move checkpoint into {}: {}", path.string(), ec.message()));
}

ExperimentState checkpoint_resume(const std::filesystem::path& path, const ExperimentConfig& config)
{
    auto fail = [&](std::string_view why) {
        return Error(ErrorKind::checkpoint, fmt::format("checkpoint {}: {}", path.string(), why));
    };
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw fail("missing or unreadable");
    auto doc = nlohmann::json::parse(in, nullptr, false);
    if (doc.is_discarded() || !doc.is_object())
        throw fail("corrupt (not JSON)");

    ExperimentState state;
    state.config = config;
    try {
        if (doc.at("format") != kCheckpointFormat || doc.at("version") != kCheckpointVersion)
            throw fail("unsupported format or version");
        const auto& saved = doc.at("config");
        if (parse_seed(saved.at("seed").get<std::string>()) != config.seed)
            throw fail("seed differs from this run");
        if (saved.at("games_per_size").get<std::uint64_t>() != config.games_per_size &&
            !config.census)
            throw fail("games per size differs from this run");
        if (saved.at("sizes").get<std::vector<int>>() != config.sizes)
            throw fail("game sizes differ from this run");
        if (saved.at("mode").get<std::string>() != mode_name(config.mode) ||
            saved.at("census").get<bool>() != config.census)
            throw fail("solve mode differs from this run");
        state.config_hash = parse_seed(doc.at("config_hash").get<std::string>());
        if (state.config_hash != config_hash(config))
            throw fail("config hash differs from this run");

        for (const auto& [key, value] : doc.at("completed").items())
            state.completed[std::stoi(key)] = value.get<std::uint64_t>();
        for (const auto& [key, row] : doc.at("counts").items()) {
            const int n = std::stoi(key);
            for (const auto& [size, count] : row.items())
                state.histogram.add(n, std::stoull(size), count.get<std::uint64_t>());
        }
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::checkpoint)
            throw;
        throw fail(e.what());
    } catch (const std::exception& e) {
        throw fail(fmt::format("corrupt ({})", e.what()));
    }

    for (const auto& [n, done] : state.completed) {
        if (std::find(config.sizes.begin(), config.sizes.end(), n) == config.sizes.end() ||
            done > planned_games(config, n) || state.histogram.total(n) != done)
            throw fail(fmt::format("inconsistent progress for size {}", n));
    }
    for (const auto& [n, bucket] : state.histogram.sizes())
        if (!state.completed.contains(n))
            throw fail(fmt::format("counts for size {} without progress", n));
    return state;
}

std::uint64_t solve_game(const ExperimentConfig& config, int n, std::uint64_t index)
{
    if (config.census)
        return find_core(census_game(n, index), config.mode).core_size;
    auto stream = derive_game_stream(config.seed, n, index);
    return find_core(random_matrix(n, stream), config.mode).core_size;
}

namespace {

CoreSizeHistogram::Counts run_range(const ExperimentConfig& config, int n, std::uint64_t begin,
                                    std::uint64_t end)
{
    CoreSizeHistogram::Counts counts;
    for (std::uint64_t g = begin; g < end; ++g)
        ++counts[solve_game(config, n, g)];
    return counts;
}

CoreSizeHistogram::Counts run_chunk(const ExperimentConfig& config, int n, std::uint64_t begin,
                                    std::uint64_t end)
{
    const std::uint64_t span = end - begin;
    const unsigned workers =
        static_cast<unsigned>(std::min<std::uint64_t>(config.worker_count, span));
    if (workers <= 1)
        return run_range(config, n, begin, end);

    std::vector<CoreSizeHistogram::Counts> partial(workers);
    std::vector<std::exception_ptr> errors(workers);
    {
        std::vector<std::jthread> threads;
        threads.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            const std::uint64_t lo = begin + span * w / workers;
            const std::uint64_t hi = begin + span * (w + 1) / workers;
            threads.emplace_back([&, w, lo, hi] {
                try {
                    partial[w] = run_range(config, n, lo, hi);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
    }
    for (const auto& e : errors)
        if (e)
            std::rethrow_exception(e);
    CoreSizeHistogram::Counts merged;
    for (const auto& counts : partial)
        for (const auto& [size, count] : counts)
            merged[size] += count;
    return merged;
}

}  // namespace

ExperimentState run_experiment(const ExperimentConfig& config, const RunControl& control)
{
    validate_config(config);
    if (control.resume && !control.checkpoint)
        throw Error(ErrorKind::usage, "resume needs a checkpoint path");

    ExperimentState state;
    if (control.resume) {
        state = checkpoint_resume(*control.checkpoint, config);
    } else {
        state.config = config;
        state.config_hash = config_hash(config);
    }

    std::optional<std::uint64_t> budget = control.stop_after;
    for (int n : config.sizes) {
        const std::uint64_t total = planned_games(config, n);
        std::uint64_t& done = state.completed[n];
        while (done < total) {
            if (budget && *budget == 0) {
                if (control.checkpoint)
                    checkpoint_save(*control.checkpoint, state);
                return state;
            }
            std::uint64_t chunk_end = std::min(total, done + config.checkpoint_interval);
            if (budget)
                chunk_end = std::min(chunk_end, done + *budget);
            for (const auto& [size, count] : run_chunk(config, n, done, chunk_end))
                state.histogram.add(n, size, count);
            if (budget)
                *budget -= chunk_end - done;
            done = chunk_end;
            if (control.checkpoint)
                checkpoint_save(*control.checkpoint, state);
        }
    }
    if (control.checkpoint)
        checkpoint_save(*control.checkpoint, state);
    return state;
}

CoreSizeHistogram run_experiment(const ExperimentConfig& config)
{
    return run_experiment(config, RunControl{}).histogram;
}

}  // namespace hedcore
