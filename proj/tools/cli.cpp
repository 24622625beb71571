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

#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "hedcore/analysis.hpp"
#include "hedcore/core_solver.hpp"
#include "hedcore/error.hpp"
#include "hedcore/experiment.hpp"
#include "hedcore/generator.hpp"
#include "hedcore/partition_space.hpp"

namespace hedcore::cli {

namespace {

int exit_code(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::usage:
    case ErrorKind::invalid_player:
    case ErrorKind::out_of_range:
    case ErrorKind::infeasible:
        return kExitUsage;
    case ErrorKind::validation:
    case ErrorKind::invalid_partition:
        return kExitInvalidInput;
    case ErrorKind::checkpoint:
        return kExitCheckpoint;
    default:
        return kExitFailure;
    }
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorKind::io, fmt::format("cannot open '{}'", path));
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

// Writes content to path, or to out when path is empty.
void emit(const std::string& path, const std::string& content, std::ostream& out)
{
    if (path.empty()) {
        out << content;
        return;
    }
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    file << content;
    if (!file)
        throw Error(ErrorKind::io, fmt::format("cannot write '{}'", path));
}

int parse_int(std::string_view text)
{
    int value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size())
        throw Error(ErrorKind::usage, fmt::format("'{}' is not an integer", text));
    return value;
}

std::vector<std::string> split_list(const std::string& text)
{
    std::vector<std::string> items;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ','))
        if (!item.empty())
            items.push_back(item);
    return items;
}

SolveMode parse_mode(const std::string& text)
{
    if (text == "full")
        return SolveMode::full;
    if (text == "first" || text == "first_only")
        return SolveMode::first_only;
    throw Error(ErrorKind::usage, fmt::format("unknown mode '{}'", text));
}

struct Options {
    bool quiet = false;

    struct {
        int players = 0;
        std::string seed = "0";
        std::uint64_t index = 0;
        std::string out;
        std::string format = "json";
    } gen;

    struct {
        std::string game;
        std::string mode = "full";
        std::string out;
    } solve;

    struct {
        std::string sizes = "2..7";
        std::uint64_t games = 100'000;
        std::string seed = "0";
        unsigned workers = 1;
        std::string checkpoint;
        std::uint64_t checkpoint_interval = 10'000;
        bool resume = false;
        bool census = false;
        std::string mode = "full";
        std::optional<std::uint64_t> stop_after;
        std::string out;
    } experiment;

    struct {
        std::string results;
        std::string sizes;
        std::string dists = "weibull,gamma";
        std::string zero_policy = "drop_zeros";
        std::string out;
    } fit;

    struct {
        std::optional<int> bell;
        std::optional<int> count_games;
    } info;

    struct {
        std::string results;
        std::string fit_dists;
        std::string zero_policy = "drop_zeros";
        std::string out;
    } exporter;
};

int cmd_gen(const Options& o, std::ostream& out)
{
    const auto seed = parse_seed(o.gen.seed);
    check_player_count(o.gen.players);
    auto stream = derive_game_stream(seed, o.gen.players, o.gen.index);
    const auto game = random_matrix(o.gen.players, stream);
    if (o.gen.format == "compact")
        emit(o.gen.out, to_compact(game) + "\n", out);
    else if (o.gen.format == "json")
        emit(o.gen.out, write_game_json(game), out);
    else
        throw Error(ErrorKind::usage, fmt::format("unknown game format '{}'", o.gen.format));
    return kExitOk;
}

int cmd_solve(const Options& o, std::ostream& out)
{
    const auto mode = parse_mode(o.solve.mode);
    const std::string text = read_file(o.solve.game);
    const auto first = text.find_first_not_of(" \t\r\n");
    const auto game = (first != std::string::npos && text[first] != '{')
                          ? from_compact(text)
                          : read_game_json(text);
    const auto result = find_core(game, mode);
    const std::string json = to_json(result).dump() + "\n";
    if (o.solve.out.empty()) {
        out << json;
    } else {
        emit(o.solve.out, json, out);
        if (!o.quiet)
            out << "core_size: " << result.core_size << '\n';
    }
    return kExitOk;
}

int cmd_experiment(const Options& o, std::ostream& out)
{
    ExperimentConfig config;
    config.sizes = parse_sizes(o.experiment.sizes);
    config.games_per_size = o.experiment.games;
    config.seed = parse_seed(o.experiment.seed);
    config.mode = parse_mode(o.experiment.mode);
    config.worker_count = o.experiment.workers;
    config.checkpoint_interval = o.experiment.checkpoint_interval;
    config.census = o.experiment.census;

    RunControl control;
    if (!o.experiment.checkpoint.empty())
        control.checkpoint = o.experiment.checkpoint;
    control.resume = o.experiment.resume;
    control.stop_after = o.experiment.stop_after;

    const auto state = run_experiment(config, control);
    if (!state.finished()) {
        if (!o.quiet)
            out << "stopped early; resume from the checkpoint to finish\n";
        return kExitOk;
    }
    emit(o.experiment.out, write_results_csv(state.histogram), out);
    return kExitOk;
}

std::vector<int> requested_sizes(const std::string& text, const CoreSizeHistogram& histogram)
{
    if (text.empty()) {
        std::vector<int> all;
        for (const auto& [n, counts] : histogram.sizes())
            all.push_back(n);
        return all;
    }
    auto sizes = parse_sizes(text);
    for (int n : sizes)
        if (!histogram.has(n))
            throw Error(ErrorKind::validation, fmt::format("results have no size {}", n));
    return sizes;
}

int cmd_fit(const Options& o, std::ostream& out)
{
    const auto histogram = read_results_csv(read_file(o.fit.results));
    const auto policy = parse_zero_policy(o.fit.zero_policy);
    std::vector<Family> families;
    for (const auto& name : split_list(o.fit.dists))
        families.push_back(parse_family(name));
    if (families.empty())
        throw Error(ErrorKind::usage, "no distribution families requested");

    nlohmann::json results = nlohmann::json::array();
    for (int n : requested_sizes(o.fit.sizes, histogram)) {
        const auto raw = WeightedSample::from_counts(histogram.counts(n));
        nlohmann::json entry = {{"players", n}, {"n_games", raw.count()}};
        try {
            entry["moments"] = to_json(moments(raw));
        } catch (const Error& e) {
            entry["moments"] = nullptr;
        }
        std::vector<FitResult> fits;
        nlohmann::json errors = nlohmann::json::array();
        for (auto family : families) {
            try {
                fits.push_back(fit(family, raw, policy));
            } catch (const Error& e) {
                errors.push_back({{"family", to_string(family)},
                                  {"error", fmt::format("{}: {}", to_string(e.kind()), e.what())}});
            }
        }
        nlohmann::json fit_list = nlohmann::json::array();
        for (const auto& f : fits)
            fit_list.push_back(to_json(f));
        entry["fits"] = std::move(fit_list);
        entry["errors"] = std::move(errors);
        if (!fits.empty()) {
            const auto ranking = model_compare(fits);
            nlohmann::json by_aic = nlohmann::json::array(), by_bic = nlohmann::json::array();
            for (auto k : ranking.by_aic)
                by_aic.push_back(to_string(fits[k].family()));
            for (auto k : ranking.by_bic)
                by_bic.push_back(to_string(fits[k].family()));
            entry["ranking"] = {{"aic", std::move(by_aic)}, {"bic", std::move(by_bic)}};
        }
        results.push_back(std::move(entry));
    }
    nlohmann::json report = {{"zero_policy", to_string(policy)}, {"results", std::move(results)}};
    emit(o.fit.out, report.dump(2) + "\n", out);
    return kExitOk;
}

int cmd_info(const Options& o, std::ostream& out)
{
    if (o.info.bell.has_value() == o.info.count_games.has_value())
        throw Error(ErrorKind::usage, "info needs exactly one of --bell or --count-games");
    if (o.info.bell)
        out << bell_number(*o.info.bell).get_str() << '\n';
    else
        out << count_games(*o.info.count_games).get_str() << '\n';
    return kExitOk;
}

int cmd_export(const Options& o, std::ostream& out)
{
    const auto histogram = read_results_csv(read_file(o.exporter.results));
    FitsBySize fits;
    const auto families = split_list(o.exporter.fit_dists);
    if (!families.empty()) {
        const auto policy = parse_zero_policy(o.exporter.zero_policy);
        for (const auto& [n, counts] : histogram.sizes()) {
            const auto raw = WeightedSample::from_counts(counts);
            for (const auto& name : families) {
                try {
                    fits[n].push_back(fit(parse_family(name), raw, policy));
                } catch (const Error& e) {
                    if (e.kind() == ErrorKind::usage)
                        throw;
                }
            }
        }
    }
    emit(o.exporter.out, export_distribution_tables(histogram, fits), out);
    return kExitOk;
}

}  // namespace

std::vector<int> parse_sizes(const std::string& text)
{
    std::vector<int> sizes;
    if (auto dots = text.find(".."); dots != std::string::npos) {
        const int lo = parse_int(std::string_view(text).substr(0, dots));
        const int hi = parse_int(std::string_view(text).substr(dots + 2));
        if (lo > hi)
            throw Error(ErrorKind::usage, fmt::format("empty size range '{}'", text));
        for (int n = lo; n <= hi; ++n)
            sizes.push_back(n);
        return sizes;
    }
    for (const auto& item : split_list(text))
        sizes.push_back(parse_int(item));
    return sizes;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    Options o;
    CLI::App app{"Random hedonic games: generation, exact core solving, Monte Carlo experiments "
                 "and distribution fitting",
                 "hedcore"};
    app.require_subcommand(1);
    app.add_flag("--quiet", o.quiet, "Suppress informational output");

    auto* gen = app.add_subcommand("gen", "Generate a random game");
    gen->add_option("--players", o.gen.players, "Number of players")->required();
    gen->add_option("--seed", o.gen.seed, "Master seed (decimal or 0x hex)");
    gen->add_option("--index", o.gen.index, "Game index within the seed's stream family");
    gen->add_option("--format", o.gen.format, "json or compact");
    gen->add_option("--out", o.gen.out, "Output file (default stdout)");

    auto* solve = app.add_subcommand("solve", "Compute the core of a game file");
    solve->add_option("game", o.solve.game, "Game file (JSON or compact text)")->required();
    solve->add_option("--mode", o.solve.mode, "full or first");
    solve->add_option("--out", o.solve.out, "Write the result JSON here");

    auto* experiment = app.add_subcommand("experiment", "Run the Monte Carlo core-size census");
    experiment->add_option("--sizes", o.experiment.sizes, "Game sizes, e.g. 2..7 or 3,5");
    experiment->add_option("--games", o.experiment.games, "Games per size");
    experiment->add_option("--seed", o.experiment.seed, "Master seed (decimal or 0x hex)");
    experiment->add_option("--workers", o.experiment.workers, "Worker threads");
    experiment->add_option("--checkpoint", o.experiment.checkpoint, "Checkpoint file");
    experiment->add_option("--checkpoint-interval", o.experiment.checkpoint_interval,
                           "Games between checkpoints");
    experiment->add_flag("--resume", o.experiment.resume, "Continue from --checkpoint");
    experiment->add_flag("--census", o.experiment.census, "Enumerate every game (sizes <= 3)");
    experiment->add_option("--mode", o.experiment.mode, "full or first");
    experiment->add_option("--stop-after", o.experiment.stop_after,
                           "Stop after this many games (checkpoint stays resumable)");
    experiment->add_option("--out", o.experiment.out, "Results CSV (default stdout)");

    auto* fit_cmd = app.add_subcommand("fit", "Fit distributions to experiment results");
    fit_cmd->add_option("results", o.fit.results, "Results CSV")->required();
    fit_cmd->add_option("--sizes", o.fit.sizes, "Sizes to fit (default: all)");
    fit_cmd->add_option("--dist", o.fit.dists, "Families: weibull,gamma,lognormal");
    fit_cmd->add_option("--zero-policy", o.fit.zero_policy,
                        "drop_zeros, shift_by_one or include_raw");
    fit_cmd->add_option("--out", o.fit.out, "Fit report JSON (default stdout)");

    auto* info = app.add_subcommand("info", "Print exact combinatorial counts");
    info->add_option("--bell", o.info.bell, "Bell number B_n");
    info->add_option("--count-games", o.info.count_games, "Number of n-player games");

    auto* exporter = app.add_subcommand("export", "Frequency and CDF tables for plotting");
    exporter->add_option("results", o.exporter.results, "Results CSV")->required();
    exporter->add_option("--fit-dist", o.exporter.fit_dists, "Add fitted CDF columns");
    exporter->add_option("--zero-policy", o.exporter.zero_policy, "Zero policy for the fits");
    exporter->add_option("--out", o.exporter.out, "Output CSV (default stdout)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(std::move(reversed));
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error[usage]: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (gen->parsed())
            return cmd_gen(o, out);
        if (solve->parsed())
            return cmd_solve(o, out);
        if (experiment->parsed())
            return cmd_experiment(o, out);
        if (fit_cmd->parsed())
            return cmd_fit(o, out);
        if (info->parsed())
            return cmd_info(o, out);
        if (exporter->parsed())
            return cmd_export(o, out);
    } catch (const Error& e) {
        err << "error[" << to_string(e.kind()) << "]: " << e.what() << '\n';
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        err << "error[internal]: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitUsage;
}

}  // namespace hedcore::cli
