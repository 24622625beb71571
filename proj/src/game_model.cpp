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

#include "hedcore/game_model.hpp"

#include <algorithm>
#include <charconv>

#include <fmt/format.h>

#include "hedcore/error.hpp"

namespace hedcore {

void check_player_count(int n)
{
    if (n < 1 || n > kMaxPlayers)
        throw Error(ErrorKind::invalid_player,
                    fmt::format("player count {} outside 1..{}", n, kMaxPlayers));
}

void check_player(int n, PlayerId i)
{
    if (i < 1 || i > n)
        throw Error(ErrorKind::invalid_player, fmt::format("player {} outside 1..{}", i, n));
}

CoalitionMask encode_coalition(int n, std::span<const PlayerId> members)
{
    check_player_count(n);
    std::uint32_t bits = 0;
    for (PlayerId i : members) {
        check_player(n, i);
        bits |= player_bit(n, i);
    }
    return CoalitionMask(bits);
}

CoalitionMask encode_coalition(int n, std::initializer_list<PlayerId> members)
{
    return encode_coalition(n, std::span<const PlayerId>(members.begin(), members.size()));
}

std::vector<PlayerId> decode_coalition(int n, CoalitionMask mask)
{
    check_player_count(n);
    if (mask.bits() > grand_coalition_bits(n))
        throw Error(ErrorKind::out_of_range,
                    fmt::format("mask {} does not fit in {} players", mask.bits(), n));
    std::vector<PlayerId> members;
    for (PlayerId i = 1; i <= n; ++i)
        if (mask.bits() & player_bit(n, i))
            members.push_back(i);
    return members;
}

std::uint32_t coalition_index(int n, PlayerId i, CoalitionMask s)
{
    check_player_count(n);
    check_player(n, i);
    if (s.bits() > grand_coalition_bits(n) || !s.contains(n, i))
        throw Error(ErrorKind::not_a_member,
                    fmt::format("player {} is not a member of coalition {}", i, s.bits()));
    const int pos = n - i;
    const std::uint32_t low = s.bits() & ((1u << pos) - 1u);
    const std::uint32_t high = s.bits() >> (pos + 1);
    return ((high << pos) | low) + 1u;
}

CoalitionMask coalition_from_index(int n, PlayerId i, std::uint32_t j)
{
    check_player_count(n);
    check_player(n, i);
    if (j < 1 || j > (1u << (n - 1)))
        throw Error(ErrorKind::index_error,
                    fmt::format("coalition index {} outside 1..{}", j, 1u << (n - 1)));
    const int pos = n - i;
    const std::uint32_t rest = j - 1u;
    const std::uint32_t low = rest & ((1u << pos) - 1u);
    const std::uint32_t high = rest >> pos;
    return CoalitionMask((high << (pos + 1)) | (1u << pos) | low);
}

PreferenceMatrix::PreferenceMatrix(int n, std::vector<Rank> ranks)
    : players_(n), columns_(0), ranks_(std::move(ranks))
{
    check_player_count(n);
    columns_ = 1u << (n - 1);
    if (ranks_.size() != static_cast<std::size_t>(n) * columns_)
        throw Error(ErrorKind::validation,
                    fmt::format("expected {} x {} ranks, got {} entries", n, columns_,
                                ranks_.size()));
}

PreferenceMatrix PreferenceMatrix::from_rows(const std::vector<std::vector<Rank>>& rows)
{
    const int n = static_cast<int>(rows.size());
    if (n < 1 || n > kMaxPlayers)
        throw Error(ErrorKind::validation, fmt::format("matrix has {} rows", n));
    const std::size_t columns = std::size_t{1} << (n - 1);
    std::vector<Rank> flat;
    flat.reserve(rows.size() * columns);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != columns)
            throw Error(ErrorKind::validation,
                        fmt::format("row {} has {} entries, expected {}", r + 1, rows[r].size(),
                                    columns));
        flat.insert(flat.end(), rows[r].begin(), rows[r].end());
    }
    return PreferenceMatrix(n, std::move(flat));
}

Rank PreferenceMatrix::rank(PlayerId i, std::uint32_t j) const
{
    check_player(players_, i);
    if (j < 1 || j > columns_)
        throw Error(ErrorKind::index_error,
                    fmt::format("column {} outside 1..{}", j, columns_));
    return ranks_[static_cast<std::size_t>(i - 1) * columns_ + (j - 1)];
}

std::span<const Rank> PreferenceMatrix::row(PlayerId i) const
{
    check_player(players_, i);
    return std::span<const Rank>(ranks_).subspan(static_cast<std::size_t>(i - 1) * columns_,
                                                 columns_);
}

Rank PreferenceMatrix::rank_of(PlayerId i, CoalitionMask s) const
{
    return rank(i, coalition_index(players_, i, s));
}

ValidationReport validate_matrix(const PreferenceMatrix& game)
{
    const std::uint32_t columns = game.columns();
    std::vector<bool> seen(columns + 1u);
    for (PlayerId i = 1; i <= game.players(); ++i) {
        std::fill(seen.begin(), seen.end(), false);
        for (Rank value : game.row(i)) {
            if (value < 1 || value > columns) {
                return {false, i, value,
                        fmt::format("row {}: rank {} outside 1..{}", i, value, columns)};
            }
            if (seen[value]) {
                return {false, i, value, fmt::format("row {}: rank {} repeated", i, value)};
            }
            seen[value] = true;
        }
    }
    return {};
}

void require_valid(const PreferenceMatrix& game)
{
    if (auto report = validate_matrix(game); !report)
        throw Error(ErrorKind::validation, report.message);
}

bool prefers(const PreferenceMatrix& game, PlayerId i, CoalitionMask s, CoalitionMask t)
{
    return game.rank_of(i, s) > game.rank_of(i, t);
}

BigInt count_games(int n)
{
    check_player_count(n);
    BigInt factorial;
    mpz_fac_ui(factorial.get_mpz_t(), 1ul << (n - 1));
    BigInt result;
    mpz_pow_ui(result.get_mpz_t(), factorial.get_mpz_t(), static_cast<unsigned long>(n));
    return result;
}

nlohmann::json to_json(const PreferenceMatrix& game)
{
    nlohmann::json rows = nlohmann::json::array();
    for (PlayerId i = 1; i <= game.players(); ++i) {
        auto r = game.row(i);
        rows.push_back(std::vector<Rank>(r.begin(), r.end()));
    }
    return {{"players", game.players()}, {"ranks", std::move(rows)}};
}

PreferenceMatrix matrix_from_json(const nlohmann::json& doc)
{
    if (!doc.is_object() || !doc.contains("players") || !doc.contains("ranks"))
        throw Error(ErrorKind::validation, "game JSON needs \"players\" and \"ranks\"");
    const auto& players = doc.at("players");
    const auto& ranks = doc.at("ranks");
    if (!players.is_number_integer() || !ranks.is_array())
        throw Error(ErrorKind::validation, "game JSON has wrongly typed fields");
    const auto n = players.get<long long>();
    if (n < 1 || n > kMaxPlayers)
        throw Error(ErrorKind::validation, fmt::format("player count {} outside 1..{}", n,
                                                       kMaxPlayers));
    if (ranks.size() != static_cast<std::size_t>(n))
        throw Error(ErrorKind::validation,
                    fmt::format("\"players\" is {} but {} rows given", n, ranks.size()));
    std::vector<std::vector<Rank>> rows;
    for (const auto& row : ranks) {
        if (!row.is_array())
            throw Error(ErrorKind::validation, "rank rows must be arrays");
        auto& out = rows.emplace_back();
        for (const auto& v : row) {
            if (!v.is_number_integer() || v.get<long long>() < 0 || v.get<long long>() > 0xFFFF)
                throw Error(ErrorKind::validation, "ranks must be integers in 0..65535");
            out.push_back(static_cast<Rank>(v.get<long long>()));
        }
    }
    return PreferenceMatrix::from_rows(rows);
}

std::string write_game_json(const PreferenceMatrix& game)
{
    return to_json(game).dump() + "\n";
}

PreferenceMatrix read_game_json(std::string_view text)
{
    auto doc = nlohmann::json::parse(text, nullptr, false);
    if (doc.is_discarded())
        throw Error(ErrorKind::validation, "malformed game JSON");
    return matrix_from_json(doc);
}

std::string to_compact(const PreferenceMatrix& game)
{
    std::string out = std::to_string(game.players());
    for (PlayerId i = 1; i <= game.players(); ++i) {
        out += ';';
        out += fmt::format("{}", fmt::join(game.row(i), ","));
    }
    return out;
}

namespace {

long long parse_integer(std::string_view field)
{
    long long value = 0;
    const auto* end = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(field.data(), end, value);
    if (ec != std::errc{} || ptr != end)
        throw Error(ErrorKind::validation, fmt::format("bad integer '{}' in compact game", field));
    return value;
}

std::vector<std::string_view> split(std::string_view text, char sep)
{
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    for (;;) {
        auto pos = text.find(sep, start);
        parts.push_back(text.substr(start, pos - start));
        if (pos == std::string_view::npos)
            return parts;
        start = pos + 1;
    }
}

}  // namespace

PreferenceMatrix from_compact(std::string_view text)
{
    while (!text.empty() && (text.back() == '\n' || text.back() == '\r' || text.back() == ' '))
        text.remove_suffix(1);
    auto fields = split(text, ';');
    const long long n = parse_integer(fields.front());
    if (n < 1 || n > kMaxPlayers)
        throw Error(ErrorKind::validation, fmt::format("player count {} outside 1..{}", n,
                                                       kMaxPlayers));
    if (fields.size() != static_cast<std::size_t>(n) + 1)
        throw Error(ErrorKind::validation,
                    fmt::format("compact game declares {} players but has {} rows", n,
                                fields.size() - 1));
    std::vector<std::vector<Rank>> rows;
    for (std::size_t r = 1; r < fields.size(); ++r) {
        auto& out = rows.emplace_back();
        for (auto item : split(fields[r], ',')) {
            const long long v = parse_integer(item);
            if (v < 0 || v > 0xFFFF)
                throw Error(ErrorKind::validation, "ranks must be integers in 0..65535");
            out.push_back(static_cast<Rank>(v));
        }
    }
    return PreferenceMatrix::from_rows(rows);
}

}  // namespace hedcore
