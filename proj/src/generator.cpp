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

#include "hedcore/generator.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>

#include <fmt/format.h>

#include "hedcore/error.hpp"

namespace hedcore {

std::uint64_t derive_game_seed(std::uint64_t master_seed, int n, std::uint64_t game_index)
{
    check_player_count(n);
    if (game_index > kMaxGameIndex)
        throw Error(ErrorKind::out_of_range, fmt::format("game index {} too large", game_index));
    const std::uint64_t key = (static_cast<std::uint64_t>(n) << 48) | game_index;
    return mix64(mix64(master_seed) ^ mix64(key + kGoldenGamma));
}

GameStream derive_game_stream(std::uint64_t master_seed, int n, std::uint64_t game_index)
{
    return GameStream(derive_game_seed(master_seed, n, game_index));
}

PreferenceMatrix random_matrix(int n, GameStream& stream)
{
    check_player_count(n);
    const std::size_t m = std::size_t{1} << (n - 1);
    std::vector<Rank> ranks(static_cast<std::size_t>(n) * m);
    for (int row = 0; row < n; ++row) {
        auto first = ranks.begin() + static_cast<std::ptrdiff_t>(row * m);
        std::iota(first, first + static_cast<std::ptrdiff_t>(m), Rank{1});
        for (std::size_t k = m - 1; k >= 1; --k) {
            const auto r = stream.below(k + 1);
            std::swap(first[static_cast<std::ptrdiff_t>(k)], first[static_cast<std::ptrdiff_t>(r)]);
        }
    }
    return PreferenceMatrix(n, std::move(ranks));
}

std::uint64_t parse_seed(std::string_view text)
{
    int base = 10;
    if (text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) {
        text.remove_prefix(2);
        base = 16;
    }
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value, base);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size())
        throw Error(ErrorKind::usage, fmt::format("'{}' is not a 64-bit seed", text));
    return value;
}

namespace {

void check_census(int n)
{
    check_player_count(n);
    if (n > kMaxCensusPlayers)
        throw Error(ErrorKind::infeasible,
                    fmt::format("enumerating all {}-player games is infeasible", n));
}

std::uint64_t factorial(std::uint64_t k)
{
    std::uint64_t f = 1;
    for (std::uint64_t t = 2; t <= k; ++t)
        f *= t;
    return f;
}

// Lexicographic unranking of permutations of 1..m.
void unrank_permutation(std::uint64_t rank, std::span<Rank> out)
{
    const std::size_t m = out.size();
    std::vector<Rank> pool(m);
    std::iota(pool.begin(), pool.end(), Rank{1});
    for (std::size_t k = 0; k < m; ++k) {
        const std::uint64_t block = factorial(m - 1 - k);
        const auto pick = static_cast<std::ptrdiff_t>(rank / block);
        rank %= block;
        out[k] = pool[static_cast<std::size_t>(pick)];
        pool.erase(pool.begin() + pick);
    }
}

}  // namespace

std::uint64_t census_size(int n)
{
    check_census(n);
    return count_games(n).get_ui();
}

PreferenceMatrix census_game(int n, std::uint64_t index)
{
    const std::uint64_t total = census_size(n);
    if (index >= total)
        throw Error(ErrorKind::out_of_range,
                    fmt::format("census index {} outside 0..{}", index, total - 1));
    const std::size_t m = std::size_t{1} << (n - 1);
    const std::uint64_t radix = factorial(m);
    std::vector<Rank> ranks(static_cast<std::size_t>(n) * m);
    for (int row = n - 1; row >= 0; --row) {
        unrank_permutation(index % radix,
                           std::span<Rank>(ranks).subspan(static_cast<std::size_t>(row) * m, m));
        index /= radix;
    }
    return PreferenceMatrix(n, std::move(ranks));
}

AllGames::AllGames(int n) : n_(n)
{
    check_census(n);
    const std::size_t m = std::size_t{1} << (n - 1);
    std::vector<Rank> identity(m);
    std::iota(identity.begin(), identity.end(), Rank{1});
    rows_.assign(static_cast<std::size_t>(n), identity);
}

std::optional<PreferenceMatrix> AllGames::next()
{
    if (done_)
        return std::nullopt;
    if (started_) {
        // Odometer over rows, last player fastest; a row that wraps resets to
        // the identity (next_permutation does that) and carries left.
        int row = n_ - 1;
        while (row >= 0 && !std::next_permutation(rows_[row].begin(), rows_[row].end()))
            --row;
        if (row < 0) {
            done_ = true;
            return std::nullopt;
        }
    }
    started_ = true;
    return PreferenceMatrix::from_rows(rows_);
}

}  // namespace hedcore
