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
#include <optional>
#include <random>
#include <string_view>
#include <vector>

#include "hedcore/game_model.hpp"

namespace hedcore {

/// SplitMix64 finalizer (Stafford variant 13).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept
{
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ull;

/// Game indices must stay below 2^48 so that (n, index) packs into one word.
inline constexpr std::uint64_t kMaxGameIndex = (std::uint64_t{1} << 48) - 1;

/// Seed of the stream for game `index` of size n:
///   mix64(mix64(master) ^ mix64(((n << 48) | index) + kGoldenGamma))
std::uint64_t derive_game_seed(std::uint64_t master_seed, int n, std::uint64_t game_index);

/// Deterministic random stream: std::mt19937_64 seeded with one 64-bit word.
class GameStream {
public:
    explicit GameStream(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [0, bound) from exactly one draw (multiply-high).
    /// The bias is below bound / 2^64.
    std::uint64_t below(std::uint64_t bound)
    {
        return static_cast<std::uint64_t>((static_cast<unsigned __int128>(next()) * bound) >> 64);
    }

private:
    std::mt19937_64 engine_;
};

GameStream derive_game_stream(std::uint64_t master_seed, int n, std::uint64_t game_index);

/// Uniform random game. Each row, player 1 first, starts as 1..m (m = 2^(n-1))
/// and is shuffled by Fisher-Yates from the top: for k = m-1 down to 1 swap
/// positions k and below(k+1). That is exactly m-1 draws per row.
PreferenceMatrix random_matrix(int n, GameStream& stream);

/// Parses a decimal or 0x-prefixed hexadecimal 64-bit seed.
std::uint64_t parse_seed(std::string_view text);

/// Largest n for which every game can be enumerated.
inline constexpr int kMaxCensusPlayers = 3;

/// count_games(n) as a machine integer; n <= kMaxCensusPlayers.
std::uint64_t census_size(int n);

/// Game number `index` of the census, in the same order as AllGames: rows are
/// read as mixed-radix digits (player n fastest), each digit being the rank
/// of the row among the permutations of 1..m in lexicographic order.
PreferenceMatrix census_game(int n, std::uint64_t index);

/// Every game of n <= kMaxCensusPlayers players, each exactly once. Larger n
/// throws ErrorKind::infeasible.
class AllGames {
public:
    explicit AllGames(int n);

    std::optional<PreferenceMatrix> next();

private:
    int n_;
    std::vector<std::vector<Rank>> rows_;
    bool started_ = false;
    bool done_ = false;
};

}  // namespace hedcore
