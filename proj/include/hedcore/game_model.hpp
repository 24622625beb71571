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

#include <bit>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>
#include <json.hpp>

namespace hedcore {

/// Hard ceiling on the number of players.
inline constexpr int kMaxPlayers = 16;

/// Players are numbered 1..n.
using PlayerId = int;

/// Ordinal rank of a coalition in one player's preference order. The least
/// preferred coalition gets 1; larger means more preferred.
using Rank = std::uint16_t;

using BigInt = mpz_class;

/// Throws ErrorKind::invalid_player unless 1 <= n <= kMaxPlayers.
void check_player_count(int n);

/// Throws ErrorKind::invalid_player unless 1 <= i <= n.
void check_player(int n, PlayerId i);

/// Bit of player i in an n-player coalition mask. Player 1 is the most
/// significant bit, so {1,2} of three players reads as binary 110 = 6.
constexpr std::uint32_t player_bit(int n, PlayerId i) noexcept { return 1u << (n - i); }

constexpr std::uint32_t grand_coalition_bits(int n) noexcept { return (1u << n) - 1u; }

/// Coalition as an n-bit set; 0 is the empty set.
class CoalitionMask {
public:
    constexpr CoalitionMask() noexcept = default;
    constexpr explicit CoalitionMask(std::uint32_t bits) noexcept : bits_(bits) {}

    constexpr std::uint32_t bits() const noexcept { return bits_; }
    constexpr bool empty() const noexcept { return bits_ == 0; }
    int size() const noexcept { return std::popcount(bits_); }

    constexpr bool contains(int n, PlayerId i) const noexcept
    {
        return i >= 1 && i <= n && (bits_ & player_bit(n, i)) != 0;
    }

    auto operator<=>(const CoalitionMask&) const = default;

private:
    std::uint32_t bits_ = 0;
};

CoalitionMask encode_coalition(int n, std::span<const PlayerId> members);
CoalitionMask encode_coalition(int n, std::initializer_list<PlayerId> members);

/// Members in ascending player order.
std::vector<PlayerId> decode_coalition(int n, CoalitionMask mask);

/// h_i: index in 1..2^(n-1) of a coalition containing player i. Player i's bit
/// is deleted, the remaining bits are read as a binary number (first remaining
/// player most significant) and one is added.
std::uint32_t coalition_index(int n, PlayerId i, CoalitionMask s);

/// Inverse of coalition_index.
CoalitionMask coalition_from_index(int n, PlayerId i, std::uint32_t j);

/// The n x 2^(n-1) rank matrix of a strict-preference hedonic game.
///
/// Row i lists player i's rank of coalition_from_index(n, i, j) at column j.
/// Construction only checks the shape; use validate_matrix() to check that
/// every row is a permutation of 1..2^(n-1).
class PreferenceMatrix {
public:
    /// ranks is row-major, n rows of 2^(n-1) entries.
    PreferenceMatrix(int n, std::vector<Rank> ranks);

    static PreferenceMatrix from_rows(const std::vector<std::vector<Rank>>& rows);

    int players() const noexcept { return players_; }
    std::uint32_t columns() const noexcept { return columns_; }

    /// Rank at (player i, column j), both 1-based.
    Rank rank(PlayerId i, std::uint32_t j) const;

    std::span<const Rank> row(PlayerId i) const;
    std::span<const Rank> data() const noexcept { return ranks_; }

    /// V_i(S): player i's rank of a coalition S containing i.
    Rank rank_of(PlayerId i, CoalitionMask s) const;

    bool operator==(const PreferenceMatrix&) const = default;

private:
    int players_;
    std::uint32_t columns_;
    std::vector<Rank> ranks_;
};

struct ValidationReport {
    bool valid = true;
    /// First offending row (1-based) and the value that broke it.
    std::optional<PlayerId> row;
    std::optional<std::uint32_t> value;
    std::string message;

    explicit operator bool() const noexcept { return valid; }
};

ValidationReport validate_matrix(const PreferenceMatrix& game);

/// Throws ErrorKind::validation with the report's message when invalid.
void require_valid(const PreferenceMatrix& game);

/// True iff player i strictly prefers S to T. Both must contain i.
bool prefers(const PreferenceMatrix& game, PlayerId i, CoalitionMask s, CoalitionMask t);

/// ((2^(n-1))!)^n, exactly.
BigInt count_games(int n);

// Game files. JSON: {"players": n, "ranks": [[row 1], ...]}. Compact text:
// "n;r11,r12,...;r21,...". Both parsers only check shape; they do not validate
// the permutation property.

nlohmann::json to_json(const PreferenceMatrix& game);
PreferenceMatrix matrix_from_json(const nlohmann::json& doc);

std::string write_game_json(const PreferenceMatrix& game);
PreferenceMatrix read_game_json(std::string_view text);

std::string to_compact(const PreferenceMatrix& game);
PreferenceMatrix from_compact(std::string_view text);

}  // namespace hedcore
