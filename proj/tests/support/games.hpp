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

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "hedcore/game_model.hpp"

namespace hedcore::testing_support {

/// The three-player example: A, B, C with
/// {A} > {A,B} > {A,B,C} > {A,C}, {A,B,C} > {A,B} > {B,C} > {B},
/// {A,C} > {A,B,C} > {C} > {B,C}.
inline PreferenceMatrix example_game()
{
    return PreferenceMatrix::from_rows({{4, 1, 3, 2}, {1, 2, 3, 4}, {2, 1, 4, 3}});
}

/// Random game built with std::shuffle, independent of the library generator.
template <class Rng>
PreferenceMatrix shuffled_game(int n, Rng& rng)
{
    const std::size_t m = std::size_t{1} << (n - 1);
    std::vector<std::vector<Rank>> rows(static_cast<std::size_t>(n), std::vector<Rank>(m));
    for (auto& row : rows) {
        std::iota(row.begin(), row.end(), Rank{1});
        std::shuffle(row.begin(), row.end(), rng);
    }
    return PreferenceMatrix::from_rows(rows);
}

/// Game in which every player ranks the grand coalition first and the rest at
/// random.
template <class Rng>
PreferenceMatrix grand_coalition_game(int n, Rng& rng)
{
    auto game = shuffled_game(n, rng);
    std::vector<std::vector<Rank>> rows;
    const CoalitionMask grand(grand_coalition_bits(n));
    for (PlayerId i = 1; i <= n; ++i) {
        auto r = game.row(i);
        std::vector<Rank> row(r.begin(), r.end());
        const auto top = coalition_index(n, i, grand) - 1;
        auto best = std::max_element(row.begin(), row.end());
        std::iter_swap(best, row.begin() + top);
        rows.push_back(std::move(row));
    }
    return PreferenceMatrix::from_rows(rows);
}

}  // namespace hedcore::testing_support
