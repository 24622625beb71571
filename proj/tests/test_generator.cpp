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

#include <cmath>
#include <map>
#include <set>

#include <gtest/gtest.h>

#include "hedcore/error.hpp"
#include "hedcore/generator.hpp"

namespace hedcore {
namespace {

TEST(RandomMatrix, OnePlayerIsTrivial)
{
    auto stream = derive_game_stream(7, 1, 0);
    EXPECT_EQ(random_matrix(1, stream), PreferenceMatrix::from_rows({{1}}));
}

TEST(RandomMatrix, RowsArePermutations)
{
    for (int n = 2; n <= 10; ++n) {
        auto stream = derive_game_stream(42, n, 0);
        const auto game = random_matrix(n, stream);
        EXPECT_EQ(game.players(), n);
        EXPECT_EQ(game.columns(), 1u << (n - 1));
        EXPECT_TRUE(validate_matrix(game)) << "n=" << n;
    }
}

TEST(RandomMatrix, UsesOneDrawPerSwap)
{
    // Fisher-Yates over m entries consumes m - 1 draws per row.
    for (int n = 2; n <= 6; ++n) {
        auto stream = derive_game_stream(5, n, 3);
        random_matrix(n, stream);
        GameStream replay(derive_game_seed(5, n, 3));
        const std::uint64_t m = std::uint64_t{1} << (n - 1);
        for (std::uint64_t k = 0; k < static_cast<std::uint64_t>(n) * (m - 1); ++k)
            replay.next();
        EXPECT_EQ(replay.next(), stream.next()) << "n=" << n;
    }
}

TEST(RandomMatrix, TwoPlayerRowsAreBalanced)
{
    std::uint64_t identity = 0;
    constexpr std::uint64_t draws = 100'000;
    for (std::uint64_t g = 0; g < draws; ++g) {
        auto stream = derive_game_stream(1, 2, g);
        identity += random_matrix(2, stream).rank(1, 1) == 1;
    }
    EXPECT_NEAR(static_cast<double>(identity) / draws, 0.5, 0.01);
}

TEST(RandomMatrix, ThreePlayerRowsAreUniform)
{
    // 24 permutations per row; each bin should sit within 3 SD of N/24 for
    // almost every bin, and a chi-square over all bins stays moderate.
    constexpr std::uint64_t games = 48'000;
    std::map<std::vector<Rank>, std::uint64_t> bins;
    for (std::uint64_t g = 0; g < games; ++g) {
        auto stream = derive_game_stream(123, 3, g);
        const auto game = random_matrix(3, stream);
        const auto row = game.row(2);
        bins[std::vector<Rank>(row.begin(), row.end())]++;
    }
    ASSERT_EQ(bins.size(), 24u);
    const double expected = games / 24.0;
    const double sd = std::sqrt(games * (1.0 / 24) * (23.0 / 24));
    double chi2 = 0;
    for (const auto& [row, count] : bins) {
        EXPECT_LT(std::abs(count - expected), 4 * sd);
        chi2 += (count - expected) * (count - expected) / expected;
    }
    // 23 degrees of freedom; 0.999 quantile is about 49.7.
    EXPECT_LT(chi2, 49.7);
}

TEST(RandomMatrix, IsDeterministic)
{
    for (int n = 2; n <= 8; ++n) {
        auto a = derive_game_stream(2026, n, 17);
        auto b = derive_game_stream(2026, n, 17);
        EXPECT_EQ(random_matrix(n, a), random_matrix(n, b));
    }
}

TEST(DeriveGameSeed, SeparatesIndicesSizesAndSeeds)
{
    std::set<std::uint64_t> seeds;
    for (std::uint64_t master : {0ull, 1ull, 42ull})
        for (int n = 2; n <= 16; ++n)
            for (std::uint64_t g = 0; g < 1000; ++g)
                seeds.insert(derive_game_seed(master, n, g));
    EXPECT_EQ(seeds.size(), 3u * 15u * 1000u);

    std::set<std::string> games;
    for (std::uint64_t g = 0; g < 200; ++g) {
        auto stream = derive_game_stream(9, 5, g);
        games.insert(to_compact(random_matrix(5, stream)));
    }
    EXPECT_EQ(games.size(), 200u);
}

TEST(DeriveGameSeed, MatchesDocumentedFormula)
{
    const std::uint64_t master = 77, index = 12345;
    const int n = 6;
    const std::uint64_t expected =
        mix64(mix64(master) ^ mix64(((std::uint64_t{6} << 48) | index) + kGoldenGamma));
    EXPECT_EQ(derive_game_seed(master, n, index), expected);
    EXPECT_THROW(derive_game_seed(master, n, kMaxGameIndex + 1), Error);
}

TEST(ParseSeed, AcceptsDecimalAndHex)
{
    EXPECT_EQ(parse_seed("0"), 0u);
    EXPECT_EQ(parse_seed("18446744073709551615"), ~std::uint64_t{0});
    EXPECT_EQ(parse_seed("0x2A"), 42u);
    EXPECT_THROW(parse_seed(""), Error);
    EXPECT_THROW(parse_seed("12a"), Error);
    EXPECT_THROW(parse_seed("-1"), Error);
    EXPECT_THROW(parse_seed("18446744073709551616"), Error);
}

TEST(AllGames, CountsMatchGameCount)
{
    for (int n = 1; n <= 3; ++n) {
        AllGames all(n);
        std::uint64_t seen = 0;
        std::set<std::string> distinct;
        while (auto game = all.next()) {
            ASSERT_TRUE(validate_matrix(*game));
            if (n < 3)
                distinct.insert(to_compact(*game));
            ++seen;
        }
        EXPECT_EQ(BigInt(seen), count_games(n));
        EXPECT_EQ(seen, census_size(n));
        if (n < 3)
            EXPECT_EQ(distinct.size(), seen);
    }
}

TEST(AllGames, AgreesWithCensusUnranking)
{
    AllGames all(3);
    std::uint64_t index = 0;
    while (auto game = all.next()) {
        ASSERT_EQ(*game, census_game(3, index)) << index;
        ++index;
    }
    EXPECT_THROW(census_game(3, census_size(3)), Error);
}

TEST(AllGames, RefusesLargeSizes)
{
    try {
        AllGames all(4);
        FAIL() << "expected infeasible";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::infeasible);
    }
}

}  // namespace
}  // namespace hedcore
