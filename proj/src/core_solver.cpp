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

#include "hedcore/core_solver.hpp"

#include <algorithm>
#include <bit>
#include <set>

#include "hedcore/error.hpp"

namespace hedcore {

namespace {

// Rank of every (coalition, bit position) pair, laid out coalition-major so a
// blocking test walks one contiguous run. Entries for positions outside the
// coalition are unused.
class DenseRanks {
public:
    explicit DenseRanks(const PreferenceMatrix& game)
        : n_(game.players()), table_((std::size_t{1} << n_) * static_cast<std::size_t>(n_), 0)
    {
        const auto columns = game.columns();
        const auto data = game.data();
        for (int pos = 0; pos < n_; ++pos) {
            const std::size_t row = static_cast<std::size_t>(n_ - 1 - pos) * columns;
            const std::uint32_t low_mask = (1u << pos) - 1u;
            for (std::uint32_t rest = 0; rest < columns; ++rest) {
                const std::uint32_t s = ((rest >> pos) << (pos + 1)) | (1u << pos) | (rest & low_mask);
                table_[static_cast<std::size_t>(s) * n_ + pos] = data[row + rest];
            }
        }
    }

    const Rank* of(std::uint32_t s) const noexcept
    {
        return table_.data() + static_cast<std::size_t>(s) * n_;
    }

private:
    int n_;
    std::vector<Rank> table_;
};

std::vector<std::uint32_t> coalition_test_order(int n)
{
    std::vector<std::uint32_t> order;
    order.reserve((std::size_t{1} << n) - 1);
    for (int pos = 0; pos < n; ++pos)
        order.push_back(1u << pos);
    for (std::uint32_t s = 1; s <= grand_coalition_bits(n); ++s)
        if (!std::has_single_bit(s))
            order.push_back(s);
    return order;
}

}  // namespace

bool is_blocked_by(const PreferenceMatrix& game, const PartitionCode& p, CoalitionMask s)
{
    const int n = game.players();
    if (s.empty())
        return false;
    for (PlayerId i : decode_coalition(n, s))
        if (!prefers(game, i, s, coalition_of(n, p, i)))
            return false;
    return true;
}

CoreResult find_core(const PreferenceMatrix& game, SolveMode mode)
{
    require_valid(game);
    const int n = game.players();
    const DenseRanks ranks(game);
    const auto order = coalition_test_order(n);

    CoreResult result;
    std::uint32_t by_label[kMaxPlayers + 1];
    Rank current[kMaxPlayers];

    PartitionEnumerator partitions(n);
    do {
        const auto labels = partitions.current();
        std::fill(std::begin(by_label), std::end(by_label), 0u);
        for (int k = 0; k < n; ++k)
            by_label[labels[k]] |= 1u << (n - 1 - k);
        for (int k = 0; k < n; ++k) {
            const int pos = n - 1 - k;
            current[pos] = ranks.of(by_label[labels[k]])[pos];
        }
        ++result.partitions_checked;

        bool blocked = false;
        for (std::uint32_t s : order) {
            ++result.blocks_tested;
            const Rank* r = ranks.of(s);
            std::uint32_t members = s;
            bool all_improve = true;
            while (members != 0) {
                const int pos = std::countr_zero(members);
                if (r[pos] <= current[pos]) {
                    all_improve = false;
                    break;
                }
                members &= members - 1;
            }
            if (all_improve) {
                blocked = true;
                break;
            }
        }
        if (!blocked) {
            result.core.push_back(partitions.code());
            if (mode == SolveMode::first_only)
                break;
        }
    } while (partitions.advance());

    result.core_size = result.core.size();
    return result;
}

bool verify_core(const PreferenceMatrix& game, const CoreResult& result)
{
    const int n = game.players();
    if (result.core_size != result.core.size())
        return false;
    std::set<PartitionCode> distinct(result.core.begin(), result.core.end());
    if (distinct.size() != result.core.size())
        return false;
    for (const auto& code : result.core) {
        if (code.players() != n)
            return false;
        for (std::uint32_t s = grand_coalition_bits(n); s >= 1; --s)
            if (is_blocked_by(game, code, CoalitionMask(s)))
                return false;
    }
    return true;
}

nlohmann::json to_json(const CoreResult& result)
{
    nlohmann::json core = nlohmann::json::array();
    for (const auto& code : result.core)
        core.push_back(code.to_string());
    return {{"core_size", result.core_size},
            {"core", std::move(core)},
            {"partitions_checked", result.partitions_checked},
            {"blocks_tested", result.blocks_tested}};
}

}  // namespace hedcore
