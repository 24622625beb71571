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

#include "hedcore/partition_space.hpp"

#include <algorithm>
#include <charconv>

#include <fmt/format.h>

#include "hedcore/error.hpp"

namespace hedcore {

bool is_canonical(std::span<const BlockLabel> labels) noexcept
{
    if (labels.empty() || labels.size() > static_cast<std::size_t>(kMaxPlayers) || labels[0] != 1)
        return false;
    BlockLabel max_label = 1;
    for (std::size_t k = 1; k < labels.size(); ++k) {
        if (labels[k] < 1 || labels[k] > max_label + 1)
            return false;
        max_label = std::max(max_label, labels[k]);
    }
    return true;
}

PartitionCode::PartitionCode(std::vector<BlockLabel> labels) : labels_(std::move(labels))
{
    if (!is_canonical(labels_))
        throw Error(ErrorKind::invalid_partition,
                    fmt::format("'{}' is not a canonical partition code",
                                fmt::join(labels_, ",")));
}

PartitionCode::PartitionCode(std::initializer_list<BlockLabel> labels)
    : PartitionCode(std::vector<BlockLabel>(labels))
{
}

PartitionCode PartitionCode::parse(std::string_view text)
{
    std::vector<BlockLabel> labels;
    auto bad = [&] {
        return Error(ErrorKind::invalid_partition, fmt::format("cannot parse partition '{}'", text));
    };
    if (text.find(',') != std::string_view::npos) {
        std::size_t start = 0;
        for (;;) {
            auto pos = text.find(',', start);
            auto field = text.substr(start, pos - start);
            unsigned value = 0;
            auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
            if (ec != std::errc{} || ptr != field.data() + field.size() || value > 255)
                throw bad();
            labels.push_back(static_cast<BlockLabel>(value));
            if (pos == std::string_view::npos)
                break;
            start = pos + 1;
        }
    } else {
        for (char c : text) {
            if (c < '1' || c > '9')
                throw bad();
            labels.push_back(static_cast<BlockLabel>(c - '0'));
        }
    }
    return PartitionCode(std::move(labels));
}

int PartitionCode::blocks() const noexcept
{
    return *std::max_element(labels_.begin(), labels_.end());
}

std::string display_code(std::span<const BlockLabel> labels)
{
    if (labels.size() <= 9) {
        std::string out;
        for (auto l : labels)
            out += static_cast<char>('0' + l);
        return out;
    }
    return fmt::format("{}", fmt::join(labels, ","));
}

std::string PartitionCode::to_string() const { return display_code(labels_); }

BigInt bell_number(int n)
{
    check_player_count(n);
    // Row r of the triangle starts with the last entry of row r-1; B_r is the
    // first entry of row r.
    std::vector<BigInt> row{BigInt(1)};
    for (int r = 1; r <= n; ++r) {
        std::vector<BigInt> next;
        next.reserve(row.size() + 1);
        next.push_back(row.back());
        for (const auto& v : row)
            next.push_back(next.back() + v);
        row = std::move(next);
    }
    return row.front();
}

PartitionEnumerator::PartitionEnumerator(int n)
{
    check_player_count(n);
    labels_.assign(static_cast<std::size_t>(n), 1);
    prefix_max_.assign(static_cast<std::size_t>(n), 1);
}

bool PartitionEnumerator::advance() noexcept
{
    const std::size_t n = labels_.size();
    // Rightmost position that can still grow; position 0 is fixed at 1.
    for (std::size_t k = n; k-- > 1;) {
        if (labels_[k] <= prefix_max_[k - 1]) {
            ++labels_[k];
            prefix_max_[k] = std::max(prefix_max_[k - 1], labels_[k]);
            for (std::size_t t = k + 1; t < n; ++t) {
                labels_[t] = 1;
                prefix_max_[t] = prefix_max_[k];
            }
            return true;
        }
    }
    return false;
}

void block_masks_by_player(std::span<const BlockLabel> labels, std::span<std::uint32_t> block_of)
{
    const int n = static_cast<int>(labels.size());
    std::uint32_t by_label[kMaxPlayers + 1] = {};
    for (int i = 1; i <= n; ++i)
        by_label[labels[i - 1]] |= player_bit(n, i);
    for (int i = 1; i <= n; ++i)
        block_of[i - 1] = by_label[labels[i - 1]];
}

std::vector<CoalitionMask> code_to_coalitions(int n, const PartitionCode& code)
{
    check_player_count(n);
    if (code.players() != n)
        throw Error(ErrorKind::invalid_partition,
                    fmt::format("partition '{}' does not have {} players", code.to_string(), n));
    std::vector<CoalitionMask> blocks(static_cast<std::size_t>(code.blocks()));
    std::vector<std::uint32_t> bits(blocks.size(), 0);
    for (PlayerId i = 1; i <= n; ++i)
        bits[code.labels()[i - 1] - 1u] |= player_bit(n, i);
    std::transform(bits.begin(), bits.end(), blocks.begin(),
                   [](std::uint32_t b) { return CoalitionMask(b); });
    return blocks;
}

CoalitionMask coalition_of(int n, const PartitionCode& code, PlayerId i)
{
    check_player_count(n);
    check_player(n, i);
    if (code.players() != n)
        throw Error(ErrorKind::invalid_partition,
                    fmt::format("partition '{}' does not have {} players", code.to_string(), n));
    const auto label = code.labels()[i - 1];
    std::uint32_t bits = 0;
    for (PlayerId k = 1; k <= n; ++k)
        if (code.labels()[k - 1] == label)
            bits |= player_bit(n, k);
    return CoalitionMask(bits);
}

}  // namespace hedcore
