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

#include <compare>
#include <cstdint>
#include <iterator>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hedcore/game_model.hpp"

namespace hedcore {

using BlockLabel = std::uint8_t;

/// True iff labels is a restricted-growth string: c_1 = 1 and each label is
/// at most one more than the running maximum.
bool is_canonical(std::span<const BlockLabel> labels) noexcept;

/// A coalition structure written as a restricted-growth string, e.g. 12123 for
/// {1,3} {2,4} {5}.
class PartitionCode {
public:
    /// Throws ErrorKind::invalid_partition for non-canonical or oversized input.
    explicit PartitionCode(std::vector<BlockLabel> labels);
    PartitionCode(std::initializer_list<BlockLabel> labels);

    /// Parses the display form: digits when n <= 9, comma separated otherwise
    /// (commas are accepted for any n).
    static PartitionCode parse(std::string_view text);

    std::span<const BlockLabel> labels() const noexcept { return labels_; }
    int players() const noexcept { return static_cast<int>(labels_.size()); }
    int blocks() const noexcept;

    /// "12123" for n <= 9, "1,2,1,2,3,...,10" otherwise.
    std::string to_string() const;

    auto operator<=>(const PartitionCode&) const = default;

private:
    std::vector<BlockLabel> labels_;
};

std::string display_code(std::span<const BlockLabel> labels);

/// B_n via the Bell triangle.
BigInt bell_number(int n);

/// Streams every restricted-growth string of length n in ascending
/// lexicographic order, from 11...1 (grand coalition) to 12...n (all
/// singletons). Holds one code at a time.
class PartitionEnumerator {
public:
    explicit PartitionEnumerator(int n);

    std::span<const BlockLabel> current() const noexcept { return labels_; }
    PartitionCode code() const { return PartitionCode(labels_); }

    /// Steps to the next code; false once the last code has been passed.
    bool advance() noexcept;

    int players() const noexcept { return static_cast<int>(labels_.size()); }

private:
    std::vector<BlockLabel> labels_;
    std::vector<BlockLabel> prefix_max_;  // max of labels_[0..k]
};

/// Input range over PartitionEnumerator, for range-based for loops.
class PartitionRange {
public:
    explicit PartitionRange(int n) : n_(n) {}

    class iterator {
    public:
        using value_type = std::span<const BlockLabel>;
        using difference_type = std::ptrdiff_t;

        iterator() = default;
        explicit iterator(int n) : enumerator_(std::make_shared<PartitionEnumerator>(n)) {}

        value_type operator*() const noexcept { return enumerator_->current(); }
        iterator& operator++()
        {
            if (!enumerator_->advance())
                enumerator_.reset();
            return *this;
        }
        void operator++(int) { ++*this; }
        bool operator==(std::default_sentinel_t) const noexcept { return !enumerator_; }

    private:
        std::shared_ptr<PartitionEnumerator> enumerator_;
    };

    iterator begin() const { return iterator(n_); }
    std::default_sentinel_t end() const noexcept { return {}; }

private:
    int n_;
};

inline PartitionRange partitions(int n) { return PartitionRange(n); }

/// Fills block_of[i-1] with the mask of the block containing player i. Assumes
/// labels is canonical.
void block_masks_by_player(std::span<const BlockLabel> labels, std::span<std::uint32_t> block_of);

/// One mask per block, ordered by block label.
std::vector<CoalitionMask> code_to_coalitions(int n, const PartitionCode& code);

/// S_pi(i): the block containing player i.
CoalitionMask coalition_of(int n, const PartitionCode& code, PlayerId i);

}  // namespace hedcore
