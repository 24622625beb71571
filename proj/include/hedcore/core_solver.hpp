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
#include <vector>

#include <json.hpp>

#include "hedcore/game_model.hpp"
#include "hedcore/partition_space.hpp"

namespace hedcore {

enum class SolveMode {
    full,        ///< collect every core partition
    first_only,  ///< stop at the first core partition (non-emptiness test)
};

struct CoreResult {
    std::vector<PartitionCode> core;  ///< in enumeration order
    std::uint64_t core_size = 0;
    std::uint64_t partitions_checked = 0;
    std::uint64_t blocks_tested = 0;
};

/// True iff every member of S strictly prefers S to its block in p. The empty
/// coalition never blocks.
bool is_blocked_by(const PreferenceMatrix& game, const PartitionCode& p, CoalitionMask s);

/// Brute-force core: every partition against every nonempty coalition.
///
/// Partitions are visited in PartitionEnumerator order. For each partition the
/// n singleton coalitions are tested first, then the remaining masks in
/// ascending order; the scan stops at the first blocking coalition. The game
/// must pass validate_matrix (ErrorKind::validation otherwise).
CoreResult find_core(const PreferenceMatrix& game, SolveMode mode = SolveMode::full);

/// Re-checks each reported core partition against all 2^n - 1 coalitions via
/// prefers(). Also rejects inconsistent counts and duplicate codes.
bool verify_core(const PreferenceMatrix& game, const CoreResult& result);

nlohmann::json to_json(const CoreResult& result);

}  // namespace hedcore
