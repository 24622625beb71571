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

#include "hedcore/error.hpp"

namespace hedcore {

std::string_view to_string(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::invalid_player: return "invalid-player";
    case ErrorKind::out_of_range: return "out-of-range";
    case ErrorKind::not_a_member: return "not-a-member";
    case ErrorKind::index_error: return "index";
    case ErrorKind::invalid_partition: return "invalid-partition";
    case ErrorKind::validation: return "validation";
    case ErrorKind::infeasible: return "infeasible-enumeration";
    case ErrorKind::insufficient_data: return "insufficient-data";
    case ErrorKind::degenerate_data: return "degenerate-data";
    case ErrorKind::no_fit: return "no-fit";
    case ErrorKind::non_convergence: return "non-convergence";
    case ErrorKind::comparison: return "comparison";
    case ErrorKind::checkpoint: return "checkpoint";
    case ErrorKind::io: return "io";
    case ErrorKind::usage: return "usage";
    }
    return "unknown";
}

}  // namespace hedcore
