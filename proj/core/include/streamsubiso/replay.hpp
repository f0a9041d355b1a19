/*
    Licensed under the Apache License, Version 2.0 (the "License");
    you may not use this file except in compliance with the License.
    You may obtain a copy of the License at

        https://www.apache.org/licenses/LICENSE-2.0

    Unless required by applicable law or agreed to in writing, software
    distributed under the License is distributed on an "AS IS" BASIS,
    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
    See the License for the specific language governing permissions and
    limitations under the License.
*/

#pragma once

#include <streamsubiso/graph_store.hpp>

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

namespace streamsubiso {

enum class GateMode { Off, Auto };
enum class AdaptSetting { Off, Advisory, Auto };

struct ReplayOptions {
    std::string queries_file;
    std::string stream_file;
    /// Batch boundary every N stream records.
    std::optional<std::uint64_t> batch_size;
    /// Batch boundary whenever floor(ts / T) advances.
    std::optional<Timestamp> epoch;
    bool ordered_pruning = true;
    GateMode gates = GateMode::Off;
    AdaptSetting adapt = AdaptSetting::Off;
    double adapt_quantile = 0.95;
    bool dedup = true;
    Timestamp reorder_slack = 0;
    bool oracle_check = false;
    std::optional<std::string> stats_out;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitParse = 1;
inline constexpr int kExitStream = 2;
inline constexpr int kExitOracle = 3;

/**
 * Replays the stream through an engine holding every query of the query file,
 * writing one result record per emission to `out` as soon as it is detected.
 * At each batch boundary (and once at the end) partials are expired, the
 * adaptive layer runs and a stats row is written. Diagnostics go to `err`.
 * Returns one of the kExit codes.
 */
int run_replay(const ReplayOptions& options, std::ostream& out, std::ostream& err);

/// Prints the matches present in the graph as of `as_of` with emit sequence 0.
int run_backfill(const std::string& queries_file, const std::string& stream_file, Timestamp as_of, std::ostream& out,
                 std::ostream& err);

}// namespace streamsubiso
