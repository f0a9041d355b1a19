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

#include <streamsubiso/engine.hpp>

#include <cstdint>
#include <optional>

namespace streamsubiso {

enum class AdaptMode { Advisory, Auto };

struct GapRecommendation {
    /// The query's cluster_gap before the call; empty when unset.
    std::optional<ClusterGap> old_gap;
    /// Recommended gap, in time units.
    std::int64_t new_gap = 0;
    bool applied = false;
};

/// Nearest-rank quantile of the gaps pooled over the query's edge predicates. Throws InsufficientData.
std::int64_t recommend_cluster_gap(const Engine& engine, QueryId query, double quantile);

/**
 * Advisory mode only reports. Auto mode replaces the query's cluster_gap with
 * the recommendation in time units; partials already expired stay expired.
 * Throws InsufficientData, leaving the gap untouched.
 */
GapRecommendation apply_recommendation(Engine& engine, QueryId query, double quantile, AdaptMode mode);

}// namespace streamsubiso
