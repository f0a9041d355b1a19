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
#include <streamsubiso/query.hpp>

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace streamsubiso {

/// Seed from STREAMSUBISO_SEED when set to an integer, else `fallback`.
std::uint64_t seed_from_env(std::uint64_t fallback);

struct StreamGenConfig {
    std::size_t vertices = 50;
    std::size_t updates = 200;
    std::vector<std::string> labels{"A", "B", "C", "D"};
    std::vector<std::string> edge_types{"t"};
    /// Timestamps advance by a uniform step in [0, max_step].
    Timestamp max_step = 2;
    /// Probability that an update deletes a random live edge instead of inserting.
    double delete_probability = 0.0;
    /// Inserted edges carry integer attribute "w" uniform in [0, weight_range) when positive.
    std::int64_t weight_range = 0;
    bool allow_self_loops = false;
};

/// Random insert/delete stream over a fixed vertex population; vertex labels never conflict.
std::vector<StreamUpdate> generate_stream(const StreamGenConfig& config, std::mt19937_64& rng);

struct QueryGenConfig {
    std::size_t min_edges = 1;
    std::size_t max_edges = 5;
    std::vector<std::string> labels{"A", "B", "C", "D"};
    std::vector<std::string> edge_types{"t"};
    /// Probability of ordering each pair of edges (consistent with a random permutation).
    double order_probability = 0.3;
    double window_probability = 0.3;
    double gap_probability = 0.3;
    /// Of the cluster gaps drawn, the fraction counted in updates.
    double update_gap_probability = 0.0;
    Timestamp max_window = 60;
    /// Predicate "w < k" on an edge with this probability (k uniform in [1, weight_range]).
    double predicate_probability = 0.0;
    std::int64_t weight_range = 10;
};

/// Random weakly connected query that passes validate().
QueryGraph generate_query(const QueryGenConfig& config, const std::string& name, std::mt19937_64& rng);

}// namespace streamsubiso
