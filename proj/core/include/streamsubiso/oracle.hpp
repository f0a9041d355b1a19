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
#include <streamsubiso/match.hpp>
#include <streamsubiso/query.hpp>

#include <vector>

namespace streamsubiso {

/**
 * Static subgraph isomorphism over a snapshot by plain backtracking: query
 * vertices are bound in descending degree order (ties by variable name) to
 * label- and predicate-compatible data vertices, then every query edge is
 * bound to a distinct data edge. Output is sorted by the vertex ids taken in
 * variable-name order.
 */
std::vector<Embedding> find_all_matches(const GraphSnapshot& graph, const QueryGraph& query);

/// find_all_matches filtered by arrival order, window and a time-unit cluster_gap.
/// Throws ClusterGapUnitUnsupported for gaps counted in updates.
std::vector<Embedding> find_all_matches_temporal(const GraphSnapshot& graph, const QueryGraph& query);

/// Same filter, reading update-unit gaps from the sequence numbers recorded in the snapshot.
std::vector<Embedding> find_all_matches_temporal_sequenced(const GraphSnapshot& graph, const QueryGraph& query);

/**
 * Temporal predicate over one complete embedding. `sequences`, parallel to
 * embedding.edges, is required when the cluster gap is counted in updates.
 * With `enforce_order` false the arrival order is ignored.
 */
bool satisfies_temporal(const QueryGraph& query, const Embedding& embedding, const std::vector<Seq>* sequences,
                        bool enforce_order = true);

}// namespace streamsubiso
