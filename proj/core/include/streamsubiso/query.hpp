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

#include <streamsubiso/types.hpp>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace streamsubiso {

/// Upper bound on query vertices and edges; partial matches track them in 64-bit masks.
inline constexpr std::size_t kMaxQueryElements = 64;

enum class Comparison { Eq, Ne, Lt, Le, Gt, Ge };

std::string_view to_string(Comparison cmp);

struct AttributePredicate {
    std::string attribute;
    Comparison cmp = Comparison::Eq;
    Scalar value;

    auto operator<=>(const AttributePredicate&) const = default;
    bool operator==(const AttributePredicate&) const = default;
};

/// A missing attribute fails every comparison. Ordering comparisons need numeric operands.
bool evaluate(const AttributePredicate& pred, const Attributes& attrs);
bool evaluate_all(const std::vector<AttributePredicate>& preds, const Attributes& attrs);

struct QueryVertex {
    std::string var;
    std::string label;
    std::vector<AttributePredicate> predicates;

    bool operator==(const QueryVertex&) const = default;
};

/// Query edges are identified by their index (eid) in QueryGraph::edges.
struct QueryEdge {
    std::string name;
    std::string src_var;
    std::string dst_var;
    std::string edge_type;
    std::vector<AttributePredicate> predicates;

    bool operator==(const QueryEdge&) const = default;
};

enum class GapUnit { Time, Updates };

struct ClusterGap {
    std::int64_t gap = 0;
    GapUnit unit = GapUnit::Time;

    bool operator==(const ClusterGap&) const = default;
};

/**
 * Temporal constraints of a query.
 *
 * A pair (a, b) in arrival_order requires the data edge matched to a to carry
 * a timestamp strictly smaller than the one matched to b. cluster_gap bounds
 * the gap between consecutive additions to one match; window bounds the span
 * between a match's earliest and latest edge.
 */
struct TemporalConstraints {
    std::set<std::pair<std::size_t, std::size_t>> arrival_order;
    std::optional<ClusterGap> cluster_gap;
    std::optional<std::int64_t> window;

    bool operator==(const TemporalConstraints&) const = default;
};

struct QueryGraph {
    std::string name;
    std::vector<QueryVertex> vertices;
    std::vector<QueryEdge> edges;
    TemporalConstraints constraints;

    [[nodiscard]] std::optional<std::size_t> vertex_index(std::string_view var) const;
    [[nodiscard]] std::optional<std::size_t> edge_index(std::string_view name) const;

    bool operator==(const QueryGraph&) const = default;
};

enum class ViolationKind {
    EmptyName,
    NoEdges,
    TooLarge,
    DuplicateVariable,
    DuplicateEdgeName,
    EmptyLabel,
    EmptyEdgeType,
    NonNumericOrdering,
    UndeclaredVariable,
    SelfLoop,
    OrderIndexOutOfRange,
    CyclicOrder,
    NonPositiveGap,
    NonPositiveWindow,
    GapExceedsWindow,
    Disconnected,
};

std::string_view to_string(ViolationKind kind);

struct Violation {
    ViolationKind kind;
    std::string message;
    /// Variable or edge name the violation is about; empty for query-level problems.
    std::string subject;
};

struct ValidationReport {
    std::vector<Violation> violations;

    [[nodiscard]] bool ok() const noexcept { return violations.empty(); }
    [[nodiscard]] std::string summary() const;
};

/// Reports every violated invariant; never throws.
ValidationReport validate(const QueryGraph& query);

/// precedes[a][b] is true when a must arrive strictly before b (transitive closure of arrival_order).
std::vector<std::vector<bool>> order_closure(const QueryGraph& query);

/// Edges with no predecessor in the closed arrival order; the only sound spawn points.
std::set<std::size_t> spawn_eligible_edges(const QueryGraph& query);

}// namespace streamsubiso
