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
#include <streamsubiso/synopsis.hpp>

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace streamsubiso {

/// Everything an incoming edge is tested against for one query edge.
/// Predicate lists are kept sorted by (attribute, comparison, value).
struct EdgeSignature {
    std::string edge_type;
    std::string src_label;
    std::string dst_label;
    std::vector<AttributePredicate> src_predicates;
    std::vector<AttributePredicate> edge_predicates;
    std::vector<AttributePredicate> dst_predicates;

    auto operator<=>(const EdgeSignature&) const = default;
    bool operator==(const EdgeSignature&) const = default;

    /// Canonical text form; equal signatures have equal keys.
    [[nodiscard]] std::string key() const;
};

EdgeSignature signature_of(const QueryGraph& query, std::size_t edge);

struct EdgeContext {
    const std::string& type;
    const Vertex& src;
    const Vertex& dst;
    const Attributes& attributes;
};

bool signature_matches(const EdgeSignature& sig, const EdgeContext& edge);

struct DispatchEntry {
    QueryId query{};
    std::size_t edge = 0;

    auto operator<=>(const DispatchEntry&) const = default;
    bool operator==(const DispatchEntry&) const = default;
};

struct DispatchBucket {
    EdgeSignature signature;
    std::vector<DispatchEntry> entries;
};

/**
 * Groups the edges of all registered queries by signature so an update costs
 * one predicate evaluation per distinct signature of its edge type, then fans
 * out to every (query, edge) in the bucket. Query ids are positions in the
 * span the index was built from.
 */
class DispatchIndex {
  public:
    DispatchIndex() = default;
    explicit DispatchIndex(std::span<const QueryGraph> queries);

    /// Appends matching entries in (query, edge) order; returns the number of signatures evaluated.
    std::size_t match(const EdgeContext& edge, std::vector<DispatchEntry>& out) const;

    [[nodiscard]] const std::vector<DispatchBucket>& buckets() const noexcept { return buckets_; }

  private:
    std::vector<DispatchBucket> buckets_;
    std::unordered_map<std::string, std::vector<std::size_t>> by_type_;
};

DispatchIndex build_dispatch_index(std::span<const QueryGraph> queries);

/// A gate must be a connected 1- or 2-edge subpattern closed under arrival-order predecessors.
bool is_valid_gate(const QueryGraph& query, const std::set<std::size_t>& edges);

struct GateCandidate {
    std::vector<std::size_t> edges;
    /// Canonical key of the subpattern's shape and signatures.
    std::string signature;
    /// Number of queries containing the same subpattern.
    std::size_t sharing = 1;
    /// Observed predicate hits (minimum over the gate's edges); empty without a synopsis.
    std::optional<std::uint64_t> observed_matches;
};

/**
 * Valid 1- and 2-edge gate candidates per query name, ranked by sharing count
 * (descending), observed matches (ascending), then signature key.
 */
std::map<std::string, std::vector<GateCandidate>> find_shared_gates(std::span<const QueryGraph> queries,
                                                                    const StreamSynopsis* synopsis = nullptr);

}// namespace streamsubiso
