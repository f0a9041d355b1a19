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

#include <streamsubiso/dispatch.hpp>
#include <streamsubiso/graph_store.hpp>
#include <streamsubiso/match.hpp>
#include <streamsubiso/query.hpp>
#include <streamsubiso/synopsis.hpp>

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace streamsubiso {

struct EngineConfig {
    /// Spawn only at order-minimal edges and extend only in arrival order.
    bool ordered_pruning = true;
    /// Emit each complete embedding at most once per engine lifetime.
    bool dedup = true;
    /// Updates may arrive up to this many time units behind the highest timestamp seen.
    Timestamp reorder_slack = 0;
    /// Gate edges per query name; see Engine::set_spawn_gate.
    std::map<std::string, std::set<std::size_t>> spawn_gates;
    SynopsisConfig synopsis;
};

/// Observable state of one partial match. Optional slots are unmatched.
struct PartialMatchView {
    std::uint64_t id = 0;
    QueryId query{};
    std::vector<std::optional<std::string>> vertices;
    std::vector<std::optional<EdgeBinding>> edges;
    Timestamp first_ts = 0;
    Timestamp last_ts = 0;
    Seq last_update_seq = 0;

    [[nodiscard]] std::size_t matched_count() const;
};

struct EngineStats {
    Seq updates = 0;
    std::vector<std::size_t> live_per_query;
    std::vector<std::uint64_t> spawned_per_query;
    std::vector<std::uint64_t> emitted_per_query;
    std::size_t live_total = 0;
    std::size_t peak_live = 0;
    std::uint64_t emitted = 0;
    std::uint64_t expired = 0;
    std::uint64_t discarded = 0;
    std::uint64_t predicate_evals = 0;
    /// Partial matches inspected as augmentation or deletion candidates.
    std::uint64_t candidate_checks = 0;
    /// Data edges inspected while re-deriving partials for completed gates.
    std::uint64_t gate_scans = 0;
};

/**
 * Incremental continuous subgraph matcher.
 *
 * Every inserted edge is applied to the owned GraphStore, then:
 *  1. partials violating cluster_gap or window at the update's time/sequence are expired,
 *  2. the dispatch index yields the (query, edge) pairs the update satisfies,
 *  3. each compatible stored partial p is copied into p + edge (p is kept),
 *  4. singletons are spawned at eligible edges,
 *  5. complete copies are emitted instead of stored.
 * Deleting an edge discards every partial that uses it; emitted matches stand.
 *
 * Updates are processed serially. stats() may be called from other threads.
 */
class Engine {
  public:
    explicit Engine(EngineConfig config = {});
    ~Engine();
    Engine(Engine&&) noexcept;
    Engine& operator=(Engine&&) noexcept;
    Engine(const Engine&) = delete;
    Engine& operator=(const Engine&) = delete;

    /// Throws InvalidQuery or DuplicateQueryName. The query sees only updates processed after this call.
    QueryId register_query(QueryGraph query);

    /**
     * Submits one update. With a reorder slack the update may be held back;
     * the result lists the matches completed by whatever was released, sorted
     * by (query, embedding). `origin` is echoed in any Error raised for this update.
     */
    std::vector<MatchResult> process_update(const StreamUpdate& update, std::optional<std::uint64_t> origin = {});

    /// Releases every update still held in the reorder buffer.
    std::vector<MatchResult> flush();

    /// Removes partials with now_ts - last_ts > gap (time), now_seq - last_update_seq > gap (updates)
    /// or now_ts - first_ts > window. Returns the number removed.
    std::size_t expire(Timestamp now_ts, Seq now_seq);

    [[nodiscard]] EngineStats stats() const;

    [[nodiscard]] std::size_t query_count() const;
    [[nodiscard]] const QueryGraph& query(QueryId id) const;
    [[nodiscard]] std::optional<QueryId> find_query(const std::string& name) const;
    [[nodiscard]] std::set<std::size_t> spawn_set(QueryId id) const;
    [[nodiscard]] std::vector<PartialMatchView> partials(QueryId id) const;

    /// Replaces a query's cluster gap; affects only later expiry decisions.
    void set_cluster_gap(QueryId id, std::optional<ClusterGap> gap);

    /**
     * Restricts singleton spawns of a query to the gate edges (empty set clears
     * the gate). Only partials consisting of gate edges, or containing a
     * complete gate instance, are stored; when an instance completes, the
     * partials the ungated engine would hold around it are re-derived from the
     * graph store, so emissions are unchanged. Throws InvalidGate.
     */
    void set_spawn_gate(QueryId id, const std::set<std::size_t>& edges);
    [[nodiscard]] std::set<std::size_t> spawn_gate(QueryId id) const;

    [[nodiscard]] const GraphStore& graph() const;
    [[nodiscard]] const StreamSynopsis& synopsis() const;
    [[nodiscard]] const DispatchIndex& dispatch_index() const;
    [[nodiscard]] const EngineConfig& config() const;

    /// Highest timestamp submitted so far minus the reorder slack.
    [[nodiscard]] Timestamp watermark() const;
    /// Timestamp and sequence of the last processed update.
    [[nodiscard]] Timestamp now() const;
    [[nodiscard]] Seq sequence() const;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}// namespace streamsubiso
