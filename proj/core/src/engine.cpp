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

#include <streamsubiso/engine.hpp>

#include <algorithm>
#include <bit>
#include <functional>
#include <mutex>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

namespace streamsubiso {

std::size_t PartialMatchView::matched_count() const {
    return static_cast<std::size_t>(std::count_if(edges.begin(), edges.end(), [](const auto& e) { return e.has_value(); }));
}

namespace {

using PartialId = std::uint64_t;

struct Slot {
    EdgeHandle edge = kNoEdge;
    Timestamp ts = 0;
    Seq seq = 0;
};

struct Partial {
    PartialId id = 0;
    std::uint64_t matched = 0;// query edge bits
    std::uint64_t mapped = 0; // query vertex bits
    std::vector<VertexHandle> vmap;
    std::vector<Slot> emap;
    Timestamp first_ts = 0;
    Timestamp last_ts = 0;
    Seq last_seq = 0;
    std::optional<Timestamp> time_deadline;
    std::optional<Seq> seq_deadline;

    [[nodiscard]] bool maps_vertex(VertexHandle v) const { return std::find(vmap.begin(), vmap.end(), v) != vmap.end(); }
};

struct QueryState {
    QueryGraph graph;
    std::vector<EdgeSignature> signatures;
    std::vector<std::pair<std::size_t, std::size_t>> ends;
    std::vector<std::vector<bool>> before;
    std::vector<std::uint64_t> pred_mask;
    std::vector<std::uint64_t> succ_mask;
    std::uint64_t spawn_mask = 0;
    std::uint64_t gate_mask = 0;
    std::uint64_t full_mask = 0;
    std::vector<std::size_t> gate_fill_order;
    Seq registered_at = 0;

    std::unordered_map<PartialId, Partial> partials;
    std::unordered_map<VertexHandle, std::vector<PartialId>> by_vertex;
    std::map<std::uint64_t, std::vector<PartialId>> by_mapped;
    std::size_t dead_index_entries = 0;

    std::uint64_t spawned = 0;
    std::uint64_t emitted = 0;

    [[nodiscard]] std::optional<std::int64_t> time_gap() const {
        const auto& g = graph.constraints.cluster_gap;
        if (g && g->unit == GapUnit::Time) return g->gap;
        return std::nullopt;
    }
    [[nodiscard]] std::optional<std::int64_t> update_gap() const {
        const auto& g = graph.constraints.cluster_gap;
        if (g && g->unit == GapUnit::Updates) return g->gap;
        return std::nullopt;
    }
};

std::uint64_t bit(std::size_t i) { return std::uint64_t{1} << i; }

Timestamp saturating_add(Timestamp a, std::int64_t b) { return a > kMaxTimestamp - b ? kMaxTimestamp : a + b; }

struct KeyHash {
    std::size_t operator()(const std::vector<std::uint32_t>& key) const noexcept {
        std::uint64_t h = 1469598103934665603ULL;
        for (auto v : key) {
            h ^= v;
            h *= 1099511628211ULL;
        }
        return static_cast<std::size_t>(h);
    }
};

}// namespace

struct Engine::Impl {
    struct Pending {
        StreamUpdate update;
        std::optional<std::uint64_t> origin;
    };

    EngineConfig config;
    GraphStore store;
    StreamSynopsis synopsis;
    DispatchIndex dispatch;
    std::vector<QueryGraph> graphs;
    std::vector<QueryState> queries;
    std::map<std::string, QueryId> names;

    std::set<std::tuple<Timestamp, std::uint32_t, PartialId>> time_deadlines;
    std::set<std::tuple<Seq, std::uint32_t, PartialId>> seq_deadlines;
    PartialId next_pid = 1;

    std::map<std::pair<Timestamp, std::uint64_t>, Pending> pending;
    std::uint64_t arrivals = 0;
    std::optional<Timestamp> watermark;
    Timestamp now_ts = 0;
    Seq now_seq = 0;

    std::unordered_set<std::vector<std::uint32_t>, KeyHash> emitted_keys;

    std::size_t live_total = 0;
    std::size_t peak_live = 0;
    std::uint64_t emitted = 0;
    std::uint64_t expired = 0;
    std::uint64_t discarded = 0;
    std::uint64_t predicate_evals = 0;
    std::uint64_t candidate_checks = 0;
    std::uint64_t gate_scans = 0;

    mutable std::mutex stats_mutex;
    EngineStats published;

    std::vector<DispatchEntry> hits;

    explicit Impl(EngineConfig cfg) : config(std::move(cfg)), synopsis(config.synopsis) {
        if (config.reorder_slack < 0) {
            throw std::invalid_argument("reorder_slack must be non-negative");
        }
        publish();
    }

    // ---- bookkeeping -------------------------------------------------------

    void publish() {
        EngineStats s;
        s.updates = store.update_count();
        for (const auto& q : queries) {
            s.live_per_query.push_back(q.partials.size());
            s.spawned_per_query.push_back(q.spawned);
            s.emitted_per_query.push_back(q.emitted);
        }
        s.live_total = live_total;
        s.peak_live = peak_live;
        s.emitted = emitted;
        s.expired = expired;
        s.discarded = discarded;
        s.predicate_evals = predicate_evals;
        s.candidate_checks = candidate_checks;
        s.gate_scans = gate_scans;
        std::lock_guard lock(stats_mutex);
        published = std::move(s);
    }

    void set_deadlines(std::uint32_t qi, Partial& p) {
        const QueryState& qs = queries[qi];
        std::optional<Timestamp> deadline;
        if (auto g = qs.time_gap()) deadline = saturating_add(p.last_ts, *g);
        if (auto w = qs.graph.constraints.window) {
            Timestamp d = saturating_add(p.first_ts, *w);
            deadline = deadline ? std::min(*deadline, d) : d;
        }
        p.time_deadline = deadline;
        if (deadline) time_deadlines.emplace(*deadline, qi, p.id);
        if (auto g = qs.update_gap()) {
            p.seq_deadline = p.last_seq + static_cast<Seq>(*g);
            seq_deadlines.emplace(*p.seq_deadline, qi, p.id);
        } else {
            p.seq_deadline.reset();
        }
    }

    void clear_deadlines(std::uint32_t qi, const Partial& p) {
        if (p.time_deadline) time_deadlines.erase({*p.time_deadline, qi, p.id});
        if (p.seq_deadline) seq_deadlines.erase({*p.seq_deadline, qi, p.id});
    }

    void insert_partial(std::uint32_t qi, Partial p) {
        QueryState& qs = queries[qi];
        p.id = next_pid++;
        for (VertexHandle v : p.vmap) {
            if (v != kNoVertex) qs.by_vertex[v].push_back(p.id);
        }
        qs.by_mapped[p.mapped].push_back(p.id);
        set_deadlines(qi, p);
        qs.partials.emplace(p.id, std::move(p));
        ++live_total;
        peak_live = std::max(peak_live, live_total);
    }

    void remove_partial(std::uint32_t qi, PartialId pid) {
        QueryState& qs = queries[qi];
        auto it = qs.partials.find(pid);
        if (it == qs.partials.end()) {
            throw Error(ErrorCode::UnknownQueryState, "partial " + std::to_string(pid) + " vanished");
        }
        clear_deadlines(qi, it->second);
        qs.dead_index_entries += static_cast<std::size_t>(std::popcount(it->second.mapped)) + 1;
        qs.partials.erase(it);
        --live_total;
        if (qs.dead_index_entries > 4096 && qs.dead_index_entries > 2 * qs.partials.size()) {
            rebuild_indexes(qs);
        }
    }

    static void rebuild_indexes(QueryState& qs) {
        qs.by_vertex.clear();
        qs.by_mapped.clear();
        std::vector<PartialId> ids;
        ids.reserve(qs.partials.size());
        for (const auto& [pid, p] : qs.partials) ids.push_back(pid);
        std::sort(ids.begin(), ids.end());
        for (PartialId pid : ids) {
            const Partial& p = qs.partials.at(pid);
            for (VertexHandle v : p.vmap) {
                if (v != kNoVertex) qs.by_vertex[v].push_back(pid);
            }
            qs.by_mapped[p.mapped].push_back(pid);
        }
        qs.dead_index_entries = 0;
    }

    // Drops ids of removed partials; the list keeps insertion order.
    static void compact(const QueryState& qs, std::vector<PartialId>& ids) {
        std::erase_if(ids, [&](PartialId pid) { return !qs.partials.contains(pid); });
    }

    std::size_t expire_until(Timestamp ts, Seq seq) {
        std::size_t removed = 0;
        while (!time_deadlines.empty() && std::get<0>(*time_deadlines.begin()) < ts) {
            auto [d, qi, pid] = *time_deadlines.begin();
            remove_partial(qi, pid);
            ++removed;
        }
        while (!seq_deadlines.empty() && std::get<0>(*seq_deadlines.begin()) < seq) {
            auto [d, qi, pid] = *seq_deadlines.begin();
            remove_partial(qi, pid);
            ++removed;
        }
        expired += removed;
        return removed;
    }

    // ---- registration ------------------------------------------------------

    void apply_gate(QueryState& qs, const std::set<std::size_t>& edges) {
        std::uint64_t mask = 0;
        for (std::size_t e : edges) mask |= bit(e);
        qs.gate_mask = mask;
        qs.gate_fill_order.clear();
        if (!mask) return;

        std::vector<bool> covered(qs.graph.vertices.size(), false);
        std::vector<bool> placed(qs.graph.edges.size(), false);
        for (std::size_t e : edges) {
            covered[qs.ends[e].first] = covered[qs.ends[e].second] = true;
            placed[e] = true;
        }
        while (qs.gate_fill_order.size() + edges.size() < qs.graph.edges.size()) {
            std::optional<std::size_t> pick;
            for (std::size_t e = 0; e < qs.graph.edges.size() && !pick; ++e) {
                if (!placed[e] && (covered[qs.ends[e].first] || covered[qs.ends[e].second])) pick = e;
            }
            for (std::size_t e = 0; e < qs.graph.edges.size() && !pick; ++e) {
                if (!placed[e]) pick = e;
            }
            placed[*pick] = true;
            covered[qs.ends[*pick].first] = covered[qs.ends[*pick].second] = true;
            qs.gate_fill_order.push_back(*pick);
        }
    }

    QueryId register_query(QueryGraph query) {
        auto report = validate(query);
        if (!report.ok()) {
            throw Error(ErrorCode::InvalidQuery, "query '" + query.name + "': " + report.summary());
        }
        if (names.contains(query.name)) {
            throw Error(ErrorCode::DuplicateQueryName, "query '" + query.name + "' is already registered");
        }
        const auto id = static_cast<QueryId>(queries.size());
        QueryState qs;
        qs.graph = query;
        const std::size_t m = query.edges.size();
        for (std::size_t e = 0; e < m; ++e) {
            qs.signatures.push_back(signature_of(query, e));
            qs.ends.emplace_back(*query.vertex_index(query.edges[e].src_var), *query.vertex_index(query.edges[e].dst_var));
        }
        qs.before = order_closure(query);
        qs.pred_mask.assign(m, 0);
        qs.succ_mask.assign(m, 0);
        for (std::size_t a = 0; a < m; ++a) {
            for (std::size_t b = 0; b < m; ++b) {
                if (qs.before[a][b]) {
                    qs.pred_mask[b] |= bit(a);
                    qs.succ_mask[a] |= bit(b);
                }
            }
        }
        for (std::size_t e : spawn_eligible_edges(query)) qs.spawn_mask |= bit(e);
        qs.full_mask = m == 64 ? ~std::uint64_t{0} : bit(m) - 1;
        qs.registered_at = store.update_count();
        if (auto it = config.spawn_gates.find(query.name); it != config.spawn_gates.end() && !it->second.empty()) {
            if (!is_valid_gate(query, it->second)) {
                throw Error(ErrorCode::InvalidGate, "invalid spawn gate for query '" + query.name + "'");
            }
            apply_gate(qs, it->second);
        }

        graphs.push_back(std::move(query));
        queries.push_back(std::move(qs));
        names.emplace(graphs.back().name, id);
        dispatch = DispatchIndex(graphs);
        publish();
        return id;
    }

    // ---- matching ----------------------------------------------------------

    void emit(std::uint32_t qi, const Partial& p, std::vector<MatchResult>& out) {
        QueryState& qs = queries[qi];
        if (config.dedup) {
            std::vector<std::uint32_t> key;
            key.reserve(p.emap.size() + 1);
            key.push_back(qi);
            for (const Slot& s : p.emap) key.push_back(s.edge);
            if (!emitted_keys.insert(std::move(key)).second) return;
        }
        MatchResult r;
        r.query = static_cast<QueryId>(qi);
        r.query_name = qs.graph.name;
        for (VertexHandle v : p.vmap) r.embedding.vertices.push_back(store.vertex(v).id);
        for (const Slot& s : p.emap) r.embedding.edges.push_back({store.edge(s.edge).id, s.ts});
        r.completion_ts = now_ts;
        r.emit_seq = now_seq;
        ++qs.emitted;
        ++emitted;
        out.push_back(std::move(r));
    }

    bool window_ok(const QueryState& qs, Timestamp first) const {
        const auto& w = qs.graph.constraints.window;
        return !w || now_ts - first <= *w;
    }

    // Completes or stores p extended by `eid`; `fresh` holds partials committed after the update.
    void extend(std::uint32_t qi, const Partial& p, std::size_t eid, EdgeHandle h, const EdgeRecord& rec,
                std::vector<Partial>& fresh, std::vector<MatchResult>& out) {
        QueryState& qs = queries[qi];
        Partial next = p;
        next.id = 0;
        next.matched |= bit(eid);
        auto [x, y] = qs.ends[eid];
        next.vmap[x] = rec.src;
        next.vmap[y] = rec.dst;
        next.mapped |= bit(x) | bit(y);
        next.emap[eid] = Slot{h, rec.timestamp, rec.seq};
        next.last_ts = rec.timestamp;
        next.last_seq = rec.seq;
        next.time_deadline.reset();
        next.seq_deadline.reset();
        if (next.matched == qs.full_mask) {
            if (window_ok(qs, next.first_ts)) emit(qi, next, out);
            return;
        }
        fresh.push_back(std::move(next));
    }

    void augment(std::uint32_t qi, std::size_t eid, EdgeHandle h, const EdgeRecord& rec, std::vector<Partial>& fresh,
                 std::vector<MatchResult>& out) {
        QueryState& qs = queries[qi];
        auto [x, y] = qs.ends[eid];
        const VertexHandle s = rec.src;
        const VertexHandle t = rec.dst;
        const std::uint64_t ebit = bit(eid);

        auto consider = [&](const Partial& p) {
            ++candidate_checks;
            if (p.matched & ebit) return;
            if (qs.gate_mask) {
                const std::uint64_t m2 = p.matched | ebit;
                if ((m2 & ~qs.gate_mask) != 0 && (m2 & qs.gate_mask) != qs.gate_mask) return;
            }
            const VertexHandle px = p.vmap[x];
            const VertexHandle py = p.vmap[y];
            if (px != kNoVertex && px != s) return;
            if (py != kNoVertex && py != t) return;
            if (px == kNoVertex && p.maps_vertex(s)) return;
            if (py == kNoVertex && p.maps_vertex(t)) return;
            if (config.ordered_pruning) {
                if (p.matched & qs.succ_mask[eid]) return;
                if ((p.matched & qs.pred_mask[eid]) != qs.pred_mask[eid]) return;
                for (std::uint64_t preds = qs.pred_mask[eid]; preds; preds &= preds - 1) {
                    if (p.emap[static_cast<std::size_t>(std::countr_zero(preds))].ts >= rec.timestamp) return;
                }
            }
            extend(qi, p, eid, h, rec, fresh, out);
        };

        if (auto it = qs.by_vertex.find(s); it != qs.by_vertex.end()) {
            compact(qs, it->second);
            for (PartialId pid : it->second) {
                const Partial& p = qs.partials.at(pid);
                if (p.vmap[x] == s) {
                    consider(p);
                } else if (!p.maps_vertex(s)) {
                    throw Error(ErrorCode::UnknownQueryState, "vertex index out of sync for query '" + qs.graph.name + "'");
                }
            }
        }
        if (auto it = qs.by_vertex.find(t); it != qs.by_vertex.end()) {
            compact(qs, it->second);
            for (PartialId pid : it->second) {
                const Partial& p = qs.partials.at(pid);
                if (p.vmap[y] == t && p.vmap[x] == kNoVertex) consider(p);
            }
        }
        const std::uint64_t ends_mask = bit(x) | bit(y);
        for (auto& [mask, ids] : qs.by_mapped) {
            if (mask & ends_mask) continue;
            compact(qs, ids);
            for (PartialId pid : ids) consider(qs.partials.at(pid));
        }
    }

    void spawn(std::uint32_t qi, std::size_t eid, EdgeHandle h, const EdgeRecord& rec, std::vector<Partial>& fresh,
               std::vector<MatchResult>& out) {
        QueryState& qs = queries[qi];
        if (config.ordered_pruning && !(qs.spawn_mask & bit(eid))) return;
        if (qs.gate_mask && !(qs.gate_mask & bit(eid))) return;
        Partial p;
        p.vmap.assign(qs.graph.vertices.size(), kNoVertex);
        p.emap.assign(qs.graph.edges.size(), Slot{});
        p.first_ts = rec.timestamp;
        ++qs.spawned;
        extend(qi, p, eid, h, rec, fresh, out);
    }

    // Arrival-chain test: would the ungated engine hold this partial right now?
    bool chain_valid(const QueryState& qs, const Partial& p) const {
        std::vector<std::pair<Seq, std::size_t>> order;
        for (std::uint64_t m = p.matched; m; m &= m - 1) {
            auto e = static_cast<std::size_t>(std::countr_zero(m));
            order.emplace_back(p.emap[e].seq, e);
        }
        std::sort(order.begin(), order.end());
        const auto gap_t = qs.time_gap();
        const auto gap_u = qs.update_gap();
        const auto& window = qs.graph.constraints.window;
        std::uint64_t prior = 0;
        for (std::size_t i = 0; i < order.size(); ++i) {
            const std::size_t e = order[i].second;
            const Slot& cur = p.emap[e];
            if (config.ordered_pruning) {
                if (i == 0 && !(qs.spawn_mask & bit(e))) return false;
                if ((qs.pred_mask[e] & ~prior) || (qs.succ_mask[e] & prior)) return false;
                for (std::uint64_t preds = qs.pred_mask[e]; preds; preds &= preds - 1) {
                    if (p.emap[static_cast<std::size_t>(std::countr_zero(preds))].ts >= cur.ts) return false;
                }
            }
            if (i > 0) {
                const Slot& prev = p.emap[order[i - 1].second];
                if (gap_t && cur.ts - prev.ts > *gap_t) return false;
                if (gap_u && cur.seq - prev.seq > static_cast<Seq>(*gap_u)) return false;
                if (window && cur.ts - p.emap[order[0].second].ts > *window) return false;
            }
            prior |= bit(e);
        }
        return true;
    }

    // Re-derives the partials around a just-completed gate instance from edges already in the store.
    void reconstruct(std::uint32_t qi, const Partial& seed, std::vector<MatchResult>& out) {
        QueryState& qs = queries[qi];
        const std::size_t m = qs.graph.edges.size();
        Timestamp lower = 0;
        if (auto w = qs.graph.constraints.window) lower = std::max(lower, now_ts - *w);
        if (auto g = qs.time_gap()) lower = std::max(lower, now_ts - *g * static_cast<std::int64_t>(m - 1));

        Partial cur = seed;
        std::vector<Partial> found;

        std::function<void(std::size_t)> fill = [&](std::size_t idx) {
            if (idx == qs.gate_fill_order.size()) {
                if (cur.matched != seed.matched && chain_valid(qs, cur)) found.push_back(cur);
                return;
            }
            fill(idx + 1);
            const std::size_t eid = qs.gate_fill_order[idx];
            auto [x, y] = qs.ends[eid];
            std::span<const EdgeHandle> pool;
            if (cur.vmap[x] != kNoVertex) {
                pool = store.out_edges(cur.vmap[x]);
            } else if (cur.vmap[y] != kNoVertex) {
                pool = store.in_edges(cur.vmap[y]);
            } else {
                pool = store.edges_of_type(qs.graph.edges[eid].edge_type);
            }
            // Lists are in processing order, so timestamps are non-decreasing.
            auto first = std::partition_point(pool.begin(), pool.end(),
                                              [&](EdgeHandle h) { return store.edge(h).timestamp < lower; });
            for (auto it = first; it != pool.end(); ++it) {
                const EdgeHandle h = *it;
                ++gate_scans;
                const EdgeRecord& rec = store.edge(h);
                if (!rec.live() || rec.seq >= now_seq || rec.seq <= qs.registered_at || rec.src == rec.dst) continue;
                if (cur.vmap[x] != kNoVertex ? cur.vmap[x] != rec.src : cur.maps_vertex(rec.src)) continue;
                if (cur.vmap[y] != kNoVertex ? cur.vmap[y] != rec.dst : cur.maps_vertex(rec.dst)) continue;
                bool reused = false;
                for (std::uint64_t mm = cur.matched; mm && !reused; mm &= mm - 1) {
                    reused = cur.emap[static_cast<std::size_t>(std::countr_zero(mm))].edge == h;
                }
                if (reused) continue;
                if (!signature_matches(qs.signatures[eid],
                                       EdgeContext{rec.type, store.vertex(rec.src), store.vertex(rec.dst), rec.attributes})) {
                    continue;
                }
                if (config.ordered_pruning) {
                    bool ok = true;
                    for (std::uint64_t mm = cur.matched; mm && ok; mm &= mm - 1) {
                        auto a = static_cast<std::size_t>(std::countr_zero(mm));
                        if (qs.before[a][eid] && !(cur.emap[a].ts < rec.timestamp)) ok = false;
                        if (qs.before[eid][a] && !(rec.timestamp < cur.emap[a].ts)) ok = false;
                    }
                    if (!ok) continue;
                }
                const Partial saved = cur;
                cur.matched |= bit(eid);
                cur.vmap[x] = rec.src;
                cur.vmap[y] = rec.dst;
                cur.mapped |= bit(x) | bit(y);
                cur.emap[eid] = Slot{h, rec.timestamp, rec.seq};
                fill(idx + 1);
                cur = saved;
            }
        };
        fill(0);

        for (Partial& p : found) {
            p.first_ts = now_ts;
            p.last_ts = 0;
            p.last_seq = 0;
            for (std::uint64_t mm = p.matched; mm; mm &= mm - 1) {
                const Slot& s = p.emap[static_cast<std::size_t>(std::countr_zero(mm))];
                p.first_ts = std::min(p.first_ts, s.ts);
                p.last_ts = std::max(p.last_ts, s.ts);
                p.last_seq = std::max(p.last_seq, s.seq);
            }
            if (p.matched == qs.full_mask) {
                emit(qi, p, out);
            } else {
                insert_partial(qi, std::move(p));
            }
        }
    }

    void discard_edge(EdgeHandle h) {
        const EdgeRecord& rec = store.edge(h);
        for (std::uint32_t qi = 0; qi < queries.size(); ++qi) {
            QueryState& qs = queries[qi];
            auto it = qs.by_vertex.find(rec.src);
            if (it == qs.by_vertex.end()) continue;
            compact(qs, it->second);
            std::vector<PartialId> doomed;
            for (PartialId pid : it->second) {
                ++candidate_checks;
                const Partial& p = qs.partials.at(pid);
                for (std::uint64_t mm = p.matched; mm; mm &= mm - 1) {
                    if (p.emap[static_cast<std::size_t>(std::countr_zero(mm))].edge == h) {
                        doomed.push_back(pid);
                        break;
                    }
                }
            }
            for (PartialId pid : doomed) remove_partial(qi, pid);
            discarded += doomed.size();
        }
    }

    std::vector<MatchResult> process_one(const Pending& item) {
        const StreamUpdate& u = item.update;
        UpdateReceipt receipt;
        try {
            receipt = store.apply_update(u);
        } catch (const Error& e) {
            throw Error(e.code(), e.what(), item.origin);
        }
        now_ts = std::max(now_ts, u.timestamp);
        now_seq = receipt.seq;
        expire_until(now_ts, now_seq);

        std::vector<MatchResult> out;
        if (u.op == UpdateOp::Delete) {
            synopsis.observe(u);
            discard_edge(receipt.edge);
            publish();
            return out;
        }

        const EdgeRecord& rec = store.edge(receipt.edge);
        hits.clear();
        predicate_evals +=
            dispatch.match(EdgeContext{rec.type, store.vertex(rec.src), store.vertex(rec.dst), rec.attributes}, hits);
        if (rec.src == rec.dst) hits.clear();// no query edge is a self-loop

        std::vector<PredicateHit> observed;
        observed.reserve(hits.size());
        for (const auto& hit : hits) observed.push_back({queries[index_of(hit.query)].graph.name, hit.edge});
        synopsis.observe(u, observed);

        std::size_t i = 0;
        while (i < hits.size()) {
            const std::uint32_t qi = index_of(hits[i].query);
            std::vector<Partial> fresh;
            std::size_t j = i;
            // Candidates are gathered before any commit so one update fills at most one query edge per partial.
            for (; j < hits.size() && index_of(hits[j].query) == qi; ++j) {
                augment(qi, hits[j].edge, receipt.edge, rec, fresh, out);
                spawn(qi, hits[j].edge, receipt.edge, rec, fresh, out);
            }
            const std::uint64_t gate = queries[qi].gate_mask;
            for (Partial& p : fresh) {
                const bool gate_completed = gate && p.matched == gate;
                Partial seed = gate_completed ? p : Partial{};
                insert_partial(qi, std::move(p));
                if (gate_completed) reconstruct(qi, seed, out);
            }
            i = j;
        }

        std::sort(out.begin(), out.end(), [](const MatchResult& a, const MatchResult& b) {
            return std::tie(a.query, a.embedding) < std::tie(b.query, b.embedding);
        });
        publish();
        return out;
    }

    std::vector<MatchResult> release(Timestamp limit) {
        std::vector<MatchResult> out;
        while (!pending.empty() && pending.begin()->first.first <= limit) {
            Pending item = std::move(pending.begin()->second);
            pending.erase(pending.begin());
            auto res = process_one(item);
            out.insert(out.end(), std::make_move_iterator(res.begin()), std::make_move_iterator(res.end()));
        }
        return out;
    }

    std::vector<MatchResult> submit(const StreamUpdate& u, std::optional<std::uint64_t> origin) {
        if (u.timestamp < 0) {
            throw Error(ErrorCode::InvalidUpdate, "negative timestamp for edge '" + u.edge_id + "'", origin);
        }
        if (watermark && u.timestamp < *watermark - config.reorder_slack) {
            throw Error(ErrorCode::OutOfOrderTimestamp,
                        "timestamp " + std::to_string(u.timestamp) + " of edge '" + u.edge_id + "' is older than watermark " +
                            std::to_string(*watermark) + " minus slack " + std::to_string(config.reorder_slack),
                        origin);
        }
        watermark = watermark ? std::max(*watermark, u.timestamp) : u.timestamp;
        pending.emplace(std::make_pair(u.timestamp, arrivals++), Pending{u, origin});
        return release(*watermark - config.reorder_slack);
    }
};

Engine::Engine(EngineConfig config) : impl_(std::make_unique<Impl>(std::move(config))) {}
Engine::~Engine() = default;
Engine::Engine(Engine&&) noexcept = default;
Engine& Engine::operator=(Engine&&) noexcept = default;

QueryId Engine::register_query(QueryGraph query) { return impl_->register_query(std::move(query)); }

std::vector<MatchResult> Engine::process_update(const StreamUpdate& update, std::optional<std::uint64_t> origin) {
    return impl_->submit(update, origin);
}

std::vector<MatchResult> Engine::flush() { return impl_->release(kMaxTimestamp); }

std::size_t Engine::expire(Timestamp now_ts, Seq now_seq) {
    auto removed = impl_->expire_until(now_ts, now_seq);
    impl_->publish();
    return removed;
}

EngineStats Engine::stats() const {
    std::lock_guard lock(impl_->stats_mutex);
    return impl_->published;
}

std::size_t Engine::query_count() const { return impl_->queries.size(); }

const QueryGraph& Engine::query(QueryId id) const {
    if (index_of(id) >= impl_->queries.size()) throw Error(ErrorCode::UnknownQuery, "unknown query id");
    return impl_->queries[index_of(id)].graph;
}

std::optional<QueryId> Engine::find_query(const std::string& name) const {
    if (auto it = impl_->names.find(name); it != impl_->names.end()) return it->second;
    return std::nullopt;
}

std::set<std::size_t> Engine::spawn_set(QueryId id) const {
    const auto& qs = impl_->queries.at(index_of(id));
    std::set<std::size_t> out;
    for (std::size_t e = 0; e < qs.graph.edges.size(); ++e) {
        if (qs.spawn_mask & bit(e)) out.insert(e);
    }
    return out;
}

std::vector<PartialMatchView> Engine::partials(QueryId id) const {
    const auto& qs = impl_->queries.at(index_of(id));
    std::vector<PartialMatchView> out;
    for (const auto& [pid, p] : qs.partials) {
        PartialMatchView v;
        v.id = pid;
        v.query = id;
        for (VertexHandle h : p.vmap) {
            v.vertices.push_back(h == kNoVertex ? std::nullopt : std::optional(impl_->store.vertex(h).id));
        }
        for (std::size_t e = 0; e < p.emap.size(); ++e) {
            if (p.matched & bit(e)) {
                v.edges.emplace_back(EdgeBinding{impl_->store.edge(p.emap[e].edge).id, p.emap[e].ts});
            } else {
                v.edges.emplace_back(std::nullopt);
            }
        }
        v.first_ts = p.first_ts;
        v.last_ts = p.last_ts;
        v.last_update_seq = p.last_seq;
        out.push_back(std::move(v));
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    return out;
}

void Engine::set_cluster_gap(QueryId id, std::optional<ClusterGap> gap) {
    auto& impl = *impl_;
    const auto qi = index_of(id);
    auto& qs = impl.queries.at(qi);
    if (gap && gap->gap <= 0) throw Error(ErrorCode::InvalidQuery, "cluster_gap must be positive");
    qs.graph.constraints.cluster_gap = gap;
    impl.graphs[qi].constraints.cluster_gap = gap;
    for (auto& [pid, p] : qs.partials) {
        impl.clear_deadlines(qi, p);
        impl.set_deadlines(qi, p);
    }
    impl.publish();
}

void Engine::set_spawn_gate(QueryId id, const std::set<std::size_t>& edges) {
    auto& impl = *impl_;
    const auto qi = index_of(id);
    auto& qs = impl.queries.at(qi);
    if (!edges.empty() && !is_valid_gate(qs.graph, edges)) {
        throw Error(ErrorCode::InvalidGate, "invalid spawn gate for query '" + qs.graph.name + "'");
    }
    impl.apply_gate(qs, edges);
    if (!qs.gate_mask) return;
    std::vector<PartialId> doomed;
    for (const auto& [pid, p] : qs.partials) {
        if ((p.matched & ~qs.gate_mask) != 0 && (p.matched & qs.gate_mask) != qs.gate_mask) doomed.push_back(pid);
    }
    for (PartialId pid : doomed) impl.remove_partial(qi, pid);
    impl.discarded += doomed.size();
    impl.publish();
}

std::set<std::size_t> Engine::spawn_gate(QueryId id) const {
    const auto& qs = impl_->queries.at(index_of(id));
    std::set<std::size_t> out;
    for (std::size_t e = 0; e < qs.graph.edges.size(); ++e) {
        if (qs.gate_mask & bit(e)) out.insert(e);
    }
    return out;
}

const GraphStore& Engine::graph() const { return impl_->store; }
const StreamSynopsis& Engine::synopsis() const { return impl_->synopsis; }
const DispatchIndex& Engine::dispatch_index() const { return impl_->dispatch; }
const EngineConfig& Engine::config() const { return impl_->config; }
Timestamp Engine::watermark() const {
    return impl_->watermark ? *impl_->watermark - impl_->config.reorder_slack : 0;
}
Timestamp Engine::now() const { return impl_->now_ts; }
Seq Engine::sequence() const { return impl_->now_seq; }

}// namespace streamsubiso
