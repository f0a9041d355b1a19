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

#include <streamsubiso/oracle.hpp>

#include <algorithm>
#include <numeric>
#include <unordered_map>

namespace streamsubiso {

namespace {

class Backtracker {
  public:
    Backtracker(const GraphSnapshot& graph, const QueryGraph& query) : graph_(graph), query_(query) {
        for (const auto& [id, v] : graph.vertices) {
            index_.emplace(id, vertices_.size());
            vertices_.push_back(&v);
        }
        for (std::size_t i = 0; i < graph.edges.size(); ++i) {
            const auto& e = graph.edges[i];
            between_[key(index_.at(e.src), index_.at(e.dst))].push_back(i);
        }
        for (const auto& e : query.edges) {
            edge_ends_.emplace_back(*query.vertex_index(e.src_var), *query.vertex_index(e.dst_var));
        }

        const std::size_t n = query.vertices.size();
        std::vector<std::size_t> degree(n, 0);
        for (auto [s, d] : edge_ends_) {
            ++degree[s];
            ++degree[d];
        }
        order_.resize(n);
        std::iota(order_.begin(), order_.end(), 0);
        std::sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
            if (degree[a] != degree[b]) return degree[a] > degree[b];
            return query.vertices[a].var < query.vertices[b].var;
        });

        candidates_.resize(n);
        for (std::size_t qv = 0; qv < n; ++qv) {
            const auto& spec = query.vertices[qv];
            for (std::size_t dv = 0; dv < vertices_.size(); ++dv) {
                if (vertices_[dv]->label == spec.label && evaluate_all(spec.predicates, vertices_[dv]->attributes)) {
                    candidates_[qv].push_back(dv);
                }
            }
        }
    }

    std::vector<Embedding> run() {
        assignment_.assign(query_.vertices.size(), kUnset);
        used_.assign(vertices_.size(), false);
        bind_vertex(0);
        return std::move(out_);
    }

  private:
    static constexpr std::size_t kUnset = static_cast<std::size_t>(-1);

    static std::uint64_t key(std::size_t a, std::size_t b) { return (std::uint64_t{a} << 32) | b; }

    bool edge_matches(std::size_t qe, std::size_t de) const {
        const auto& spec = query_.edges[qe];
        const auto& e = graph_.edges[de];
        return e.type == spec.edge_type && evaluate_all(spec.predicates, e.attributes);
    }

    std::vector<std::size_t> data_edges_for(std::size_t qe) const {
        std::vector<std::size_t> out;
        auto [s, d] = edge_ends_[qe];
        auto it = between_.find(key(assignment_[s], assignment_[d]));
        if (it == between_.end()) return out;
        for (std::size_t de : it->second) {
            if (edge_matches(qe, de)) out.push_back(de);
        }
        return out;
    }

    // Every query edge between bound vertices has at least one data edge.
    bool locally_consistent(std::size_t qv) const {
        for (std::size_t qe = 0; qe < edge_ends_.size(); ++qe) {
            auto [s, d] = edge_ends_[qe];
            if ((s == qv || d == qv) && assignment_[s] != kUnset && assignment_[d] != kUnset &&
                data_edges_for(qe).empty()) {
                return false;
            }
        }
        return true;
    }

    void bind_vertex(std::size_t depth) {
        if (depth == order_.size()) {
            bind_edges();
            return;
        }
        const std::size_t qv = order_[depth];
        for (std::size_t dv : candidates_[qv]) {
            if (used_[dv]) continue;
            assignment_[qv] = dv;
            used_[dv] = true;
            if (locally_consistent(qv)) bind_vertex(depth + 1);
            used_[dv] = false;
            assignment_[qv] = kUnset;
        }
    }

    void bind_edges() {
        std::vector<std::vector<std::size_t>> options;
        for (std::size_t qe = 0; qe < edge_ends_.size(); ++qe) {
            options.push_back(data_edges_for(qe));
        }
        std::vector<std::size_t> chosen(edge_ends_.size());
        enumerate_edges(options, chosen, 0);
    }

    void enumerate_edges(const std::vector<std::vector<std::size_t>>& options, std::vector<std::size_t>& chosen,
                         std::size_t qe) {
        if (qe == options.size()) {
            Embedding emb;
            for (std::size_t dv : assignment_) emb.vertices.push_back(vertices_[dv]->id);
            for (std::size_t de : chosen) emb.edges.push_back({graph_.edges[de].id, graph_.edges[de].timestamp});
            out_.push_back(std::move(emb));
            return;
        }
        for (std::size_t de : options[qe]) {
            if (std::find(chosen.begin(), chosen.begin() + static_cast<std::ptrdiff_t>(qe), de) !=
                chosen.begin() + static_cast<std::ptrdiff_t>(qe)) {
                continue;
            }
            chosen[qe] = de;
            enumerate_edges(options, chosen, qe + 1);
        }
    }

    const GraphSnapshot& graph_;
    const QueryGraph& query_;
    std::vector<const Vertex*> vertices_;
    std::unordered_map<std::string, std::size_t> index_;
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> between_;
    std::vector<std::pair<std::size_t, std::size_t>> edge_ends_;
    std::vector<std::size_t> order_;
    std::vector<std::vector<std::size_t>> candidates_;
    std::vector<std::size_t> assignment_;
    std::vector<bool> used_;
    std::vector<Embedding> out_;
};

void sort_output(const QueryGraph& query, std::vector<Embedding>& out) {
    std::vector<std::size_t> by_var(query.vertices.size());
    std::iota(by_var.begin(), by_var.end(), 0);
    std::sort(by_var.begin(), by_var.end(),
              [&](std::size_t a, std::size_t b) { return query.vertices[a].var < query.vertices[b].var; });
    std::sort(out.begin(), out.end(), [&](const Embedding& a, const Embedding& b) {
        for (std::size_t i : by_var) {
            if (a.vertices[i] != b.vertices[i]) return a.vertices[i] < b.vertices[i];
        }
        return a.edges < b.edges;
    });
}

}// namespace

std::vector<Embedding> find_all_matches(const GraphSnapshot& graph, const QueryGraph& query) {
    if (graph.vertices.empty() || query.edges.empty()) return {};
    auto out = Backtracker(graph, query).run();
    sort_output(query, out);
    return out;
}

bool satisfies_temporal(const QueryGraph& query, const Embedding& embedding, const std::vector<Seq>* sequences,
                        bool enforce_order) {
    const auto& c = query.constraints;
    const auto& edges = embedding.edges;
    if (enforce_order) {
        for (auto [a, b] : c.arrival_order) {
            if (!(edges[a].timestamp < edges[b].timestamp)) return false;
        }
    }
    std::vector<Timestamp> ts;
    ts.reserve(edges.size());
    for (const auto& e : edges) ts.push_back(e.timestamp);
    std::sort(ts.begin(), ts.end());
    if (c.window && ts.back() - ts.front() > *c.window) return false;
    if (c.cluster_gap) {
        std::vector<std::int64_t> points;
        if (c.cluster_gap->unit == GapUnit::Time) {
            points = ts;
        } else {
            if (!sequences) {
                throw Error(ErrorCode::ClusterGapUnitUnsupported, "update-unit cluster gaps need sequence numbers");
            }
            for (Seq s : *sequences) points.push_back(static_cast<std::int64_t>(s));
            std::sort(points.begin(), points.end());
        }
        for (std::size_t i = 1; i < points.size(); ++i) {
            if (points[i] - points[i - 1] > c.cluster_gap->gap) return false;
        }
    }
    return true;
}

std::vector<Embedding> find_all_matches_temporal(const GraphSnapshot& graph, const QueryGraph& query) {
    if (query.constraints.cluster_gap && query.constraints.cluster_gap->unit == GapUnit::Updates) {
        throw Error(ErrorCode::ClusterGapUnitUnsupported,
                    "query '" + query.name + "' counts its cluster gap in updates; snapshots carry timestamps only");
    }
    auto all = find_all_matches(graph, query);
    std::erase_if(all, [&](const Embedding& e) { return !satisfies_temporal(query, e, nullptr); });
    return all;
}

std::vector<Embedding> find_all_matches_temporal_sequenced(const GraphSnapshot& graph, const QueryGraph& query) {
    std::unordered_map<std::string, Seq> seq_of;
    for (const auto& e : graph.edges) seq_of.emplace(e.id, e.seq);
    auto all = find_all_matches(graph, query);
    std::erase_if(all, [&](const Embedding& emb) {
        std::vector<Seq> seqs;
        for (const auto& b : emb.edges) seqs.push_back(seq_of.at(b.edge_id));
        return !satisfies_temporal(query, emb, &seqs);
    });
    return all;
}

}// namespace streamsubiso
