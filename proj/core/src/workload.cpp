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

#include <streamsubiso/workload.hpp>

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <cstring>
#include <numeric>

namespace streamsubiso {

std::uint64_t seed_from_env(std::uint64_t fallback) {
    const char* env = std::getenv("STREAMSUBISO_SEED");
    if (!env) return fallback;
    std::uint64_t seed = 0;
    auto [ptr, ec] = std::from_chars(env, env + std::strlen(env), seed);
    if (ec != std::errc{} || *ptr != '\0') return fallback;
    return seed;
}

namespace {

template <typename T>
const T& pick(const std::vector<T>& items, std::mt19937_64& rng) {
    return items[std::uniform_int_distribution<std::size_t>(0, items.size() - 1)(rng)];
}

bool chance(double p, std::mt19937_64& rng) { return p > 0 && std::uniform_real_distribution<double>(0, 1)(rng) < p; }

}// namespace

std::vector<StreamUpdate> generate_stream(const StreamGenConfig& config, std::mt19937_64& rng) {
    std::vector<StreamUpdate> out;
    if (config.vertices == 0) return out;
    std::vector<VertexRef> vertices(config.vertices);
    for (std::size_t i = 0; i < config.vertices; ++i) {
        vertices[i].id = "v" + std::to_string(i);
        vertices[i].label = pick(config.labels, rng);
    }
    std::vector<StreamUpdate> live;
    std::uniform_int_distribution<std::size_t> vertex(0, config.vertices - 1);
    std::uniform_int_distribution<Timestamp> step(0, config.max_step);
    Timestamp ts = 0;
    std::uint64_t next_edge = 0;
    for (std::size_t i = 0; i < config.updates; ++i) {
        ts += step(rng);
        if (!live.empty() && chance(config.delete_probability, rng)) {
            std::size_t victim = std::uniform_int_distribution<std::size_t>(0, live.size() - 1)(rng);
            StreamUpdate del = live[victim];
            del.op = UpdateOp::Delete;
            del.timestamp = ts;
            del.attributes.clear();
            del.src.attributes.clear();
            del.dst.attributes.clear();
            live[victim] = std::move(live.back());
            live.pop_back();
            out.push_back(std::move(del));
            continue;
        }
        StreamUpdate u;
        u.op = UpdateOp::Insert;
        u.edge_id = "e" + std::to_string(next_edge++);
        std::size_t s = vertex(rng);
        std::size_t t = vertex(rng);
        if (!config.allow_self_loops && config.vertices > 1) {
            while (t == s) t = vertex(rng);
        }
        u.src = vertices[s];
        u.dst = vertices[t];
        u.edge_type = pick(config.edge_types, rng);
        u.timestamp = ts;
        if (config.weight_range > 0) {
            u.attributes.emplace("w", std::uniform_int_distribution<std::int64_t>(0, config.weight_range - 1)(rng));
        }
        live.push_back(u);
        out.push_back(std::move(u));
    }
    return out;
}

QueryGraph generate_query(const QueryGenConfig& config, const std::string& name, std::mt19937_64& rng) {
    QueryGraph q;
    q.name = name;
    const std::size_t m = std::uniform_int_distribution<std::size_t>(config.min_edges, config.max_edges)(rng);
    auto add_vertex = [&] {
        QueryVertex v;
        v.var = "v" + std::to_string(q.vertices.size());
        v.label = pick(config.labels, rng);
        q.vertices.push_back(std::move(v));
        return q.vertices.size() - 1;
    };
    add_vertex();
    for (std::size_t e = 0; e < m; ++e) {
        const std::size_t n = q.vertices.size();
        std::size_t a = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
        std::size_t b = 0;
        // Close a cycle between existing vertices now and then, otherwise grow the tree.
        if (n >= 2 && chance(0.25, rng)) {
            do {
                b = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
            } while (b == a);
        } else {
            b = add_vertex();
        }
        if (chance(0.5, rng)) std::swap(a, b);
        QueryEdge edge;
        edge.name = "e" + std::to_string(e);
        edge.src_var = q.vertices[a].var;
        edge.dst_var = q.vertices[b].var;
        edge.edge_type = pick(config.edge_types, rng);
        if (chance(config.predicate_probability, rng)) {
            edge.predicates.push_back(
                {"w", Comparison::Lt, std::uniform_int_distribution<std::int64_t>(1, config.weight_range)(rng)});
        }
        q.edges.push_back(std::move(edge));
    }
    std::vector<std::size_t> rank(m);
    std::iota(rank.begin(), rank.end(), 0);
    std::shuffle(rank.begin(), rank.end(), rng);
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = 0; b < m; ++b) {
            if (rank[a] < rank[b] && chance(config.order_probability, rng)) q.constraints.arrival_order.emplace(a, b);
        }
    }
    if (chance(config.window_probability, rng)) {
        q.constraints.window = std::uniform_int_distribution<Timestamp>(1, config.max_window)(rng);
    }
    if (chance(config.gap_probability, rng)) {
        if (chance(config.update_gap_probability, rng)) {
            q.constraints.cluster_gap = ClusterGap{std::uniform_int_distribution<std::int64_t>(1, 40)(rng), GapUnit::Updates};
        } else {
            const Timestamp hi = q.constraints.window.value_or(config.max_window);
            q.constraints.cluster_gap = ClusterGap{std::uniform_int_distribution<Timestamp>(1, hi)(rng), GapUnit::Time};
        }
    }
    return q;
}

}// namespace streamsubiso
