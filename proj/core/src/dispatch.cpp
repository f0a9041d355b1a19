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

#include <streamsubiso/dispatch.hpp>

#include <algorithm>
#include <array>

namespace streamsubiso {

namespace {

void append_predicates(std::string& out, const std::vector<AttributePredicate>& preds) {
    out += '[';
    for (std::size_t i = 0; i < preds.size(); ++i) {
        if (i) out += ',';
        out += preds[i].attribute;
        out += to_string(preds[i].cmp);
        // Tag the alternative so 7 and "7" stay distinct.
        out += std::holds_alternative<std::string>(preds[i].value) ? 's' : std::holds_alternative<double>(preds[i].value) ? 'd' : 'i';
        out += ':';
        out += to_string(preds[i].value);
    }
    out += ']';
}

std::vector<AttributePredicate> sorted(std::vector<AttributePredicate> preds) {
    std::sort(preds.begin(), preds.end());
    preds.erase(std::unique(preds.begin(), preds.end()), preds.end());
    return preds;
}

}// namespace

std::string EdgeSignature::key() const {
    std::string out = "(" + src_label;
    append_predicates(out, src_predicates);
    out += ")-" + edge_type;
    append_predicates(out, edge_predicates);
    out += "->(" + dst_label;
    append_predicates(out, dst_predicates);
    out += ")";
    return out;
}

EdgeSignature signature_of(const QueryGraph& query, std::size_t edge) {
    const auto& e = query.edges.at(edge);
    const auto& src = query.vertices.at(*query.vertex_index(e.src_var));
    const auto& dst = query.vertices.at(*query.vertex_index(e.dst_var));
    return EdgeSignature{e.edge_type,        src.label,           dst.label,
                         sorted(src.predicates), sorted(e.predicates), sorted(dst.predicates)};
}

bool signature_matches(const EdgeSignature& sig, const EdgeContext& edge) {
    return edge.type == sig.edge_type && edge.src.label == sig.src_label && edge.dst.label == sig.dst_label &&
           evaluate_all(sig.edge_predicates, edge.attributes) && evaluate_all(sig.src_predicates, edge.src.attributes) &&
           evaluate_all(sig.dst_predicates, edge.dst.attributes);
}

DispatchIndex::DispatchIndex(std::span<const QueryGraph> queries) {
    std::map<EdgeSignature, std::size_t> seen;
    for (std::size_t q = 0; q < queries.size(); ++q) {
        for (std::size_t e = 0; e < queries[q].edges.size(); ++e) {
            EdgeSignature sig = signature_of(queries[q], e);
            auto [it, fresh] = seen.try_emplace(sig, buckets_.size());
            if (fresh) {
                by_type_[sig.edge_type].push_back(buckets_.size());
                buckets_.push_back(DispatchBucket{std::move(sig), {}});
            }
            buckets_[it->second].entries.push_back(DispatchEntry{static_cast<QueryId>(q), e});
        }
    }
}

std::size_t DispatchIndex::match(const EdgeContext& edge, std::vector<DispatchEntry>& out) const {
    auto it = by_type_.find(edge.type);
    if (it == by_type_.end()) return 0;
    const std::size_t before = out.size();
    for (std::size_t b : it->second) {
        if (signature_matches(buckets_[b].signature, edge)) {
            out.insert(out.end(), buckets_[b].entries.begin(), buckets_[b].entries.end());
        }
    }
    std::sort(out.begin() + static_cast<std::ptrdiff_t>(before), out.end());
    return it->second.size();
}

DispatchIndex build_dispatch_index(std::span<const QueryGraph> queries) { return DispatchIndex(queries); }

bool is_valid_gate(const QueryGraph& query, const std::set<std::size_t>& edges) {
    if (edges.empty() || edges.size() > 2) return false;
    for (std::size_t e : edges) {
        if (e >= query.edges.size()) return false;
    }
    if (edges.size() == 2) {
        const auto& a = query.edges[*edges.begin()];
        const auto& b = query.edges[*edges.rbegin()];
        if (a.src_var != b.src_var && a.src_var != b.dst_var && a.dst_var != b.src_var && a.dst_var != b.dst_var) {
            return false;
        }
    }
    const auto reach = order_closure(query);
    for (std::size_t e : edges) {
        for (std::size_t p = 0; p < query.edges.size(); ++p) {
            if (reach[p][e] && !edges.contains(p)) return false;
        }
    }
    return true;
}

namespace {

std::string pair_key(const QueryGraph& q, std::size_t a, std::size_t b) {
    const auto& ea = q.edges[a];
    const auto& eb = q.edges[b];
    const std::array<const std::string*, 4> ends{&ea.src_var, &ea.dst_var, &eb.src_var, &eb.dst_var};
    std::string shape;
    for (std::size_t i = 0; i < ends.size(); ++i) {
        std::size_t local = i;
        for (std::size_t j = 0; j < i; ++j) {
            if (*ends[j] == *ends[i]) {
                local = j;
                break;
            }
        }
        shape += static_cast<char>('0' + local);
    }
    return signature_of(q, a).key() + "&" + signature_of(q, b).key() + "#" + shape;
}

std::string subpattern_key(const QueryGraph& q, const std::vector<std::size_t>& edges) {
    if (edges.size() == 1) return signature_of(q, edges[0]).key();
    return std::min(pair_key(q, edges[0], edges[1]), pair_key(q, edges[1], edges[0]));
}

}// namespace

std::map<std::string, std::vector<GateCandidate>> find_shared_gates(std::span<const QueryGraph> queries,
                                                                    const StreamSynopsis* synopsis) {
    std::map<std::string, std::vector<GateCandidate>> out;
    std::map<std::string, std::set<std::size_t>> holders;// subpattern key -> query positions

    for (std::size_t qi = 0; qi < queries.size(); ++qi) {
        const QueryGraph& q = queries[qi];
        auto& list = out[q.name];
        const std::size_t m = q.edges.size();
        for (std::size_t a = 0; a < m; ++a) {
            for (std::size_t b = a; b < m; ++b) {
                std::set<std::size_t> edges = a == b ? std::set<std::size_t>{a} : std::set<std::size_t>{a, b};
                if (!is_valid_gate(q, edges)) continue;
                GateCandidate c;
                c.edges.assign(edges.begin(), edges.end());
                c.signature = subpattern_key(q, c.edges);
                if (synopsis) {
                    std::uint64_t hits = UINT64_MAX;
                    for (std::size_t e : c.edges) {
                        const auto* ps = synopsis->predicate(q.name, e);
                        hits = std::min<std::uint64_t>(hits, ps ? ps->count : 0);
                    }
                    c.observed_matches = hits;
                }
                holders[c.signature].insert(qi);
                list.push_back(std::move(c));
            }
        }
    }

    for (auto& [name, list] : out) {
        for (auto& c : list) c.sharing = holders[c.signature].size();
        std::sort(list.begin(), list.end(), [](const GateCandidate& x, const GateCandidate& y) {
            if (x.sharing != y.sharing) return x.sharing > y.sharing;
            if (x.observed_matches != y.observed_matches) {
                return x.observed_matches.value_or(UINT64_MAX) < y.observed_matches.value_or(UINT64_MAX);
            }
            if (x.signature != y.signature) return x.signature < y.signature;
            return x.edges < y.edges;
        });
    }
    return out;
}

}// namespace streamsubiso
