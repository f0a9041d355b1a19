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

#include <streamsubiso/query.hpp>

#include <numeric>
#include <sstream>

namespace streamsubiso {

std::string_view to_string(Comparison cmp) {
    switch (cmp) {
        case Comparison::Eq: return "=";
        case Comparison::Ne: return "!=";
        case Comparison::Lt: return "<";
        case Comparison::Le: return "<=";
        case Comparison::Gt: return ">";
        case Comparison::Ge: return ">=";
    }
    return "?";
}

namespace {

// -1, 0, 1; both operands numeric.
int compare_numeric(const Scalar& a, const Scalar& b) {
    if (std::holds_alternative<std::int64_t>(a) && std::holds_alternative<std::int64_t>(b)) {
        auto x = std::get<std::int64_t>(a);
        auto y = std::get<std::int64_t>(b);
        return (x > y) - (x < y);
    }
    auto as_double = [](const Scalar& s) {
        return std::holds_alternative<std::int64_t>(s) ? static_cast<double>(std::get<std::int64_t>(s))
                                                       : std::get<double>(s);
    };
    double x = as_double(a);
    double y = as_double(b);
    return (x > y) - (x < y);
}

}// namespace

bool evaluate(const AttributePredicate& pred, const Attributes& attrs) {
    auto it = attrs.find(pred.attribute);
    if (it == attrs.end()) {
        return false;
    }
    const Scalar& actual = it->second;
    const bool numeric = is_numeric(actual) && is_numeric(pred.value);
    if (pred.cmp == Comparison::Eq || pred.cmp == Comparison::Ne) {
        bool equal;
        if (numeric) {
            equal = compare_numeric(actual, pred.value) == 0;
        } else if (!is_numeric(actual) && !is_numeric(pred.value)) {
            equal = std::get<std::string>(actual) == std::get<std::string>(pred.value);
        } else {
            equal = false;
        }
        return pred.cmp == Comparison::Eq ? equal : !equal;
    }
    if (!numeric) {
        return false;
    }
    const int c = compare_numeric(actual, pred.value);
    switch (pred.cmp) {
        case Comparison::Lt: return c < 0;
        case Comparison::Le: return c <= 0;
        case Comparison::Gt: return c > 0;
        case Comparison::Ge: return c >= 0;
        default: return false;
    }
}

bool evaluate_all(const std::vector<AttributePredicate>& preds, const Attributes& attrs) {
    for (const auto& p : preds) {
        if (!evaluate(p, attrs)) {
            return false;
        }
    }
    return true;
}

std::optional<std::size_t> QueryGraph::vertex_index(std::string_view var) const {
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        if (vertices[i].var == var) {
            return i;
        }
    }
    return std::nullopt;
}

std::optional<std::size_t> QueryGraph::edge_index(std::string_view edge_name) const {
    for (std::size_t i = 0; i < edges.size(); ++i) {
        if (edges[i].name == edge_name) {
            return i;
        }
    }
    return std::nullopt;
}

std::string_view to_string(ViolationKind kind) {
    switch (kind) {
        case ViolationKind::EmptyName: return "empty name";
        case ViolationKind::NoEdges: return "no edges";
        case ViolationKind::TooLarge: return "too large";
        case ViolationKind::DuplicateVariable: return "duplicate variable";
        case ViolationKind::DuplicateEdgeName: return "duplicate edge name";
        case ViolationKind::EmptyLabel: return "empty label";
        case ViolationKind::EmptyEdgeType: return "empty edge type";
        case ViolationKind::NonNumericOrdering: return "non-numeric ordering comparison";
        case ViolationKind::UndeclaredVariable: return "undeclared variable";
        case ViolationKind::SelfLoop: return "self-loop";
        case ViolationKind::OrderIndexOutOfRange: return "order index out of range";
        case ViolationKind::CyclicOrder: return "cyclic order";
        case ViolationKind::NonPositiveGap: return "non-positive cluster gap";
        case ViolationKind::NonPositiveWindow: return "non-positive window";
        case ViolationKind::GapExceedsWindow: return "cluster gap exceeds window";
        case ViolationKind::Disconnected: return "not weakly connected";
    }
    return "unknown";
}

std::string ValidationReport::summary() const {
    std::ostringstream out;
    for (std::size_t i = 0; i < violations.size(); ++i) {
        if (i) out << "; ";
        out << to_string(violations[i].kind) << ": " << violations[i].message;
    }
    return out.str();
}

namespace {

void check_predicates(const std::vector<AttributePredicate>& preds, const std::string& subject,
                      std::vector<Violation>& out) {
    for (const auto& p : preds) {
        if (p.cmp != Comparison::Eq && p.cmp != Comparison::Ne && !is_numeric(p.value)) {
            out.push_back({ViolationKind::NonNumericOrdering,
                           "'" + p.attribute + " " + std::string(to_string(p.cmp)) + "' needs a numeric value", subject});
        }
    }
}

std::vector<std::vector<bool>> closure_of(std::size_t m, const std::set<std::pair<std::size_t, std::size_t>>& order) {
    std::vector<std::vector<bool>> reach(m, std::vector<bool>(m, false));
    for (auto [a, b] : order) {
        if (a < m && b < m) reach[a][b] = true;
    }
    for (std::size_t k = 0; k < m; ++k)
        for (std::size_t i = 0; i < m; ++i)
            if (reach[i][k])
                for (std::size_t j = 0; j < m; ++j)
                    if (reach[k][j]) reach[i][j] = true;
    return reach;
}

}// namespace

ValidationReport validate(const QueryGraph& query) {
    std::vector<Violation> out;
    if (query.name.empty()) {
        out.push_back({ViolationKind::EmptyName, "query has no name", ""});
    }
    if (query.edges.empty()) {
        out.push_back({ViolationKind::NoEdges, "query needs at least one edge", ""});
    }
    if (query.vertices.size() > kMaxQueryElements || query.edges.size() > kMaxQueryElements) {
        out.push_back({ViolationKind::TooLarge, "at most 64 vertices and 64 edges are supported", ""});
    }

    std::set<std::string_view> vars;
    for (const auto& v : query.vertices) {
        if (!vars.insert(v.var).second) {
            out.push_back({ViolationKind::DuplicateVariable, "variable '" + v.var + "' declared twice", v.var});
        }
        if (v.var.empty()) {
            out.push_back({ViolationKind::EmptyName, "vertex without a variable name", v.var});
        }
        if (v.label.empty()) {
            out.push_back({ViolationKind::EmptyLabel, "variable '" + v.var + "' has no label", v.var});
        }
        check_predicates(v.predicates, v.var, out);
    }

    std::set<std::string_view> edge_names;
    for (const auto& e : query.edges) {
        if (e.name.empty()) {
            out.push_back({ViolationKind::EmptyName, "edge without a name", e.name});
        } else if (!edge_names.insert(e.name).second) {
            out.push_back({ViolationKind::DuplicateEdgeName, "edge '" + e.name + "' declared twice", e.name});
        }
        if (e.edge_type.empty()) {
            out.push_back({ViolationKind::EmptyEdgeType, "edge '" + e.name + "' has no type", e.name});
        }
        for (const auto* var : {&e.src_var, &e.dst_var}) {
            if (!vars.contains(*var)) {
                out.push_back({ViolationKind::UndeclaredVariable,
                               "edge '" + e.name + "' references undeclared variable '" + *var + "'", e.name});
            }
        }
        if (e.src_var == e.dst_var) {
            out.push_back({ViolationKind::SelfLoop, "edge '" + e.name + "' is a self-loop", e.name});
        }
        check_predicates(e.predicates, e.name, out);
    }

    const std::size_t m = query.edges.size();
    bool indices_ok = true;
    for (auto [a, b] : query.constraints.arrival_order) {
        if (a >= m || b >= m) {
            indices_ok = false;
            out.push_back({ViolationKind::OrderIndexOutOfRange,
                           "order pair (" + std::to_string(a) + ", " + std::to_string(b) + ") out of range", ""});
        }
    }
    if (indices_ok && m <= kMaxQueryElements) {
        auto reach = closure_of(m, query.constraints.arrival_order);
        for (std::size_t i = 0; i < m; ++i) {
            if (reach[i][i]) {
                out.push_back({ViolationKind::CyclicOrder, "arrival order has a cycle through '" + query.edges[i].name + "'",
                               query.edges[i].name});
                break;
            }
        }
    }

    const auto& c = query.constraints;
    if (c.cluster_gap && c.cluster_gap->gap <= 0) {
        out.push_back({ViolationKind::NonPositiveGap, "cluster_gap must be positive", ""});
    }
    if (c.window && *c.window <= 0) {
        out.push_back({ViolationKind::NonPositiveWindow, "window must be positive", ""});
    }
    if (c.cluster_gap && c.window && c.cluster_gap->unit == GapUnit::Time && c.cluster_gap->gap > *c.window) {
        out.push_back({ViolationKind::GapExceedsWindow, "cluster_gap larger than window is vacuous", ""});
    }

    // Weak connectivity over declared vertices.
    if (!query.vertices.empty()) {
        std::vector<std::size_t> parent(query.vertices.size());
        std::iota(parent.begin(), parent.end(), 0);
        auto find = [&](std::size_t x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        for (const auto& e : query.edges) {
            auto s = query.vertex_index(e.src_var);
            auto d = query.vertex_index(e.dst_var);
            if (s && d) parent[find(*s)] = find(*d);
        }
        const std::size_t root = find(0);
        for (std::size_t i = 1; i < query.vertices.size(); ++i) {
            if (find(i) != root) {
                out.push_back({ViolationKind::Disconnected, "pattern is not weakly connected", query.vertices[i].var});
                break;
            }
        }
    }
    return ValidationReport{std::move(out)};
}

std::vector<std::vector<bool>> order_closure(const QueryGraph& query) {
    return closure_of(query.edges.size(), query.constraints.arrival_order);
}

std::set<std::size_t> spawn_eligible_edges(const QueryGraph& query) {
    const auto reach = order_closure(query);
    std::set<std::size_t> out;
    for (std::size_t e = 0; e < query.edges.size(); ++e) {
        bool has_pred = false;
        for (std::size_t x = 0; x < query.edges.size() && !has_pred; ++x) {
            has_pred = reach[x][e];
        }
        if (!has_pred) out.insert(e);
    }
    return out;
}

}// namespace streamsubiso
