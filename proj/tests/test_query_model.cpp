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

#include <builders.hpp>
#include <streamsubiso/workload.hpp>

#include <gtest/gtest.h>

using namespace streamsubiso;

namespace {

QueryGraph chain(std::size_t edges) {
    QueryGraph q;
    q.name = "chain";
    for (std::size_t i = 0; i <= edges; ++i) q.vertices.push_back({"v" + std::to_string(i), "N", {}});
    for (std::size_t i = 0; i < edges; ++i) {
        q.edges.push_back({"e" + std::to_string(i), "v" + std::to_string(i), "v" + std::to_string(i + 1), "t", {}});
    }
    return q;
}

bool has(const ValidationReport& r, ViolationKind kind) {
    return std::any_of(r.violations.begin(), r.violations.end(), [&](const Violation& v) { return v.kind == kind; });
}

}// namespace

TEST(Predicate, Semantics) {
    Attributes attrs{{"year", std::int64_t{2006}}, {"venue", std::string("ICDM")}, {"score", 2.5}};
    EXPECT_TRUE(evaluate({"year", Comparison::Eq, std::int64_t{2006}}, attrs));
    EXPECT_TRUE(evaluate({"year", Comparison::Ge, std::int64_t{2006}}, attrs));
    EXPECT_FALSE(evaluate({"year", Comparison::Gt, std::int64_t{2006}}, attrs));
    EXPECT_TRUE(evaluate({"year", Comparison::Lt, 2006.5}, attrs));
    EXPECT_TRUE(evaluate({"score", Comparison::Gt, std::int64_t{2}}, attrs));
    EXPECT_TRUE(evaluate({"venue", Comparison::Ne, std::string("KDD")}, attrs));
    EXPECT_FALSE(evaluate({"venue", Comparison::Eq, std::int64_t{1}}, attrs));
    EXPECT_TRUE(evaluate({"venue", Comparison::Ne, std::int64_t{1}}, attrs));
    EXPECT_FALSE(evaluate({"missing", Comparison::Ne, std::int64_t{1}}, attrs));
    EXPECT_FALSE(evaluate({"venue", Comparison::Lt, std::int64_t{1}}, attrs));
}

TEST(Validate, Fig1QueryIsOk) {
    auto q = parse_query(testing_support::kFig1Query);
    EXPECT_TRUE(validate(q).ok()) << validate(q).summary();
    EXPECT_EQ(q.vertices.size(), 4u);
    EXPECT_EQ(q.edges.size(), 3u);
}

TEST(Validate, CyclicOrderRejected) {
    auto q = chain(2);
    q.constraints.arrival_order = {{0, 1}, {1, 0}};
    EXPECT_TRUE(has(validate(q), ViolationKind::CyclicOrder));
}

TEST(Validate, DisconnectedRejected) {
    QueryGraph q;
    q.name = "split";
    for (const char* v : {"a", "b", "c", "d"}) q.vertices.push_back({v, "N", {}});
    q.edges.push_back({"e0", "a", "b", "t", {}});
    q.edges.push_back({"e1", "c", "d", "t", {}});
    EXPECT_TRUE(has(validate(q), ViolationKind::Disconnected));
}

TEST(Validate, StructuralViolations) {
    auto q = chain(1);
    q.name = "";
    q.edges.push_back({"e0", "v0", "v0", "", {}});
    q.edges.push_back({"e2", "v0", "ghost", "t", {}});
    q.vertices.push_back({"v1", "", {}});
    q.constraints.arrival_order = {{0, 7}};
    q.constraints.cluster_gap = ClusterGap{0, GapUnit::Time};
    q.constraints.window = -1;
    auto r = validate(q);
    for (auto kind : {ViolationKind::EmptyName, ViolationKind::DuplicateEdgeName, ViolationKind::SelfLoop,
                      ViolationKind::EmptyEdgeType, ViolationKind::UndeclaredVariable, ViolationKind::DuplicateVariable,
                      ViolationKind::EmptyLabel, ViolationKind::OrderIndexOutOfRange, ViolationKind::NonPositiveGap,
                      ViolationKind::NonPositiveWindow}) {
        EXPECT_TRUE(has(r, kind)) << to_string(kind);
    }
    EXPECT_FALSE(r.summary().empty());
}

TEST(Validate, GapMustNotExceedWindow) {
    auto q = chain(2);
    q.constraints.window = 5;
    q.constraints.cluster_gap = ClusterGap{6, GapUnit::Time};
    EXPECT_TRUE(has(validate(q), ViolationKind::GapExceedsWindow));
    q.constraints.cluster_gap = ClusterGap{6, GapUnit::Updates};
    EXPECT_TRUE(validate(q).ok());
}

TEST(Validate, OrderingComparisonNeedsNumber) {
    auto q = chain(1);
    q.vertices[0].predicates.push_back({"venue", Comparison::Lt, std::string("ICDM")});
    EXPECT_TRUE(has(validate(q), ViolationKind::NonNumericOrdering));
}

TEST(Validate, NoEdgesAndTooLarge) {
    QueryGraph q;
    q.name = "empty";
    q.vertices.push_back({"a", "N", {}});
    EXPECT_TRUE(has(validate(q), ViolationKind::NoEdges));
    EXPECT_TRUE(has(validate(chain(kMaxQueryElements)), ViolationKind::TooLarge));
    EXPECT_TRUE(validate(chain(kMaxQueryElements - 1)).ok());
}

TEST(SpawnEligible, TotalOrderGivesFirstEdge) {
    auto q = parse_query(testing_support::kFig1Query);
    EXPECT_EQ(spawn_eligible_edges(q), (std::set<std::size_t>{0}));
}

TEST(SpawnEligible, UnorderedGivesAll) { EXPECT_EQ(spawn_eligible_edges(chain(3)), (std::set<std::size_t>{0, 1, 2})); }

TEST(SpawnEligible, TwoPredecessorsOfOneEdge) {
    auto q = chain(3);
    q.constraints.arrival_order = {{0, 2}, {1, 2}};
    EXPECT_EQ(spawn_eligible_edges(q), (std::set<std::size_t>{0, 1}));
}

// Property: spawn_eligible_edges equals brute-force minimality over the closure and is never empty;
// validate is idempotent.
TEST(SpawnEligibleProperty, MatchesBruteForceMinimality) {
    std::mt19937_64 rng(seed_from_env(77));
    QueryGenConfig cfg;
    cfg.max_edges = 8;
    cfg.order_probability = 0.5;
    for (int trial = 0; trial < 300; ++trial) {
        auto q = generate_query(cfg, "q", rng);
        auto r1 = validate(q);
        auto r2 = validate(q);
        ASSERT_TRUE(r1.ok()) << r1.summary();
        ASSERT_EQ(r1.violations.size(), r2.violations.size());
        const std::size_t m = q.edges.size();
        // Closure by repeated relaxation, written independently of order_closure.
        std::vector<std::vector<bool>> reach(m, std::vector<bool>(m, false));
        for (auto [a, b] : q.constraints.arrival_order) reach[a][b] = true;
        for (bool changed = true; changed;) {
            changed = false;
            for (std::size_t a = 0; a < m; ++a)
                for (std::size_t b = 0; b < m; ++b)
                    for (std::size_t c = 0; c < m; ++c)
                        if (reach[a][b] && reach[b][c] && !reach[a][c]) reach[a][c] = changed = true;
        }
        ASSERT_EQ(order_closure(q), reach);
        std::set<std::size_t> minimal;
        for (std::size_t e = 0; e < m; ++e) {
            bool has_pred = false;
            for (std::size_t x = 0; x < m; ++x) has_pred = has_pred || reach[x][e];
            if (!has_pred) minimal.insert(e);
        }
        ASSERT_FALSE(minimal.empty());
        ASSERT_EQ(spawn_eligible_edges(q), minimal);
    }
}
