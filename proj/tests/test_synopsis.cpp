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

#include <streamsubiso/synopsis.hpp>

#include <builders.hpp>
#include <streamsubiso/adaptive.hpp>
#include <streamsubiso/workload.hpp>

#include <gtest/gtest.h>

using namespace streamsubiso;
using testing_support::ins;

namespace {

StreamUpdate at(Timestamp ts, const std::string& type = "authored") {
    static int n = 0;
    return ins("s" + std::to_string(n++), "a", "Author", type, "p", "Paper", ts);
}

void hit(StreamSynopsis& s, Timestamp ts, std::size_t edge = 0) {
    PredicateHit h{"q", edge};
    s.observe(at(ts), std::span(&h, 1));
}

QueryGraph chain2() {
    return parse_query("query c { vertex a: N; vertex b: N; vertex c: N; edge x: a -t-> b; edge y: b -t-> c; }");
}

}// namespace

TEST(Synopsis, FirstUpdateRecordsNoGap) {
    StreamSynopsis s;
    s.observe(at(5));
    ASSERT_NE(s.edge_type("authored"), nullptr);
    EXPECT_EQ(s.edge_type("authored")->count, 1u);
    EXPECT_FALSE(s.edge_type("authored")->ewma_gap.has_value());
    EXPECT_EQ(s.total_updates(), 1u);
    EXPECT_EQ(s.watermark(), 5);
}

TEST(Synopsis, SingleGapSeedsEwma) {
    StreamSynopsis s;
    hit(s, 2);
    hit(s, 6);
    EXPECT_DOUBLE_EQ(*s.edge_type("authored")->ewma_gap, 4.0);
    EXPECT_EQ(s.predicate("q", 0)->gaps.samples(), (std::vector<std::int64_t>{4}));
}

TEST(Synopsis, EwmaRecurrence) {
    SynopsisConfig cfg;
    cfg.alpha = 0.5;
    StreamSynopsis s(cfg);
    for (Timestamp t : {0, 2, 4}) s.observe(at(t));
    // ewma <- alpha * gap + (1 - alpha) * ewma, seeded by the first gap.
    double ewma = 2.0;
    ewma = 0.5 * 2.0 + 0.5 * ewma;
    EXPECT_DOUBLE_EQ(*s.edge_type("authored")->ewma_gap, ewma);
    EXPECT_DOUBLE_EQ(ewma, 2.0);

    StreamSynopsis d;
    for (Timestamp t : {0, 8, 10}) d.observe(at(t));
    EXPECT_DOUBLE_EQ(*d.edge_type("authored")->ewma_gap, 0.125 * 2.0 + 0.875 * 8.0);
}

TEST(Synopsis, NoSamplesIsInsufficientData) {
    StreamSynopsis s;
    try {
        (void)s.recommend_cluster_gap("q", 0.5);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::InsufficientData);
    }
}

TEST(Synopsis, NearestRankQuantile) {
    StreamSynopsis s;
    for (Timestamp t : {0, 2, 6, 12, 20}) hit(s, t);
    EXPECT_EQ(s.pooled_gaps("q"), (std::vector<std::int64_t>{2, 4, 6, 8}));
    EXPECT_EQ(s.recommend_cluster_gap("q", 0.95), 8);
    EXPECT_EQ(s.recommend_cluster_gap("q", 0.5), 4);
    EXPECT_EQ(s.recommend_cluster_gap("q", 1.0), 8);
    EXPECT_EQ(s.recommend_cluster_gap("q", 0.01), 2);
    EXPECT_THROW((void)s.recommend_cluster_gap("q", 0.0), std::invalid_argument);
    EXPECT_THROW((void)s.recommend_cluster_gap("q", 1.5), std::invalid_argument);
}

TEST(Synopsis, QuantileRankIsExactForDecimalProducts) {
    StreamSynopsis s;
    for (Timestamp t = 0, g = 1; g <= 11; t += g, ++g) hit(s, t);
    ASSERT_EQ(s.pooled_gaps("q").size(), 10u);
    // ceil(0.3 * 10) = 3 even though 0.3 * 10 evaluates above 3 in binary floating point.
    EXPECT_EQ(s.recommend_cluster_gap("q", 0.3), 3);
    EXPECT_EQ(s.recommend_cluster_gap("q", 0.7), 7);
}

TEST(Synopsis, PoolsAcrossPredicates) {
    StreamSynopsis s;
    hit(s, 0, 0);
    hit(s, 10, 0);
    hit(s, 11, 1);
    hit(s, 14, 1);
    EXPECT_EQ(s.pooled_gaps("q"), (std::vector<std::int64_t>{3, 10}));
}

TEST(Synopsis, ReservoirBoundedAndOperationCountLinear) {
    SynopsisConfig cfg;
    cfg.reservoir_capacity = 16;
    StreamSynopsis s(cfg);
    std::uint64_t hits = 0;
    for (Timestamp t = 0; t < 5000; ++t) {
        std::vector<PredicateHit> h;
        for (std::size_t e = 0; e < static_cast<std::size_t>(t % 3); ++e) h.push_back({"q", e});
        hits += h.size();
        s.observe(at(t, t % 2 ? "a" : "b"), h);
    }
    for (std::size_t e = 0; e < 2; ++e) {
        EXPECT_LE(s.predicate("q", e)->gaps.samples().size(), 16u);
        EXPECT_EQ(s.predicate("q", e)->gaps.seen() + 1, s.predicate("q", e)->count);
    }
    EXPECT_EQ(s.operation_count(), 5000u + hits);
}

TEST(Adaptive, AdvisoryLeavesEngineUnchanged) {
    Engine engine;
    auto id = engine.register_query(chain2());
    for (int i = 0; i < 5; ++i) {
        engine.process_update(ins("e" + std::to_string(i), "v" + std::to_string(i), "N", "t", "v" + std::to_string(i + 1), "N", i * 3));
    }
    auto rec = apply_recommendation(engine, id, 0.95, AdaptMode::Advisory);
    EXPECT_FALSE(rec.applied);
    EXPECT_EQ(rec.new_gap, 3);
    EXPECT_FALSE(rec.old_gap.has_value());
    EXPECT_FALSE(engine.query(id).constraints.cluster_gap.has_value());
}

TEST(Adaptive, AutoSetsGapAndLaterExpiryUsesIt) {
    Engine engine;
    auto id = engine.register_query(chain2());
    // Hits on x/y at 0, 2, 6, 12, 20 give gaps {2, 4, 6, 8} per predicate.
    Timestamp ts[] = {0, 2, 6, 12, 20};
    for (int i = 0; i < 5; ++i) {
        engine.process_update(ins("e" + std::to_string(i), "u" + std::to_string(i), "N", "t", "w" + std::to_string(i), "N", ts[i]));
    }
    EXPECT_EQ(recommend_cluster_gap(engine, id, 0.95), 8);
    const auto live_before = engine.partials(id).size();
    auto rec = apply_recommendation(engine, id, 0.95, AdaptMode::Auto);
    EXPECT_TRUE(rec.applied);
    EXPECT_EQ(rec.new_gap, 8);
    EXPECT_EQ(engine.query(id).constraints.cluster_gap, (ClusterGap{8, GapUnit::Time}));
    EXPECT_EQ(engine.partials(id).size(), live_before);
    // Singletons last touched at 0, 2 and 6 are stale at 20; those from 12 go at 21.
    EXPECT_EQ(engine.expire(20, 5), 6u);
    EXPECT_EQ(engine.partials(id).size(), 4u);
    EXPECT_EQ(engine.expire(21, 5), 2u);
    for (const auto& p : engine.partials(id)) EXPECT_EQ(p.last_ts, 20);
}

TEST(Adaptive, AutoWithoutDataLeavesGapUnchanged) {
    Engine engine;
    auto q = chain2();
    q.constraints.cluster_gap = ClusterGap{5, GapUnit::Time};
    auto id = engine.register_query(q);
    try {
        apply_recommendation(engine, id, 0.5, AdaptMode::Auto);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::InsufficientData);
    }
    EXPECT_EQ(engine.query(id).constraints.cluster_gap, (ClusterGap{5, GapUnit::Time}));
}

// Property: a smaller gap never leaves more live partials at any step.
TEST(AdaptiveProperty, ShrinkingGapIsMonotone) {
    for (std::uint64_t trial = 0; trial < 20; ++trial) {
        std::mt19937_64 rng(seed_from_env(271) + trial);
        StreamGenConfig sc;
        sc.vertices = 10;
        sc.updates = 300;
        sc.labels = {"N"};
        sc.max_step = 3;
        auto stream = generate_stream(sc, rng);
        auto q = parse_query("query c { vertex a: N; vertex b: N; vertex c: N; vertex d: N;"
                             " edge x: a -t-> b; edge y: b -t-> c; edge z: c -t-> d; }");
        std::vector<std::unique_ptr<Engine>> engines;
        for (std::int64_t gap : {12, 6, 3, 1}) {
            auto e = std::make_unique<Engine>();
            auto qq = q;
            qq.constraints.cluster_gap = ClusterGap{gap, GapUnit::Time};
            e->register_query(qq);
            engines.push_back(std::move(e));
        }
        for (const auto& u : stream) {
            std::size_t previous = SIZE_MAX;
            for (auto& e : engines) {
                e->process_update(u);
                const auto live = e->stats().live_total;
                ASSERT_LE(live, previous);
                previous = live;
            }
        }
    }
}
