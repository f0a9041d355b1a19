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
#include <streamsubiso/query_dsl.hpp>
#include <streamsubiso/workload.hpp>

#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

using namespace streamsubiso;

namespace {

std::vector<QueryGraph> three_edge_queries(std::size_t count, std::mt19937_64& rng) {
    QueryGenConfig qc;
    qc.min_edges = 3;
    qc.max_edges = 3;
    qc.edge_types = {"t", "u"};
    qc.order_probability = 0.3;
    qc.window_probability = 0.5;
    qc.gap_probability = 1.0;
    qc.max_window = 20;
    std::vector<QueryGraph> out;
    for (std::size_t i = 0; i < count; ++i) out.push_back(generate_query(qc, "q" + std::to_string(i), rng));
    return out;
}

std::vector<StreamUpdate> stream_of(std::size_t updates, std::size_t vertices, std::mt19937_64& rng) {
    StreamGenConfig sc;
    sc.vertices = vertices;
    sc.updates = updates;
    sc.edge_types = {"t", "u"};
    sc.max_step = 1;
    return generate_stream(sc, rng);
}

}// namespace

// Updates per second with range(0) registered queries.
static void BM_ProcessUpdate(benchmark::State& state) {
    std::mt19937_64 rng(7);
    const auto queries = three_edge_queries(static_cast<std::size_t>(state.range(0)), rng);
    const auto stream = stream_of(20000, 300, rng);
    for (auto _ : state) {
        Engine engine;
        for (const auto& q : queries) engine.register_query(q);
        std::size_t emitted = 0;
        for (const auto& u : stream) emitted += engine.process_update(u).size();
        benchmark::DoNotOptimize(emitted);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(stream.size()));
}
BENCHMARK(BM_ProcessUpdate)->Arg(1)->Arg(10)->Arg(50)->Unit(benchmark::kMillisecond);

static void BM_ProcessUpdateUnpruned(benchmark::State& state) {
    std::mt19937_64 rng(7);
    const auto queries = three_edge_queries(10, rng);
    const auto stream = stream_of(20000, 300, rng);
    for (auto _ : state) {
        EngineConfig cfg;
        cfg.ordered_pruning = false;
        Engine engine(cfg);
        for (const auto& q : queries) engine.register_query(q);
        for (const auto& u : stream) benchmark::DoNotOptimize(engine.process_update(u));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(stream.size()));
}
BENCHMARK(BM_ProcessUpdateUnpruned)->Unit(benchmark::kMillisecond);

static void BM_ParseQuery(benchmark::State& state) {
    std::mt19937_64 rng(11);
    QueryGenConfig qc;
    qc.max_edges = 8;
    qc.predicate_probability = 0.5;
    qc.window_probability = 0.5;
    qc.gap_probability = 0.5;
    const auto text = unparse(generate_query(qc, "q", rng));
    for (auto _ : state) benchmark::DoNotOptimize(parse_query(text));
    state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(text.size()));
}
BENCHMARK(BM_ParseQuery);

BENCHMARK_MAIN();
