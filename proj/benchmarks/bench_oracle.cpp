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


#include <streamsubiso/graph_store.hpp>
#include <streamsubiso/oracle.hpp>
#include <streamsubiso/workload.hpp>

#include <benchmark/benchmark.h>

#include <random>

using namespace streamsubiso;

// Static backtracking over a snapshot of range(0) edges.
static void BM_OracleTemporal(benchmark::State& state) {
    std::mt19937_64 rng(3);
    StreamGenConfig sc;
    sc.vertices = 50;
    sc.updates = static_cast<std::size_t>(state.range(0));
    GraphStore store;
    for (const auto& u : generate_stream(sc, rng)) store.apply_update(u);
    const auto snapshot = store.snapshot();
    QueryGenConfig qc;
    qc.min_edges = 3;
    qc.max_edges = 3;
    qc.order_probability = 0.5;
    const auto query = generate_query(qc, "q", rng);
    for (auto _ : state) benchmark::DoNotOptimize(find_all_matches_temporal(snapshot, query));
}
BENCHMARK(BM_OracleTemporal)->Arg(100)->Arg(200)->Arg(400)->Unit(benchmark::kMicrosecond);

static void BM_Snapshot(benchmark::State& state) {
    std::mt19937_64 rng(5);
    StreamGenConfig sc;
    sc.vertices = 1000;
    sc.updates = static_cast<std::size_t>(state.range(0));
    sc.delete_probability = 0.1;
    GraphStore store;
    for (const auto& u : generate_stream(sc, rng)) store.apply_update(u);
    for (auto _ : state) benchmark::DoNotOptimize(store.snapshot());
}
BENCHMARK(BM_Snapshot)->Arg(1000)->Arg(10000)->Unit(benchmark::kMicrosecond);
