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

#include <streamsubiso/replay.hpp>

#include <streamsubiso/adaptive.hpp>
#include <streamsubiso/dispatch.hpp>
#include <streamsubiso/engine.hpp>
#include <streamsubiso/oracle.hpp>
#include <streamsubiso/query_dsl.hpp>
#include <streamsubiso/stream_io.hpp>

#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace streamsubiso {

namespace {

struct Inputs {
    std::vector<QueryGraph> queries;
    std::vector<StreamLine> stream;
};

std::optional<std::string> slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Returns an exit code on failure.
std::optional<int> load(const std::string& queries_file, const std::string& stream_file, Inputs& inputs,
                        std::ostream& err) {
    auto text = slurp(queries_file);
    if (!text) {
        err << queries_file << ": cannot open file\n";
        return kExitParse;
    }
    try {
        inputs.queries = parse_queries(*text);
    } catch (const ParseError& e) {
        err << queries_file << ':' << e.what() << '\n';
        return kExitParse;
    }
    std::ifstream in(stream_file, std::ios::binary);
    if (!in) {
        err << stream_file << ": cannot open file\n";
        return kExitParse;
    }
    try {
        inputs.stream = read_stream(in);
    } catch (const ParseError& e) {
        err << stream_file << ':' << e.what() << '\n';
        return kExitParse;
    }
    return std::nullopt;
}

void report_stream_error(const std::string& stream_file, const Error& e, std::ostream& err) {
    err << stream_file << ':';
    if (e.origin()) err << *e.origin() << ':';
    err << ' ' << to_string(e.code()) << ": " << e.what() << '\n';
}

std::string describe(const QueryGraph& q, const Embedding& emb) {
    MatchResult r{QueryId{}, q.name, emb, 0, 0};
    return format_result_record(q, r);
}

int oracle_check(const Engine& engine, const std::vector<std::set<Embedding>>& emitted, std::ostream& err) {
    const GraphSnapshot snap = engine.graph().snapshot();
    std::map<std::string, const SnapshotEdge*, std::less<>> live;
    for (const auto& e : snap.edges) live.emplace(e.id, &e);

    bool ok = true;
    for (std::size_t qi = 0; qi < engine.query_count(); ++qi) {
        const QueryGraph& q = engine.query(static_cast<QueryId>(qi));
        auto expected_list = find_all_matches_temporal_sequenced(snap, q);
        std::set<Embedding> expected(expected_list.begin(), expected_list.end());
        std::set<Embedding> actual;
        for (const Embedding& emb : emitted[qi]) {
            std::vector<Seq> seqs;
            bool alive = true;
            for (const auto& b : emb.edges) {
                auto it = live.find(b.edge_id);
                if (it == live.end() || it->second->timestamp != b.timestamp) {
                    alive = false;
                    break;
                }
                seqs.push_back(it->second->seq);
            }
            // Matches over since-deleted edges are not in the final snapshot.
            if (!alive) continue;
            if (!engine.config().ordered_pruning && !satisfies_temporal(q, emb, &seqs, true)) continue;
            actual.insert(emb);
        }
        std::size_t shown = 0;
        for (const auto& emb : expected) {
            if (!actual.contains(emb)) {
                ok = false;
                if (shown++ < 10) err << "oracle-check: missing\t" << describe(q, emb) << '\n';
            }
        }
        for (const auto& emb : actual) {
            if (!expected.contains(emb)) {
                ok = false;
                if (shown++ < 10) err << "oracle-check: unexpected\t" << describe(q, emb) << '\n';
            }
        }
    }
    if (!ok) return kExitOracle;
    err << "oracle-check: ok\n";
    return kExitOk;
}

}// namespace

int run_replay(const ReplayOptions& options, std::ostream& out, std::ostream& err) {
    Inputs inputs;
    if (auto code = load(options.queries_file, options.stream_file, inputs, err)) return *code;

    EngineConfig config;
    config.ordered_pruning = options.ordered_pruning;
    config.dedup = options.dedup;
    config.reorder_slack = options.reorder_slack;
    Engine engine(config);
    try {
        for (auto& q : inputs.queries) engine.register_query(q);
    } catch (const Error& e) {
        err << options.queries_file << ": " << e.what() << '\n';
        return kExitParse;
    }
    if (options.gates == GateMode::Auto) {
        auto gates = find_shared_gates(inputs.queries, nullptr);
        for (const auto& q : inputs.queries) {
            auto it = gates.find(q.name);
            if (it == gates.end() || it->second.empty()) continue;
            const auto& best = it->second.front();
            engine.set_spawn_gate(*engine.find_query(q.name), std::set<std::size_t>(best.edges.begin(), best.edges.end()));
        }
    }

    std::ofstream stats;
    if (options.stats_out) {
        stats.open(*options.stats_out);
        if (!stats) {
            err << *options.stats_out << ": cannot open for writing\n";
            return kExitParse;
        }
        stats << "epoch\tupdates\tlive_partials\tpeak_partials\temitted\texpired\tpredicate_evals\n";
    }

    std::vector<std::set<Embedding>> emitted(engine.query_count());
    auto print = [&](const std::vector<MatchResult>& results) {
        for (const auto& r : results) {
            out << format_result_record(engine.query(r.query), r) << '\n';
            if (options.oracle_check) emitted[index_of(r.query)].insert(r.embedding);
        }
    };

    std::uint64_t epoch_index = 0;
    std::optional<Seq> boundary_seq;
    auto boundary = [&] {
        boundary_seq = engine.sequence();
        engine.expire(engine.now(), engine.sequence());
        if (options.adapt != AdaptSetting::Off) {
            const auto mode = options.adapt == AdaptSetting::Auto ? AdaptMode::Auto : AdaptMode::Advisory;
            for (std::size_t qi = 0; qi < engine.query_count(); ++qi) {
                const auto id = static_cast<QueryId>(qi);
                try {
                    auto rec = apply_recommendation(engine, id, options.adapt_quantile, mode);
                    err << "adapt\t" << engine.query(id).name << '\t'
                        << (rec.old_gap ? std::to_string(rec.old_gap->gap) + (rec.old_gap->unit == GapUnit::Time ? "" : " updates")
                                        : std::string("unset"))
                        << '\t' << rec.new_gap << '\t' << (rec.applied ? "applied" : "advisory") << '\n';
                } catch (const Error& e) {
                    if (e.code() != ErrorCode::InsufficientData) throw;
                }
            }
        }
        if (stats.is_open()) {
            const auto s = engine.stats();
            stats << epoch_index << '\t' << s.updates << '\t' << s.live_total << '\t' << s.peak_live << '\t' << s.emitted << '\t'
                  << s.expired << '\t' << s.predicate_evals << '\n';
        }
        ++epoch_index;
    };

    try {
        std::uint64_t in_batch = 0;
        std::optional<Timestamp> current_epoch;
        for (const auto& rec : inputs.stream) {
            if (options.epoch) {
                const Timestamp e = rec.update.timestamp / *options.epoch;
                if (current_epoch && e > *current_epoch) {
                    boundary();
                }
                current_epoch = current_epoch ? std::max(*current_epoch, e) : e;
            }
            print(engine.process_update(rec.update, rec.line));
            if (options.batch_size && ++in_batch == *options.batch_size) {
                boundary();
                in_batch = 0;
            }
        }
        print(engine.flush());
        if (boundary_seq != engine.sequence()) boundary();
    } catch (const Error& e) {
        out.flush();
        report_stream_error(options.stream_file, e, err);
        return kExitStream;
    }
    out.flush();

    if (options.oracle_check) return oracle_check(engine, emitted, err);
    return kExitOk;
}

int run_backfill(const std::string& queries_file, const std::string& stream_file, Timestamp as_of, std::ostream& out,
                 std::ostream& err) {
    if (as_of < 0) {
        err << "backfill: as_of must be non-negative\n";
        return kExitParse;
    }
    Inputs inputs;
    if (auto code = load(queries_file, stream_file, inputs, err)) return *code;
    GraphStore store;
    try {
        for (const auto& rec : inputs.stream) {
            try {
                store.apply_update(rec.update);
            } catch (const Error& e) {
                throw Error(e.code(), e.what(), rec.line);
            }
        }
    } catch (const Error& e) {
        report_stream_error(stream_file, e, err);
        return kExitStream;
    }
    const GraphSnapshot snap = store.snapshot(as_of);
    for (std::size_t qi = 0; qi < inputs.queries.size(); ++qi) {
        const QueryGraph& q = inputs.queries[qi];
        for (const auto& emb : find_all_matches_temporal_sequenced(snap, q)) {
            MatchResult r{static_cast<QueryId>(qi), q.name, emb, 0, 0};
            for (const auto& b : emb.edges) r.completion_ts = std::max(r.completion_ts, b.timestamp);
            out << format_result_record(q, r) << '\n';
        }
    }
    return kExitOk;
}

}// namespace streamsubiso
