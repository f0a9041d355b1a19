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

#include <streamsubiso/query_dsl.hpp>
#include <streamsubiso/replay.hpp>
#include <streamsubiso/stream_io.hpp>
#include <streamsubiso/workload.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace streamsubiso;

namespace {

bool on_off(const std::string& value) { return value == "on"; }

int generate(const std::string& kind, std::size_t count, std::uint64_t seed, std::size_t vertices, const std::string& out_file) {
    std::mt19937_64 rng(seed_from_env(seed));
    std::ofstream file;
    if (!out_file.empty()) file.open(out_file);
    std::ostream& out = out_file.empty() ? std::cout : file;
    if (kind == "stream") {
        StreamGenConfig config;
        config.updates = count;
        config.vertices = vertices;
        for (const auto& u : generate_stream(config, rng)) out << format_stream_record(u) << '\n';
    } else {
        QueryGenConfig config;
        config.order_probability = 0.3;
        for (std::size_t i = 0; i < count; ++i) {
            out << unparse(generate_query(config, "q" + std::to_string(i), rng));
        }
    }
    return out ? 0 : 1;
}

}// namespace

int main(int argc, char** argv) {
    CLI::App app{"Continuous subgraph matching over a timestamped edge stream"};
    app.require_subcommand(1);

    ReplayOptions options;
    std::string pruning = "on";
    std::string dedup = "on";
    std::string gates = "off";
    std::string adapt = "off";
    auto* run = app.add_subcommand("run", "Replay a stream and print matches as they complete");
    run->add_option("--queries", options.queries_file, "Query file")->required();
    run->add_option("--stream", options.stream_file, "Stream file")->required();
    auto* batch = run->add_option("--batch-size", options.batch_size, "Expire and write stats every N records")
                      ->check(CLI::PositiveNumber);
    run->add_option("--epoch", options.epoch, "Expire and write stats whenever ts / T advances")
        ->check(CLI::PositiveNumber)
        ->excludes(batch);
    run->add_option("--ordered-pruning", pruning)->check(CLI::IsMember({"on", "off"}));
    run->add_option("--gates", gates)->check(CLI::IsMember({"off", "auto"}));
    run->add_option("--adapt", adapt)->check(CLI::IsMember({"off", "advisory", "auto"}));
    run->add_option("--adapt-quantile", options.adapt_quantile, "Gap quantile used by --adapt")
        ->check(CLI::Range(0.0, 1.0));
    run->add_option("--dedup", dedup)->check(CLI::IsMember({"on", "off"}));
    run->add_option("--reorder-slack", options.reorder_slack)->check(CLI::NonNegativeNumber);
    run->add_flag("--oracle-check", options.oracle_check, "Compare emissions with the static matcher at the end");
    run->add_option("--stats-out", options.stats_out, "Tab-separated counters per batch");

    std::string bf_queries;
    std::string bf_stream;
    Timestamp as_of = 0;
    auto* backfill = app.add_subcommand("backfill", "Print the matches present at a point in time");
    backfill->add_option("--queries", bf_queries)->required();
    backfill->add_option("--stream", bf_stream)->required();
    backfill->add_option("--as-of", as_of)->required()->check(CLI::NonNegativeNumber);

    std::string kind = "stream";
    std::size_t count = 1000;
    std::uint64_t seed = 1;
    std::size_t vertices = 50;
    std::string out_file;
    auto* gen = app.add_subcommand("generate", "Write a random stream or query file (seeded by STREAMSUBISO_SEED)");
    gen->add_option("kind", kind)->check(CLI::IsMember({"stream", "queries"}));
    gen->add_option("--count", count, "Updates or queries to generate");
    gen->add_option("--seed", seed, "Seed when STREAMSUBISO_SEED is unset");
    gen->add_option("--vertices", vertices)->check(CLI::PositiveNumber);
    gen->add_option("--out", out_file);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitParse;
    }

    if (*run) {
        if (options.adapt_quantile <= 0.0) {
            std::cerr << "--adapt-quantile must lie in (0, 1]\n";
            return kExitParse;
        }
        options.ordered_pruning = on_off(pruning);
        options.dedup = on_off(dedup);
        options.gates = gates == "auto" ? GateMode::Auto : GateMode::Off;
        options.adapt = adapt == "auto" ? AdaptSetting::Auto : adapt == "advisory" ? AdaptSetting::Advisory : AdaptSetting::Off;
        return run_replay(options, std::cout, std::cerr);
    }
    if (*backfill) return run_backfill(bf_queries, bf_stream, as_of, std::cout, std::cerr);
    return generate(kind, count, seed, vertices, out_file);
}
