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

#include <algorithm>
#include <cmath>

namespace streamsubiso {

StreamSynopsis::StreamSynopsis(SynopsisConfig config) : config_(config), rng_(config.seed) {}

void StreamSynopsis::observe(const StreamUpdate& update, std::span<const PredicateHit> hits) {
    ++total_updates_;
    ++operations_;
    watermark_ = std::max(watermark_, update.timestamp);
    if (update.op != UpdateOp::Insert) return;

    auto type_it = types_.find(update.edge_type);
    if (type_it == types_.end()) type_it = types_.emplace(update.edge_type, EdgeTypeStats{}).first;
    EdgeTypeStats& ts = type_it->second;
    ++ts.count;
    if (ts.last_ts) {
        const double gap = static_cast<double>(update.timestamp - *ts.last_ts);
        ts.ewma_gap = ts.ewma_gap ? config_.alpha * gap + (1.0 - config_.alpha) * *ts.ewma_gap : gap;
    }
    ts.last_ts = update.timestamp;

    for (const auto& hit : hits) {
        ++operations_;
        auto q_it = predicates_.find(hit.query);
        if (q_it == predicates_.end()) q_it = predicates_.emplace(std::string(hit.query), std::map<std::size_t, PredicateStats>{}).first;
        auto [p_it, fresh] = q_it->second.try_emplace(hit.edge, PredicateStats{0, std::nullopt,
                                                                           Reservoir<std::int64_t>(config_.reservoir_capacity)});
        PredicateStats& ps = p_it->second;
        ++ps.count;
        if (ps.last_ts) ps.gaps.add(update.timestamp - *ps.last_ts, rng_);
        ps.last_ts = update.timestamp;
    }
}

const EdgeTypeStats* StreamSynopsis::edge_type(std::string_view type) const {
    auto it = types_.find(type);
    return it == types_.end() ? nullptr : &it->second;
}

const PredicateStats* StreamSynopsis::predicate(std::string_view query, std::size_t edge) const {
    auto q_it = predicates_.find(query);
    if (q_it == predicates_.end()) return nullptr;
    auto p_it = q_it->second.find(edge);
    return p_it == q_it->second.end() ? nullptr : &p_it->second;
}

std::vector<std::int64_t> StreamSynopsis::pooled_gaps(std::string_view query) const {
    std::vector<std::int64_t> out;
    if (auto q_it = predicates_.find(query); q_it != predicates_.end()) {
        for (const auto& [edge, ps] : q_it->second) {
            out.insert(out.end(), ps.gaps.samples().begin(), ps.gaps.samples().end());
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::int64_t StreamSynopsis::recommend_cluster_gap(std::string_view query, double quantile) const {
    if (!(quantile > 0.0 && quantile <= 1.0)) {
        throw std::invalid_argument("quantile must lie in (0, 1]");
    }
    const auto samples = pooled_gaps(query);
    if (samples.empty()) {
        throw Error(ErrorCode::InsufficientData, "no gap samples for query '" + std::string(query) + "'");
    }
    // The epsilon keeps products such as 0.3 * 10 from rounding up past the exact rank.
    auto rank = static_cast<std::size_t>(std::ceil(quantile * static_cast<double>(samples.size()) - 1e-9));
    rank = std::clamp<std::size_t>(rank, 1, samples.size());
    return samples[rank - 1];
}

}// namespace streamsubiso
