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

#pragma once

#include <streamsubiso/graph_store.hpp>
#include <streamsubiso/types.hpp>

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace streamsubiso {

/// Uniform fixed-capacity sample of a stream (Vitter's Algorithm R).
template <typename T>
class Reservoir {
  public:
    explicit Reservoir(std::size_t capacity = 1024) : capacity_(capacity) {}

    template <typename Rng>
    void add(const T& value, Rng& rng) {
        ++seen_;
        if (samples_.size() < capacity_) {
            samples_.push_back(value);
            return;
        }
        std::uniform_int_distribution<std::uint64_t> pick(0, seen_ - 1);
        if (auto slot = pick(rng); slot < capacity_) {
            samples_[slot] = value;
        }
    }

    [[nodiscard]] const std::vector<T>& samples() const noexcept { return samples_; }
    [[nodiscard]] std::uint64_t seen() const noexcept { return seen_; }
    [[nodiscard]] std::size_t capacity() const noexcept { return capacity_; }

  private:
    std::size_t capacity_;
    std::uint64_t seen_ = 0;
    std::vector<T> samples_;
};

struct SynopsisConfig {
    double alpha = 0.125;
    std::size_t reservoir_capacity = 1024;
    std::uint64_t seed = 0x5eedULL;
};

struct EdgeTypeStats {
    std::uint64_t count = 0;
    std::optional<Timestamp> last_ts;
    /// Defined once two hits have been seen.
    std::optional<double> ewma_gap;
};

struct PredicateStats {
    std::uint64_t count = 0;
    std::optional<Timestamp> last_ts;
    Reservoir<std::int64_t> gaps;
};

struct PredicateHit {
    std::string_view query;
    std::size_t edge = 0;
};

/**
 * Running statistics of the stream: per edge type an EWMA of inter-arrival
 * gaps, per registered (query, edge) predicate a hit count and a reservoir of
 * gaps between consecutive hits. Every observe() touches only the counters the
 * update hits.
 */
class StreamSynopsis {
  public:
    explicit StreamSynopsis(SynopsisConfig config = {});

    void observe(const StreamUpdate& update, std::span<const PredicateHit> hits = {});

    [[nodiscard]] const EdgeTypeStats* edge_type(std::string_view type) const;
    [[nodiscard]] const PredicateStats* predicate(std::string_view query, std::size_t edge) const;

    /// Gap samples of all predicates of `query`, sorted ascending.
    [[nodiscard]] std::vector<std::int64_t> pooled_gaps(std::string_view query) const;

    /// Nearest-rank quantile (sample ceil(q*n), 1-based) of the pooled gaps; q in (0, 1].
    [[nodiscard]] std::int64_t recommend_cluster_gap(std::string_view query, double quantile) const;

    [[nodiscard]] Timestamp watermark() const noexcept { return watermark_; }
    [[nodiscard]] std::uint64_t total_updates() const noexcept { return total_updates_; }
    /// Counter bumps performed so far; grows with hits, not with history.
    [[nodiscard]] std::uint64_t operation_count() const noexcept { return operations_; }
    [[nodiscard]] const SynopsisConfig& config() const noexcept { return config_; }

  private:
    SynopsisConfig config_;
    std::mt19937_64 rng_;
    std::map<std::string, EdgeTypeStats, std::less<>> types_;
    std::map<std::string, std::map<std::size_t, PredicateStats>, std::less<>> predicates_;
    Timestamp watermark_ = 0;
    std::uint64_t total_updates_ = 0;
    std::uint64_t operations_ = 0;
};

}// namespace streamsubiso
