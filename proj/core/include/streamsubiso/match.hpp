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

#include <streamsubiso/types.hpp>

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace streamsubiso {

enum class QueryId : std::uint32_t {};

inline std::uint32_t index_of(QueryId id) { return static_cast<std::uint32_t>(id); }

struct EdgeBinding {
    std::string edge_id;
    Timestamp timestamp = 0;

    auto operator<=>(const EdgeBinding&) const = default;
    bool operator==(const EdgeBinding&) const = default;
};

/// A complete mapping of a query: vertices[i] is the data vertex of query
/// vertex i, edges[e] the data edge of query edge e.
struct Embedding {
    std::vector<std::string> vertices;
    std::vector<EdgeBinding> edges;

    auto operator<=>(const Embedding&) const = default;
    bool operator==(const Embedding&) const = default;
};

struct MatchResult {
    QueryId query{};
    std::string query_name;
    Embedding embedding;
    Timestamp completion_ts = 0;
    Seq emit_seq = 0;

    bool operator==(const MatchResult&) const = default;
};

}// namespace streamsubiso
