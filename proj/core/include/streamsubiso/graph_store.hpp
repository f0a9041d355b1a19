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

#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace streamsubiso {

enum class UpdateOp { Insert, Delete };

/// Endpoint of a streamed edge. `attributes` only take effect when the vertex is created.
struct VertexRef {
    std::string id;
    std::string label;
    Attributes attributes;

    bool operator==(const VertexRef&) const = default;
};

/// One timestamped insert or delete of a typed, attributed edge.
struct StreamUpdate {
    UpdateOp op = UpdateOp::Insert;
    std::string edge_id;
    VertexRef src;
    VertexRef dst;
    std::string edge_type;
    Timestamp timestamp = 0;
    Attributes attributes;

    bool operator==(const StreamUpdate&) const = default;
};

struct Vertex {
    std::string id;
    std::string label;
    Attributes attributes;
    Timestamp created_at = 0;

    bool operator==(const Vertex&) const = default;
};

using VertexHandle = std::uint32_t;
using EdgeHandle = std::uint32_t;
inline constexpr VertexHandle kNoVertex = std::numeric_limits<VertexHandle>::max();
inline constexpr EdgeHandle kNoEdge = std::numeric_limits<EdgeHandle>::max();

/// One insertion of an edge. A re-inserted edge id gets a fresh record.
struct EdgeRecord {
    std::string id;
    VertexHandle src = kNoVertex;
    VertexHandle dst = kNoVertex;
    std::string type;
    Timestamp timestamp = 0;
    Seq seq = 0;
    Attributes attributes;
    std::optional<Timestamp> deleted_at;

    [[nodiscard]] bool live() const noexcept { return !deleted_at.has_value(); }
};

struct UpdateReceipt {
    std::size_t vertices_created = 0;
    std::string edge_id;
    EdgeHandle edge = kNoEdge;
    Seq seq = 0;
};

struct SnapshotEdge {
    std::string id;
    std::string src;
    std::string dst;
    std::string type;
    Timestamp timestamp = 0;
    Seq seq = 0;
    Attributes attributes;

    bool operator==(const SnapshotEdge&) const = default;
};

/// Immutable view of the data graph; edges sorted by id.
struct GraphSnapshot {
    std::map<std::string, Vertex, std::less<>> vertices;
    std::vector<SnapshotEdge> edges;
    Timestamp as_of = 0;

    bool operator==(const GraphSnapshot&) const = default;
};

/**
 * The evolving data graph. Vertices are created implicitly by edge references
 * and are never removed; edges may form a multigraph (distinct ids, same
 * endpoints and type). Updates are applied by a single writer in stream order.
 */
class GraphStore {
  public:
    UpdateReceipt apply_update(const StreamUpdate& update);

    /// Edges inserted at time <= as_of and not deleted at time <= as_of.
    [[nodiscard]] GraphSnapshot snapshot(Timestamp as_of = kMaxTimestamp) const;

    [[nodiscard]] std::size_t vertex_count() const noexcept { return vertices_.size(); }
    [[nodiscard]] std::size_t live_edge_count() const noexcept { return live_.size(); }
    [[nodiscard]] Seq update_count() const noexcept { return updates_; }

    [[nodiscard]] const Vertex& vertex(VertexHandle handle) const { return vertices_.at(handle); }
    [[nodiscard]] std::optional<VertexHandle> find_vertex(const std::string& id) const;

    [[nodiscard]] const EdgeRecord& edge(EdgeHandle handle) const { return edges_.at(handle); }
    [[nodiscard]] std::optional<EdgeHandle> find_live_edge(const std::string& id) const;

    // Adjacency and type lists hold every insertion, deleted ones included;
    // callers filter on EdgeRecord::live(). Order is insertion order.
    [[nodiscard]] std::span<const EdgeHandle> out_edges(VertexHandle v) const;
    [[nodiscard]] std::span<const EdgeHandle> in_edges(VertexHandle v) const;
    [[nodiscard]] std::span<const EdgeHandle> edges_of_type(const std::string& type) const;

  private:
    VertexHandle resolve_vertex(const VertexRef& ref, Timestamp ts, std::size_t& created);

    std::vector<Vertex> vertices_;
    std::vector<std::vector<EdgeHandle>> out_;
    std::vector<std::vector<EdgeHandle>> in_;
    std::unordered_map<std::string, VertexHandle> vertex_ids_;
    std::vector<EdgeRecord> edges_;
    std::unordered_map<std::string, EdgeHandle> live_;
    std::unordered_map<std::string, std::vector<EdgeHandle>> by_type_;
    Seq updates_ = 0;
};

}// namespace streamsubiso
