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

#include <algorithm>

namespace streamsubiso {

namespace {

void check_label(const std::vector<Vertex>& vertices, const std::unordered_map<std::string, VertexHandle>& ids,
                 const VertexRef& ref) {
    if (ref.id.empty()) {
        throw Error(ErrorCode::InvalidUpdate, "empty vertex id");
    }
    if (auto it = ids.find(ref.id); it != ids.end() && vertices[it->second].label != ref.label) {
        throw Error(ErrorCode::LabelConflict, "vertex '" + ref.id + "' has label '" + vertices[it->second].label
                                                  + "', referenced as '" + ref.label + "'");
    }
}

}// namespace

std::optional<VertexHandle> GraphStore::find_vertex(const std::string& id) const {
    if (auto it = vertex_ids_.find(id); it != vertex_ids_.end()) {
        return it->second;
    }
    return std::nullopt;
}

std::optional<EdgeHandle> GraphStore::find_live_edge(const std::string& id) const {
    if (auto it = live_.find(id); it != live_.end()) {
        return it->second;
    }
    return std::nullopt;
}

std::span<const EdgeHandle> GraphStore::out_edges(VertexHandle v) const { return out_.at(v); }

std::span<const EdgeHandle> GraphStore::in_edges(VertexHandle v) const { return in_.at(v); }

std::span<const EdgeHandle> GraphStore::edges_of_type(const std::string& type) const {
    if (auto it = by_type_.find(type); it != by_type_.end()) {
        return it->second;
    }
    return {};
}

VertexHandle GraphStore::resolve_vertex(const VertexRef& ref, Timestamp ts, std::size_t& created) {
    if (auto it = vertex_ids_.find(ref.id); it != vertex_ids_.end()) {
        return it->second;
    }
    auto handle = static_cast<VertexHandle>(vertices_.size());
    vertices_.push_back(Vertex{ref.id, ref.label, ref.attributes, ts});
    out_.emplace_back();
    in_.emplace_back();
    vertex_ids_.emplace(ref.id, handle);
    ++created;
    return handle;
}

UpdateReceipt GraphStore::apply_update(const StreamUpdate& update) {
    if (update.timestamp < 0) {
        throw Error(ErrorCode::InvalidUpdate, "negative timestamp for edge '" + update.edge_id + "'");
    }
    if (update.edge_id.empty()) {
        throw Error(ErrorCode::InvalidUpdate, "empty edge id");
    }

    UpdateReceipt receipt;
    receipt.edge_id = update.edge_id;

    if (update.op == UpdateOp::Delete) {
        auto it = live_.find(update.edge_id);
        if (it == live_.end()) {
            throw Error(ErrorCode::UnknownEdgeId, "delete of unknown edge '" + update.edge_id + "'");
        }
        receipt.edge = it->second;
        edges_[it->second].deleted_at = update.timestamp;
        live_.erase(it);
        receipt.seq = ++updates_;
        return receipt;
    }

    if (live_.contains(update.edge_id)) {
        throw Error(ErrorCode::DuplicateEdgeId, "edge '" + update.edge_id + "' is already live");
    }
    // Validate both endpoints before mutating anything so a failed update leaves no trace.
    check_label(vertices_, vertex_ids_, update.src);
    check_label(vertices_, vertex_ids_, update.dst);
    if (update.src.id == update.dst.id && update.src.label != update.dst.label) {
        throw Error(ErrorCode::LabelConflict, "self-loop on '" + update.src.id + "' with two labels");
    }

    const VertexHandle src = resolve_vertex(update.src, update.timestamp, receipt.vertices_created);
    const VertexHandle dst = resolve_vertex(update.dst, update.timestamp, receipt.vertices_created);

    auto handle = static_cast<EdgeHandle>(edges_.size());
    receipt.seq = ++updates_;
    edges_.push_back(EdgeRecord{update.edge_id, src, dst, update.edge_type, update.timestamp, receipt.seq,
                                update.attributes, std::nullopt});
    live_.emplace(update.edge_id, handle);
    out_[src].push_back(handle);
    in_[dst].push_back(handle);
    by_type_[update.edge_type].push_back(handle);
    receipt.edge = handle;
    return receipt;
}

GraphSnapshot GraphStore::snapshot(Timestamp as_of) const {
    GraphSnapshot snap;
    snap.as_of = as_of;
    for (const auto& v : vertices_) {
        if (v.created_at <= as_of) {
            snap.vertices.emplace(v.id, v);
        }
    }
    for (const auto& e : edges_) {
        if (e.timestamp > as_of || (e.deleted_at && *e.deleted_at <= as_of)) {
            continue;
        }
        const auto& src = vertices_[e.src];
        const auto& dst = vertices_[e.dst];
        // Endpoints exist by construction unless the stream was not time ordered.
        snap.vertices.try_emplace(src.id, src);
        snap.vertices.try_emplace(dst.id, dst);
        snap.edges.push_back(SnapshotEdge{e.id, src.id, dst.id, e.type, e.timestamp, e.seq, e.attributes});
    }
    // An id can only be live once at any instant, so ids are unique here.
    std::sort(snap.edges.begin(), snap.edges.end(),
              [](const SnapshotEdge& a, const SnapshotEdge& b) { return a.id < b.id; });
    return snap;
}

}// namespace streamsubiso
