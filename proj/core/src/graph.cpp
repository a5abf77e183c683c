#include "aspectra/graph.hpp"

#include <algorithm>

namespace aspectra {

std::string to_string(VertexKind kind) {
    switch (kind) {
    case VertexKind::state: return "state";
    case VertexKind::initial: return "initial";
    case VertexKind::final_state: return "final";
    case VertexKind::config: return "config";
    }
    return "state";
}

VertexKind vertex_kind_from_string(const std::string& s) {
    if (s == "state") return VertexKind::state;
    if (s == "initial") return VertexKind::initial;
    if (s == "final") return VertexKind::final_state;
    if (s == "config") return VertexKind::config;
    throw GraphError("unknown vertex kind: " + s);
}

void Graph::add_vertex(Vertex v) {
    if (v.id.empty()) throw GraphError("vertex id must be nonempty");
    if (vertices_.count(v.id)) throw GraphError("duplicate vertex id: " + v.id);
    if (v.kind == VertexKind::config && v.name().find('|') == std::string::npos)
        throw GraphError("config vertex '" + v.id + "' needs a '|'-separated name");
    vertices_.emplace(v.id, std::move(v));
}

void Graph::add_edge(Edge e) {
    if (e.id.empty()) throw GraphError("edge id must be nonempty");
    if (edges_.count(e.id)) throw GraphError("duplicate edge id: " + e.id);
    if (!vertices_.count(e.src))
        throw GraphError("edge '" + e.id + "' has dangling source: " + e.src);
    if (!vertices_.count(e.tgt))
        throw GraphError("edge '" + e.id + "' has dangling target: " + e.tgt);
    edges_.emplace(e.id, std::move(e));
}

const Vertex& Graph::vertex(const std::string& id) const {
    auto it = vertices_.find(id);
    if (it == vertices_.end()) throw GraphError("no vertex: " + id);
    return it->second;
}

const Edge& Graph::edge(const std::string& id) const {
    auto it = edges_.find(id);
    if (it == edges_.end()) throw GraphError("no edge: " + id);
    return it->second;
}

const Vertex* Graph::find_vertex(const std::string& id) const {
    auto it = vertices_.find(id);
    return it == vertices_.end() ? nullptr : &it->second;
}

const Edge* Graph::find_edge(const std::string& id) const {
    auto it = edges_.find(id);
    return it == edges_.end() ? nullptr : &it->second;
}

std::vector<const Edge*> Graph::edges_incident(const std::string& vertex_id) const {
    std::vector<const Edge*> out;
    for (const auto& [id, e] : edges_)
        if (e.src == vertex_id || e.tgt == vertex_id) out.push_back(&e);
    return out;
}

std::vector<const Vertex*> Graph::vertices_named(const std::string& name) const {
    std::vector<const Vertex*> out;
    for (const auto& [id, v] : vertices_)
        if (v.name() == name) out.push_back(&v);
    return out;
}

static std::string fresh_id(const std::string& hint,
                            const std::map<std::string, Vertex>& vs,
                            const std::map<std::string, Edge>& es,
                            bool vertex) {
    auto taken = [&](const std::string& id) {
        return vertex ? vs.count(id) > 0 : es.count(id) > 0;
    };
    if (!taken(hint)) return hint;
    for (int n = 2;; ++n) {
        std::string candidate = hint + "~" + std::to_string(n);
        if (!taken(candidate)) return candidate;
    }
}

std::string Graph::fresh_vertex_id(const std::string& hint) const {
    return fresh_id(hint.empty() ? "v" : hint, vertices_, edges_, true);
}

std::string Graph::fresh_edge_id(const std::string& hint) const {
    return fresh_id(hint.empty() ? "e" : hint, vertices_, edges_, false);
}

bool Graph::vertices_same(const Graph& o) const {
    if (vertices_.size() != o.vertices_.size()) return false;
    for (const auto& [id, v] : vertices_) {
        const Vertex* w = o.find_vertex(id);
        if (!w || w->kind != v.kind || w->attrs != v.attrs) return false;
    }
    return true;
}

bool Graph::edges_same(const Graph& o) const {
    if (edges_.size() != o.edges_.size()) return false;
    for (const auto& [id, e] : edges_) {
        const Edge* f = o.find_edge(id);
        if (!f || f->src != e.src || f->tgt != e.tgt || f->label != e.label) return false;
    }
    return true;
}

bool is_monomorphism(const Graph& pattern, const Graph& host, const Morphism& m) {
    if (m.vmap.size() != pattern.vertex_count()) return false;
    if (m.emap.size() != pattern.edge_count()) return false;
    std::set<std::string> vimages, eimages;
    for (const auto& [pid, v] : pattern.vertices()) {
        auto it = m.vmap.find(pid);
        if (it == m.vmap.end()) return false;
        const Vertex* h = host.find_vertex(it->second);
        if (!h || h->kind != v.kind || h->attrs != v.attrs) return false;
        if (!vimages.insert(it->second).second) return false;
    }
    for (const auto& [pid, e] : pattern.edges()) {
        auto it = m.emap.find(pid);
        if (it == m.emap.end()) return false;
        const Edge* h = host.find_edge(it->second);
        if (!h || h->label != e.label) return false;
        if (h->src != m.vmap.at(e.src) || h->tgt != m.vmap.at(e.tgt)) return false;
        if (!eimages.insert(it->second).second) return false;
    }
    return true;
}

} // namespace aspectra
