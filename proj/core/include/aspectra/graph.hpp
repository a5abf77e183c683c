#ifndef ASPECTRA_GRAPH_HPP
#define ASPECTRA_GRAPH_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "aspectra/errors.hpp"

namespace aspectra {

enum class VertexKind { state, initial, final_state, config };

std::string to_string(VertexKind kind);
VertexKind vertex_kind_from_string(const std::string& s);

using AttrMap = std::map<std::string, std::string>;

struct Vertex {
    std::string id;
    VertexKind kind = VertexKind::state;
    AttrMap attrs;

    std::string name() const {
        auto it = attrs.find("name");
        return it == attrs.end() ? std::string() : it->second;
    }
};

struct Edge {
    std::string id;
    std::string src;
    std::string tgt;
    std::string label;
};

/// Typed, attributed, directed multigraph. Element ids are stable and unique
/// per graph; insertion validates endpoints so a graph never holds dangling
/// edges. All analysis operations treat graphs as immutable values.
class Graph {
public:
    void add_vertex(Vertex v);
    void add_edge(Edge e);

    bool has_vertex(const std::string& id) const { return vertices_.count(id) > 0; }
    bool has_edge(const std::string& id) const { return edges_.count(id) > 0; }

    const Vertex& vertex(const std::string& id) const;
    const Edge& edge(const std::string& id) const;
    const Vertex* find_vertex(const std::string& id) const;
    const Edge* find_edge(const std::string& id) const;

    // id-sorted iteration
    const std::map<std::string, Vertex>& vertices() const { return vertices_; }
    const std::map<std::string, Edge>& edges() const { return edges_; }

    std::size_t vertex_count() const { return vertices_.size(); }
    std::size_t edge_count() const { return edges_.size(); }

    std::vector<const Edge*> edges_incident(const std::string& vertex_id) const;
    std::vector<const Vertex*> vertices_named(const std::string& name) const;

    // First vertex id not colliding with existing ones, derived from hint.
    std::string fresh_vertex_id(const std::string& hint) const;
    std::string fresh_edge_id(const std::string& hint) const;

    bool operator==(const Graph& other) const {
        return vertices_same(other) && edges_same(other);
    }

private:
    bool vertices_same(const Graph& o) const;
    bool edges_same(const Graph& o) const;

    std::map<std::string, Vertex> vertices_;
    std::map<std::string, Edge> edges_;
};

/// Injective structure-preserving mapping between graphs, stored as id maps.
/// The source/target graphs are supplied by context at every use site.
struct Morphism {
    std::map<std::string, std::string> vmap;
    std::map<std::string, std::string> emap;

    bool operator==(const Morphism&) const = default;
};

/// Checks that m embeds pattern into host: total on pattern, injective,
/// kind/attr-equal on vertices, label-equal and endpoint-compatible on edges.
bool is_monomorphism(const Graph& pattern, const Graph& host, const Morphism& m);

} // namespace aspectra

#endif
