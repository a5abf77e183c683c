#ifndef ASPECTRA_TEST_HELPERS_HPP
#define ASPECTRA_TEST_HELPERS_HPP

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "aspectra/graph.hpp"
#include "aspectra/io.hpp"

namespace testutil {

using namespace aspectra;

inline std::string fixture(const std::string& name) {
    return std::string(ASPECTRA_FIXTURE_DIR) + "/" + name;
}

inline Vertex sv(const std::string& id, const std::string& name = "") {
    return Vertex{id, VertexKind::state, {{"name", name.empty() ? id : name}}};
}

inline Vertex kv(const std::string& id, VertexKind kind, const std::string& name) {
    return Vertex{id, kind, {{"name", name}}};
}

// Vertex with no attrs at all (anonymous, used by structural tests).
inline Vertex av(const std::string& id) { return Vertex{id, VertexKind::state, {}}; }

inline Edge ed(const std::string& id, const std::string& src, const std::string& tgt,
               const std::string& label) {
    return Edge{id, src, tgt, label};
}

// ---------------------------------------------------------------------------
// Independent oracles, deliberately written against the raw data model rather
// than through the production search code.

namespace detail {

inline std::uint64_t falling_factorial(std::uint64_t m, std::uint64_t k) {
    std::uint64_t out = 1;
    for (std::uint64_t i = 0; i < k; ++i) out *= (m - i);
    return out;
}

inline void count_rec(const Graph& pattern, const Graph& host,
                      const std::vector<const Vertex*>& pvs, std::size_t idx,
                      std::map<std::string, std::string>& vmap,
                      std::set<std::string>& used, std::uint64_t& total) {
    if (idx == pvs.size()) {
        // edge groups by (src,tgt,label): injective assignments multiply
        std::map<std::string, std::uint64_t> pgroups, hgroups;
        for (const auto& [id, e] : pattern.edges())
            pgroups[vmap.at(e.src) + "\x1f" + vmap.at(e.tgt) + "\x1f" + e.label]++;
        for (const auto& [id, e] : host.edges())
            hgroups[e.src + "\x1f" + e.tgt + "\x1f" + e.label]++;
        std::uint64_t ways = 1;
        for (const auto& [key, k] : pgroups) {
            auto it = hgroups.find(key);
            std::uint64_t m = it == hgroups.end() ? 0 : it->second;
            if (m < k) return;
            ways *= falling_factorial(m, k);
        }
        total += ways;
        return;
    }
    const Vertex& pv = *pvs[idx];
    for (const auto& [hid, hv] : host.vertices()) {
        if (used.count(hid)) continue;
        if (hv.kind != pv.kind || hv.attrs != pv.attrs) continue;
        vmap[pv.id] = hid;
        used.insert(hid);
        count_rec(pattern, host, pvs, idx + 1, vmap, used, total);
        used.erase(hid);
        vmap.erase(pv.id);
    }
}

} // namespace detail

inline std::uint64_t brute_force_monomorphism_count(const Graph& pattern,
                                                    const Graph& host) {
    std::vector<const Vertex*> pvs;
    for (const auto& [id, v] : pattern.vertices()) pvs.push_back(&v);
    std::map<std::string, std::string> vmap;
    std::set<std::string> used;
    std::uint64_t total = 0;
    detail::count_rec(pattern, host, pvs, 0, vmap, used, total);
    return total;
}

inline bool brute_force_isomorphic(const Graph& g, const Graph& h) {
    if (g.vertex_count() != h.vertex_count() || g.edge_count() != h.edge_count())
        return false;
    std::vector<const Vertex*> gv;
    std::vector<std::string> hv;
    for (const auto& [id, v] : g.vertices()) gv.push_back(&v);
    for (const auto& [id, v] : h.vertices()) hv.push_back(id);
    std::sort(hv.begin(), hv.end());
    do {
        bool ok = true;
        std::map<std::string, std::string> map;
        for (std::size_t i = 0; i < gv.size() && ok; ++i) {
            const Vertex& a = *gv[i];
            const Vertex& b = h.vertex(hv[i]);
            if (a.kind != b.kind || a.attrs != b.attrs) ok = false;
            map[a.id] = b.id;
        }
        if (ok) {
            std::map<std::string, std::multiset<std::string>> ge, he;
            for (const auto& [id, e] : g.edges())
                ge[map.at(e.src) + "\x1f" + map.at(e.tgt)].insert(e.label);
            for (const auto& [id, e] : h.edges())
                he[e.src + "\x1f" + e.tgt].insert(e.label);
            if (ge == he) return true;
        }
    } while (std::next_permutation(hv.begin(), hv.end()));
    return false;
}

// Small random attributed digraph; multiplicity of names kept low so the
// canonical search stays trivial.
inline Graph random_graph(std::mt19937_64& rng, std::size_t max_vertices) {
    Graph g;
    std::size_t n = 1 + rng() % max_vertices;
    const char* names[] = {"p", "q", "r", "s"};
    const char* labels[] = {"x", "y", "z"};
    for (std::size_t i = 0; i < n; ++i) {
        Vertex v;
        v.id = "v" + std::to_string(i);
        v.kind = (rng() % 4 == 0) ? VertexKind::config : VertexKind::state;
        if (rng() % 3 != 0) v.attrs["name"] = names[rng() % 4];
        if (v.kind == VertexKind::config) v.attrs["name"] = "a|b";
        g.add_vertex(std::move(v));
    }
    std::size_t m = rng() % (2 * n + 1);
    for (std::size_t i = 0; i < m; ++i) {
        Edge e;
        e.id = "e" + std::to_string(i);
        e.src = "v" + std::to_string(rng() % n);
        e.tgt = "v" + std::to_string(rng() % n);
        e.label = labels[rng() % 3];
        g.add_edge(std::move(e));
    }
    return g;
}

inline StateMachine load_model(const std::string& name) {
    return model_from_json(load_json_file(fixture(name)));
}

inline Concern load_concern(const std::string& name) {
    return concern_from_json(load_json_file(fixture(name)));
}

} // namespace testutil

#endif
