#include "aspectra/matching.hpp"

#include <algorithm>

namespace aspectra {

namespace {

struct Searcher {
    const Graph& pattern;
    const Graph& host;
    std::size_t limit;

    std::vector<std::string> pvids;              // pattern vertex ids, sorted
    std::vector<std::string> peids;              // pattern edge ids, sorted
    std::map<std::string, std::string> vmap;
    std::set<std::string> vused;
    std::map<std::string, std::string> seed_emap;
    std::vector<Morphism> results;

    Searcher(const Graph& p, const Graph& h, std::size_t lim)
        : pattern(p), host(h), limit(lim) {
        for (const auto& [id, v] : p.vertices()) pvids.push_back(id);
        for (const auto& [id, e] : p.edges()) peids.push_back(id);
    }

    bool done() const { return limit != 0 && results.size() >= limit; }

    // Pattern edges with both endpoints assigned must have at least one
    // compatible host edge; exact multiplicities are settled in edge_assign.
    bool edges_feasible() const {
        for (const auto& [id, e] : pattern.edges()) {
            auto s = vmap.find(e.src);
            auto t = vmap.find(e.tgt);
            if (s == vmap.end() || t == vmap.end()) continue;
            bool any = false;
            for (const auto& [hid, he] : host.edges())
                if (he.src == s->second && he.tgt == t->second && he.label == e.label) {
                    any = true;
                    break;
                }
            if (!any) return false;
        }
        return true;
    }

    void assign_vertices(std::size_t idx) {
        if (done()) return;
        if (idx == pvids.size()) {
            Morphism m;
            m.vmap = vmap;
            m.emap = seed_emap;
            edge_assign(0, m);
            return;
        }
        const std::string& pid = pvids[idx];
        if (vmap.count(pid)) { // seeded
            assign_vertices(idx + 1);
            return;
        }
        const Vertex& pv = pattern.vertex(pid);
        for (const auto& [hid, hv] : host.vertices()) {
            if (done()) return;
            if (vused.count(hid)) continue;
            if (hv.kind != pv.kind || hv.attrs != pv.attrs) continue;
            vmap[pid] = hid;
            vused.insert(hid);
            if (edges_feasible()) assign_vertices(idx + 1);
            vused.erase(hid);
            vmap.erase(pid);
        }
    }

    void edge_assign(std::size_t idx, Morphism& m) {
        if (done()) return;
        if (idx == peids.size()) {
            results.push_back(m);
            return;
        }
        const std::string& pid = peids[idx];
        if (m.emap.count(pid)) {
            edge_assign(idx + 1, m);
            return;
        }
        const Edge& pe = pattern.edge(pid);
        const std::string& hs = m.vmap.at(pe.src);
        const std::string& ht = m.vmap.at(pe.tgt);
        for (const auto& [hid, he] : host.edges()) {
            if (he.src != hs || he.tgt != ht || he.label != pe.label) continue;
            bool taken = false;
            for (const auto& [k, v] : m.emap)
                if (v == hid) { taken = true; break; }
            if (taken) continue;
            m.emap[pid] = hid;
            edge_assign(idx + 1, m);
            m.emap.erase(pid);
            if (done()) return;
        }
    }
};

bool install_seed(const Graph& pattern, const Graph& host, const Morphism& seed,
                  Searcher& s) {
    for (const auto& [pid, hid] : seed.vmap) {
        const Vertex* pv = pattern.find_vertex(pid);
        const Vertex* hv = host.find_vertex(hid);
        if (!pv || !hv || pv->kind != hv->kind || pv->attrs != hv->attrs) return false;
        if (s.vused.count(hid)) return false;
        s.vmap[pid] = hid;
        s.vused.insert(hid);
    }
    std::set<std::string> eimages;
    for (const auto& [pid, hid] : seed.emap) {
        const Edge* pe = pattern.find_edge(pid);
        const Edge* he = host.find_edge(hid);
        if (!pe || !he || pe->label != he->label) return false;
        auto ms = s.vmap.find(pe->src);
        auto mt = s.vmap.find(pe->tgt);
        if (ms == s.vmap.end() || mt == s.vmap.end()) return false;
        if (he->src != ms->second || he->tgt != mt->second) return false;
        if (!eimages.insert(hid).second) return false;
        s.seed_emap[pid] = hid;
    }
    return true;
}

} // namespace

std::vector<Morphism> find_monomorphisms(const Graph& pattern, const Graph& host,
                                         const MatchOptions& opts) {
    Searcher s(pattern, host, opts.limit);
    if (opts.seed && !install_seed(pattern, host, *opts.seed, s)) return {};
    if (!s.edges_feasible()) return {};
    s.assign_vertices(0);
    return s.results;
}

std::optional<Morphism> is_isomorphic(const Graph& g, const Graph& h) {
    if (g.vertex_count() != h.vertex_count() || g.edge_count() != h.edge_count())
        return std::nullopt;
    auto sig = [](const Graph& x) {
        std::vector<std::string> vs, es;
        for (const auto& [id, v] : x.vertices()) {
            std::string s = to_string(v.kind);
            for (const auto& [k, val] : v.attrs) s += "\x1f" + k + "=" + val;
            vs.push_back(s);
        }
        for (const auto& [id, e] : x.edges()) es.push_back(e.label);
        std::sort(vs.begin(), vs.end());
        std::sort(es.begin(), es.end());
        return std::pair{vs, es};
    };
    if (sig(g) != sig(h)) return std::nullopt;

    // injective + equal element counts makes the embedding bijective
    MatchOptions opts;
    opts.limit = 1;
    auto ms = find_monomorphisms(g, h, opts);
    if (ms.empty()) return std::nullopt;
    return ms.front();
}

bool extends_to(const Graph& pattern, const Graph& host, const Morphism& partial) {
    MatchOptions opts;
    opts.seed = &partial;
    opts.limit = 1;
    return !find_monomorphisms(pattern, host, opts).empty();
}

} // namespace aspectra
