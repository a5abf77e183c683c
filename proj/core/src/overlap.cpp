#include "aspectra/overlap.hpp"

#include <algorithm>
#include <set>

#include "aspectra/canonical.hpp"

namespace aspectra {

namespace {

struct Enumerator {
    const Graph& g1;
    const Graph& g2;
    std::size_t cap;

    std::vector<std::string> v1ids;
    std::map<std::string, std::string> match; // g1 vertex -> g2 vertex
    std::set<std::string> used2;
    std::vector<Overlap> out;

    Enumerator(const Graph& a, const Graph& b, std::size_t c) : g1(a), g2(b), cap(c) {
        for (const auto& [id, v] : g1.vertices()) v1ids.push_back(id);
    }

    void run() { descend(0); }

    void descend(std::size_t idx) {
        if (idx == v1ids.size()) {
            emit();
            return;
        }
        const std::string& vid = v1ids[idx];
        const Vertex& v = g1.vertex(vid);
        // leave vid unidentified
        descend(idx + 1);
        for (const auto& [wid, w] : g2.vertices()) {
            if (used2.count(wid)) continue;
            if (w.kind != v.kind || w.attrs != v.attrs) continue;
            match[vid] = wid;
            used2.insert(wid);
            descend(idx + 1);
            used2.erase(wid);
            match.erase(vid);
        }
    }

    void emit() {
        if (out.size() >= cap)
            throw OverlapCapExceeded("overlap enumeration exceeded cap of " +
                                     std::to_string(cap));
        Overlap ov;
        std::map<std::string, std::string> rmatch; // g2 vertex -> g1 vertex
        for (const auto& [a, b] : match) rmatch[b] = a;

        for (const auto& [id, v] : g1.vertices()) {
            Vertex nv = v;
            nv.id = "1:" + id;
            ov.graph.add_vertex(std::move(nv));
            ov.e1.vmap[id] = "1:" + id;
        }
        for (const auto& [id, v] : g2.vertices()) {
            auto it = rmatch.find(id);
            if (it != rmatch.end()) {
                ov.e2.vmap[id] = "1:" + it->second;
                continue;
            }
            Vertex nv = v;
            nv.id = "2:" + id;
            ov.graph.add_vertex(std::move(nv));
            ov.e2.vmap[id] = "2:" + id;
        }

        auto overlap_end = [&](const std::string& g2vid) { return ov.e2.vmap.at(g2vid); };

        // forced edge identification: g1 edges claim compatible g2 edges in id order
        std::map<std::string, std::string> eident; // g2 edge -> g1 edge
        std::set<std::string> claimed2;
        for (const auto& [id, e] : g1.edges()) {
            auto ms = match.find(e.src);
            auto mt = match.find(e.tgt);
            if (ms == match.end() || mt == match.end()) continue;
            for (const auto& [fid, f] : g2.edges()) {
                if (claimed2.count(fid)) continue;
                if (f.src == ms->second && f.tgt == mt->second && f.label == e.label) {
                    eident[fid] = id;
                    claimed2.insert(fid);
                    break;
                }
            }
        }

        for (const auto& [id, e] : g1.edges()) {
            Edge ne = e;
            ne.id = "1:" + id;
            ne.src = "1:" + e.src;
            ne.tgt = "1:" + e.tgt;
            ov.graph.add_edge(std::move(ne));
            ov.e1.emap[id] = "1:" + id;
        }
        for (const auto& [id, e] : g2.edges()) {
            auto it = eident.find(id);
            if (it != eident.end()) {
                ov.e2.emap[id] = "1:" + it->second;
                continue;
            }
            Edge ne = e;
            ne.id = "2:" + id;
            ne.src = overlap_end(e.src);
            ne.tgt = overlap_end(e.tgt);
            ov.graph.add_edge(std::move(ne));
            ov.e2.emap[id] = "2:" + id;
        }
        out.push_back(std::move(ov));
    }
};

} // namespace

std::string overlap_canonical_key(const Overlap& ov) {
    // embed the preimage fingerprints so only embedding-commuting
    // isomorphisms collapse two overlaps
    Graph tagged;
    std::map<std::string, std::pair<std::string, std::string>> vpre, epre;
    for (const auto& [a, b] : ov.e1.vmap) vpre[b].first = a;
    for (const auto& [a, b] : ov.e2.vmap) vpre[b].second = a;
    for (const auto& [a, b] : ov.e1.emap) epre[b].first = a;
    for (const auto& [a, b] : ov.e2.emap) epre[b].second = a;

    for (const auto& [id, v] : ov.graph.vertices()) {
        Vertex nv = v;
        nv.attrs["~pre1"] = vpre[id].first;
        nv.attrs["~pre2"] = vpre[id].second;
        tagged.add_vertex(std::move(nv));
    }
    for (const auto& [id, e] : ov.graph.edges()) {
        Edge ne = e;
        ne.label += "\x01" + epre[id].first + "\x01" + epre[id].second;
        tagged.add_edge(std::move(ne));
    }
    return canonical_form(tagged);
}

std::vector<Overlap> enumerate_overlaps(const Graph& g1, const Graph& g2,
                                        std::size_t cap) {
    Enumerator en(g1, g2, cap);
    en.run();
    // distinct matchings always yield embedding-inequivalent overlaps; the
    // canonical dedup is kept as a cheap safety net
    std::set<std::string> seen;
    std::vector<Overlap> out;
    for (auto& ov : en.out) {
        if (seen.insert(overlap_canonical_key(ov)).second)
            out.push_back(std::move(ov));
    }
    return out;
}

} // namespace aspectra
