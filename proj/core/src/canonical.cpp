#include "aspectra/canonical.hpp"

#include <algorithm>
#include <cstddef>
#include <map>
#include <vector>

namespace aspectra {

namespace {

std::string escape(const std::string& s) {
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(s.size());
    for (unsigned char c : s) {
        if (std::isalnum(c) || c == '_' || c == '|' || c == '.' || c == ':' ||
            c == '-' || c == ' ')
            out += static_cast<char>(c);
        else {
            out += '%';
            out += hex[c >> 4];
            out += hex[c & 0xf];
        }
    }
    return out;
}

std::string vertex_signature(const Vertex& v) {
    std::string sig = to_string(v.kind) + "{";
    for (const auto& [k, val] : v.attrs) sig += escape(k) + "=" + escape(val) + ",";
    sig += "}";
    return sig;
}

struct Indexed {
    std::vector<std::string> vids;                       // index -> vertex id
    std::map<std::string, std::size_t> vindex;           // vertex id -> index
    // labels of parallel edges per ordered (src,tgt) index pair, sorted
    std::map<std::pair<std::size_t, std::size_t>, std::vector<std::string>> adj;
};

Indexed index_graph(const Graph& g) {
    Indexed ix;
    for (const auto& [id, v] : g.vertices()) {
        ix.vindex[id] = ix.vids.size();
        ix.vids.push_back(id);
    }
    for (const auto& [id, e] : g.edges())
        ix.adj[{ix.vindex.at(e.src), ix.vindex.at(e.tgt)}].push_back(escape(e.label));
    for (auto& [key, labels] : ix.adj) std::sort(labels.begin(), labels.end());
    return ix;
}

// Equitable-refinement colors: start from (signature, degree profile) and
// iterate neighbor-color multisets until the partition is stable.
std::vector<std::size_t> refine_colors(const Graph& g, const Indexed& ix) {
    const std::size_t n = ix.vids.size();
    std::vector<std::string> color(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Vertex& v = g.vertex(ix.vids[i]);
        std::vector<std::string> out_labels, in_labels;
        for (const auto& [id, e] : g.edges()) {
            if (e.src == v.id) out_labels.push_back(escape(e.label));
            if (e.tgt == v.id) in_labels.push_back(escape(e.label));
        }
        std::sort(out_labels.begin(), out_labels.end());
        std::sort(in_labels.begin(), in_labels.end());
        std::string c = vertex_signature(v) + "/o:";
        for (auto& l : out_labels) c += l + ",";
        c += "/i:";
        for (auto& l : in_labels) c += l + ",";
        color[i] = c;
    }

    auto rank_colors = [&]() {
        std::vector<std::string> uniq(color.begin(), color.end());
        std::sort(uniq.begin(), uniq.end());
        uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
        std::vector<std::size_t> rank(n);
        for (std::size_t i = 0; i < n; ++i)
            rank[i] = static_cast<std::size_t>(
                std::lower_bound(uniq.begin(), uniq.end(), color[i]) - uniq.begin());
        return std::pair{rank, uniq.size()};
    };

    auto [rank, classes] = rank_colors();
    for (std::size_t round = 0; round < n; ++round) {
        std::vector<std::string> next(n);
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<std::string> outs, ins;
            for (const auto& [key, labels] : ix.adj) {
                for (const auto& l : labels) {
                    if (key.first == i)
                        outs.push_back(l + ">" + std::to_string(rank[key.second]));
                    if (key.second == i)
                        ins.push_back(l + "<" + std::to_string(rank[key.first]));
                }
            }
            std::sort(outs.begin(), outs.end());
            std::sort(ins.begin(), ins.end());
            std::string c = std::to_string(rank[i]) + "#";
            for (auto& s : outs) c += s + ",";
            c += "#";
            for (auto& s : ins) c += s + ",";
            next[i] = c;
        }
        color = std::move(next);
        auto [nrank, nclasses] = rank_colors();
        if (nclasses == classes) {
            rank = std::move(nrank);
            break;
        }
        rank = std::move(nrank);
        classes = nclasses;
    }
    return rank;
}

// Adjacency block contributed by placing vertex v at position pos, given the
// vertices already placed. Together with the vertex signatures this string
// determines the graph up to isomorphism.
std::string position_block(const Graph& g, const Indexed& ix,
                           const std::vector<std::size_t>& placed,
                           std::size_t v) {
    std::string block = "V" + vertex_signature(g.vertex(ix.vids[v]));
    auto labels_between = [&](std::size_t a, std::size_t b) {
        auto it = ix.adj.find({a, b});
        std::string s;
        if (it != ix.adj.end())
            for (const auto& l : it->second) s += l + ",";
        return s;
    };
    for (std::size_t j = 0; j < placed.size(); ++j)
        block += "(" + labels_between(placed[j], v) + ";" + labels_between(v, placed[j]) + ")";
    block += "(" + labels_between(v, v) + ")";
    return block;
}

struct CanonSearch {
    const Graph& g;
    const Indexed& ix;
    std::vector<std::vector<std::size_t>> class_members; // canonical class order
    std::vector<std::string> best;                        // best block sequence
    std::vector<std::size_t> best_order;
    bool have_best = false;

    std::vector<std::size_t> placed;
    std::vector<std::string> blocks;
    std::vector<bool> used;

    void run() {
        used.assign(ix.vids.size(), false);
        descend(0, 0, true);
    }

    // tight == current prefix equals best prefix; only then can a worse block
    // prune this branch.
    void descend(std::size_t class_i, std::size_t within, bool tight) {
        if (class_i == class_members.size()) {
            if (!have_best || blocks < best) {
                best = blocks;
                best_order = placed;
                have_best = true;
            }
            return;
        }
        if (within == class_members[class_i].size()) {
            descend(class_i + 1, 0, tight);
            return;
        }
        const std::size_t pos = placed.size();
        for (std::size_t v : class_members[class_i]) {
            if (used[v]) continue;
            std::string block = position_block(g, ix, placed, v);
            bool next_tight = tight;
            if (have_best && tight) {
                if (block > best[pos]) continue;
                if (block < best[pos]) next_tight = false;
            }
            used[v] = true;
            placed.push_back(v);
            blocks.push_back(std::move(block));
            descend(class_i, within + 1, next_tight);
            blocks.pop_back();
            placed.pop_back();
            used[v] = false;
        }
    }
};

} // namespace

namespace {

struct CanonOutcome {
    std::string form;
    std::vector<std::string> order; // vertex ids in canonical position order
};

CanonOutcome canonicalize(const Graph& g) {
    Indexed ix = index_graph(g);
    const std::size_t n = ix.vids.size();
    if (n == 0) return {"n0#", {}};

    std::vector<std::size_t> rank = refine_colors(g, ix);

    // Class order must be isomorphism-invariant: order classes by an invariant
    // key (the refined rank plus the class signature), not by vertex ids.
    std::map<std::string, std::vector<std::size_t>> by_key;
    for (std::size_t i = 0; i < n; ++i) {
        std::string key = std::to_string(rank[i]).insert(0, "r") + "|" +
                          vertex_signature(g.vertex(ix.vids[i]));
        by_key[key].push_back(i);
    }

    CanonSearch search{g, ix};
    for (auto& [key, members] : by_key) search.class_members.push_back(members);
    search.run();

    CanonOutcome out;
    out.form = "n" + std::to_string(n) + "#";
    for (const auto& b : search.best) out.form += b + "#";
    for (std::size_t pos : search.best_order) out.order.push_back(ix.vids[pos]);
    return out;
}

} // namespace

std::string canonical_form(const Graph& g) { return canonicalize(g).form; }

Graph canonical_relabel(const Graph& g) {
    CanonOutcome c = canonicalize(g);
    std::map<std::string, std::string> vmap;
    Graph out;
    for (std::size_t i = 0; i < c.order.size(); ++i) {
        Vertex v = g.vertex(c.order[i]);
        vmap[v.id] = "v" + std::to_string(i);
        v.id = vmap[v.id];
        out.add_vertex(std::move(v));
    }
    std::map<std::string, std::size_t> pos;
    for (std::size_t i = 0; i < c.order.size(); ++i) pos[c.order[i]] = i;
    std::vector<const Edge*> edges;
    for (const auto& [id, e] : g.edges()) edges.push_back(&e);
    std::sort(edges.begin(), edges.end(), [&](const Edge* a, const Edge* b) {
        return std::tuple(pos.at(a->src), pos.at(a->tgt), a->label) <
               std::tuple(pos.at(b->src), pos.at(b->tgt), b->label);
    });
    for (std::size_t i = 0; i < edges.size(); ++i) {
        Edge e = *edges[i];
        e.id = "e" + std::to_string(i);
        e.src = vmap.at(e.src);
        e.tgt = vmap.at(e.tgt);
        out.add_edge(std::move(e));
    }
    return out;
}

} // namespace aspectra
