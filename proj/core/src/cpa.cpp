#include "aspectra/cpa.hpp"

#include <atomic>
#include <mutex>
#include <optional>
#include <thread>

#include "aspectra/matching.hpp"
#include "aspectra/overlap.hpp"

namespace aspectra {

std::string to_string(InteractionKind kind) {
    switch (kind) {
    case InteractionKind::conflict_delete_use: return "conflict_delete_use";
    case InteractionKind::conflict_produce_forbid: return "conflict_produce_forbid";
    case InteractionKind::dependency_produce_use: return "dependency_produce_use";
    case InteractionKind::dependency_delete_forbid: return "dependency_delete_forbid";
    }
    return "conflict_delete_use";
}

InteractionKind interaction_kind_from_string(const std::string& s) {
    if (s == "conflict_delete_use") return InteractionKind::conflict_delete_use;
    if (s == "conflict_produce_forbid") return InteractionKind::conflict_produce_forbid;
    if (s == "dependency_produce_use") return InteractionKind::dependency_produce_use;
    if (s == "dependency_delete_forbid") return InteractionKind::dependency_delete_forbid;
    throw Error("unknown interaction kind: " + s);
}

bool is_conflict(InteractionKind kind) {
    return kind == InteractionKind::conflict_delete_use ||
           kind == InteractionKind::conflict_produce_forbid;
}

namespace {

std::map<std::string, std::string> invert(const std::map<std::string, std::string>& m) {
    std::map<std::string, std::string> r;
    for (const auto& [a, b] : m) r[b] = a;
    return r;
}

// NAC-only element ids of one NAC graph relative to the rule's lhs.
struct NacOnly {
    std::set<std::string> vertices, edges;
};

NacOnly nac_only(const Rule& rule, const Graph& nac) {
    NacOnly n;
    for (const auto& [id, v] : nac.vertices())
        if (!rule.lhs.has_vertex(id)) n.vertices.insert(id);
    for (const auto& [id, e] : nac.edges())
        if (!rule.lhs.has_edge(id)) n.edges.insert(id);
    return n;
}

// Morphism of p2's lhs obtained by restricting an embedding of one of its
// NAC graphs.
Morphism restrict_to_lhs(const Rule& p2, const Morphism& nac_embedding) {
    Morphism m;
    for (const auto& [id, img] : nac_embedding.vmap)
        if (p2.lhs.has_vertex(id)) m.vmap[id] = img;
    for (const auto& [id, img] : nac_embedding.emap)
        if (p2.lhs.has_edge(id)) m.emap[id] = img;
    return m;
}

struct InverseResult {
    Graph pre;      // the overlap with p1's application undone
    Morphism lhs1;  // lhs(p1) into pre
};

// Undo p1 on an overlap built from rhs(p1): remove the images of created
// elements, re-create the deleted ones as fresh copies attached through the
// preserved images. Impossible when a created vertex image has incident
// overlap edges that are not images of created edges.
std::optional<InverseResult> inverse_apply(const Rule& p1, const RuleDelta& d1,
                                           const Overlap& ov) {
    std::set<std::string> created_v_images, created_e_images;
    for (const auto& id : d1.created_vertices)
        created_v_images.insert(ov.e1.vmap.at(id));
    for (const auto& id : d1.created_edges)
        created_e_images.insert(ov.e1.emap.at(id));

    for (const auto& vimg : created_v_images)
        for (const Edge* e : ov.graph.edges_incident(vimg))
            if (!created_e_images.count(e->id)) return std::nullopt;

    InverseResult res;
    for (const auto& [id, v] : ov.graph.vertices())
        if (!created_v_images.count(id)) res.pre.add_vertex(v);
    for (const auto& [id, e] : ov.graph.edges())
        if (!created_e_images.count(id)) res.pre.add_edge(e);

    for (const auto& id : d1.deleted_vertices) {
        Vertex v = p1.lhs.vertex(id);
        v.id = "r:" + id;
        res.pre.add_vertex(std::move(v));
    }
    auto pre_endpoint = [&](const std::string& lhs_vid) -> std::string {
        if (d1.deleted_vertices.count(lhs_vid)) return "r:" + lhs_vid;
        return ov.e1.vmap.at(lhs_vid); // preserved, same id on the rhs side
    };
    for (const auto& id : d1.deleted_edges) {
        Edge e = p1.lhs.edge(id);
        e.id = "r:" + id;
        e.src = pre_endpoint(e.src);
        e.tgt = pre_endpoint(e.tgt);
        res.pre.add_edge(std::move(e));
    }

    for (const auto& [id, v] : p1.lhs.vertices())
        res.lhs1.vmap[id] =
            d1.deleted_vertices.count(id) ? "r:" + id : ov.e1.vmap.at(id);
    for (const auto& [id, e] : p1.lhs.edges())
        res.lhs1.emap[id] = d1.deleted_edges.count(id) ? "r:" + id : ov.e1.emap.at(id);
    return res;
}

struct PairCollector {
    std::set<std::string> seen;
    std::vector<CriticalPair> out;

    void add(CriticalPair cp, const Overlap& ov) {
        std::string key = to_string(cp.kind) + "\x1e" + overlap_canonical_key(ov);
        if (seen.insert(key).second) out.push_back(std::move(cp));
    }
};

Witness identified_witness(const Overlap& ov, const std::set<std::string>& first_side,
                           const std::set<std::string>* second_side_vertices,
                           const std::set<std::string>& first_edges,
                           const std::set<std::string>* second_side_edges) {
    Witness w;
    auto r1v = invert(ov.e1.vmap);
    auto r2v = invert(ov.e2.vmap);
    auto r1e = invert(ov.e1.emap);
    auto r2e = invert(ov.e2.emap);
    for (const auto& [oid, v] : ov.graph.vertices()) {
        auto p1 = r1v.find(oid);
        auto p2 = r2v.find(oid);
        if (p1 == r1v.end() || p2 == r2v.end()) continue;
        if (!first_side.count(p1->second)) continue;
        if (second_side_vertices && !second_side_vertices->count(p2->second)) continue;
        w.vertices.insert(oid);
    }
    for (const auto& [oid, e] : ov.graph.edges()) {
        auto p1 = r1e.find(oid);
        auto p2 = r2e.find(oid);
        if (p1 == r1e.end() || p2 == r2e.end()) continue;
        if (!first_edges.count(p1->second)) continue;
        if (second_side_edges && !second_side_edges->count(p2->second)) continue;
        w.edges.insert(oid);
    }
    return w;
}

} // namespace

std::vector<CriticalPair> conflicts(const Rule& p1, const Rule& p2, std::size_t cap) {
    RuleDelta d1 = delta(p1);
    PairCollector coll;

    // delete-use: p1 deletes an element p2's lhs needs
    if (!d1.deletes_nothing()) {
        for (const Overlap& ov : enumerate_overlaps(p1.lhs, p2.lhs, cap)) {
            Witness w = identified_witness(ov, d1.deleted_vertices, nullptr,
                                           d1.deleted_edges, nullptr);
            if (w.empty()) continue;
            if (check_match(p1, ov.graph, ov.e1) != MatchFailure::none) continue;
            if (check_match(p2, ov.graph, ov.e2) != MatchFailure::none) continue;
            coll.add({p1.name, p2.name, InteractionKind::conflict_delete_use, ov.graph,
                      std::move(w), ov.e1, ov.e2, -1},
                     ov);
        }
    }

    // produce-forbid: p1 creates an element one of p2's NACs forbids
    if (!d1.creates_nothing()) {
        for (std::size_t j = 0; j < p2.nacs.size(); ++j) {
            const Graph& nac = p2.nacs[j];
            NacOnly no = nac_only(p2, nac);
            for (const Overlap& ov : enumerate_overlaps(p1.rhs, nac, cap)) {
                Witness w = identified_witness(ov, d1.created_vertices, &no.vertices,
                                               d1.created_edges, &no.edges);
                if (w.empty()) continue;
                auto inv = inverse_apply(p1, d1, ov);
                if (!inv) continue;
                // before p1: p2 applicable at the restricted embedding, with
                // the forbidden pattern absent
                Morphism mu0 = restrict_to_lhs(p2, ov.e2);
                if (check_match(p2, inv->pre, mu0) != MatchFailure::none) continue;
                // p1 itself applicable on the pre-graph
                if (check_match(p1, inv->pre, inv->lhs1) != MatchFailure::none) continue;
                coll.add({p1.name, p2.name, InteractionKind::conflict_produce_forbid,
                          ov.graph, std::move(w), ov.e1, ov.e2, static_cast<int>(j)},
                         ov);
            }
        }
    }
    return std::move(coll.out);
}

std::vector<CriticalPair> dependencies(const Rule& p1, const Rule& p2, std::size_t cap) {
    RuleDelta d1 = delta(p1);
    PairCollector coll;

    // produce-use: p1 creates an element p2's lhs needs
    if (!d1.creates_nothing()) {
        for (const Overlap& ov : enumerate_overlaps(p1.rhs, p2.lhs, cap)) {
            Witness w = identified_witness(ov, d1.created_vertices, nullptr,
                                           d1.created_edges, nullptr);
            if (w.empty()) continue;
            if (check_match(p2, ov.graph, ov.e2) != MatchFailure::none) continue;
            auto inv = inverse_apply(p1, d1, ov);
            if (!inv) continue;
            if (check_match(p1, inv->pre, inv->lhs1) != MatchFailure::none) continue;
            coll.add({p1.name, p2.name, InteractionKind::dependency_produce_use,
                      ov.graph, std::move(w), ov.e1, ov.e2, -1},
                     ov);
        }
    }

    // delete-forbid: p1 deletes an element one of p2's NACs forbids
    if (!d1.deletes_nothing()) {
        for (std::size_t j = 0; j < p2.nacs.size(); ++j) {
            const Graph& nac = p2.nacs[j];
            NacOnly no = nac_only(p2, nac);
            for (const Overlap& ov : enumerate_overlaps(p1.lhs, nac, cap)) {
                Witness w = identified_witness(ov, d1.deleted_vertices, &no.vertices,
                                               d1.deleted_edges, &no.edges);
                if (w.empty()) continue;
                if (check_match(p1, ov.graph, ov.e1) != MatchFailure::none) continue;
                // p2's lhs must survive p1's deletion
                std::set<std::string> gone;
                for (const auto& id : d1.deleted_vertices) gone.insert(ov.e1.vmap.at(id));
                for (const auto& id : d1.deleted_edges) gone.insert(ov.e1.emap.at(id));
                Morphism mu = restrict_to_lhs(p2, ov.e2);
                bool survives = true;
                for (const auto& [id, img] : mu.vmap)
                    if (gone.count(img)) { survives = false; break; }
                for (const auto& [id, img] : mu.emap)
                    if (gone.count(img)) { survives = false; break; }
                if (!survives) continue;
                // after p1: the forbidden pattern must be released for p2
                Graph after = apply(p1, ov.graph, Match{ov.e1});
                if (check_match(p2, after, mu) != MatchFailure::none) continue;
                coll.add({p1.name, p2.name, InteractionKind::dependency_delete_forbid,
                          ov.graph, std::move(w), ov.e1, ov.e2, static_cast<int>(j)},
                         ov);
            }
        }
    }
    return std::move(coll.out);
}

AnalysisResult analyze_rule_pairs(const std::vector<Rule>& rules,
                                  const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                                  const AnalysisOptions& opts) {
    std::vector<PairVerdict> slots(pairs.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto work = [&]() {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= pairs.size()) return;
            const Rule& p1 = rules[pairs[i].first];
            const Rule& p2 = rules[pairs[i].second];
            PairVerdict v;
            v.first = p1.name;
            v.second = p2.name;
            try {
                try {
                    v.conflicts = conflicts(p1, p2, opts.cap);
                } catch (const OverlapCapExceeded&) {
                    v.undecided = true;
                }
                try {
                    v.dependencies = dependencies(p1, p2, opts.cap);
                } catch (const OverlapCapExceeded&) {
                    v.undecided = true;
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                return;
            }
            slots[i] = std::move(v);
        }
    };

    unsigned jobs = opts.jobs == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                   : opts.jobs;
    jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, std::max<std::size_t>(pairs.size(), 1)));
    if (jobs <= 1) {
        work();
    } else {
        std::vector<std::thread> threads;
        for (unsigned t = 0; t < jobs; ++t) threads.emplace_back(work);
        for (auto& t : threads) t.join();
    }
    if (failure) std::rethrow_exception(failure);

    AnalysisResult res;
    for (auto& v : slots) res.verdicts[{v.first, v.second}] = std::move(v);
    res.pairs_analyzed = pairs.size();
    return res;
}

AnalysisResult analyze_rules(const std::vector<Rule>& rules, const AnalysisOptions& opts) {
    std::set<std::string> names;
    for (const Rule& r : rules)
        if (!names.insert(r.name).second)
            throw RuleError("duplicate rule name: " + r.name);

    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < rules.size(); ++i)
        for (std::size_t j = 0; j < rules.size(); ++j)
            if (i != j) pairs.emplace_back(i, j);
    return analyze_rule_pairs(rules, pairs, opts);
}

} // namespace aspectra
