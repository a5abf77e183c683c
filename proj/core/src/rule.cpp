#include "aspectra/rule.hpp"

#include <algorithm>

#include "aspectra/matching.hpp"

namespace aspectra {

void validate_rule(const Rule& rule) {
    if (rule.name.empty()) throw RuleError("rule name must be nonempty");
    for (const auto& [id, lv] : rule.lhs.vertices()) {
        const Vertex* rv = rule.rhs.find_vertex(id);
        if (rv && (rv->kind != lv.kind || rv->attrs != lv.attrs))
            throw RuleError(rule.name + ": preserved vertex '" + id +
                            "' differs between lhs and rhs");
    }
    for (const auto& [id, le] : rule.lhs.edges()) {
        const Edge* re = rule.rhs.find_edge(id);
        if (re && (re->src != le.src || re->tgt != le.tgt || re->label != le.label))
            throw RuleError(rule.name + ": preserved edge '" + id +
                            "' differs between lhs and rhs");
    }
    for (std::size_t i = 0; i < rule.nacs.size(); ++i) {
        const Graph& nac = rule.nacs[i];
        for (const auto& [id, lv] : rule.lhs.vertices()) {
            const Vertex* nv = nac.find_vertex(id);
            if (!nv || nv->kind != lv.kind || nv->attrs != lv.attrs)
                throw RuleError(rule.name + ": NAC " + std::to_string(i) +
                                " does not contain lhs vertex '" + id + "'");
        }
        for (const auto& [id, le] : rule.lhs.edges()) {
            const Edge* ne = nac.find_edge(id);
            if (!ne || ne->src != le.src || ne->tgt != le.tgt || ne->label != le.label)
                throw RuleError(rule.name + ": NAC " + std::to_string(i) +
                                " does not contain lhs edge '" + id + "'");
        }
    }
}

RuleDelta delta(const Rule& rule) {
    RuleDelta d;
    for (const auto& [id, v] : rule.lhs.vertices())
        (rule.rhs.has_vertex(id) ? d.preserved_vertices : d.deleted_vertices).insert(id);
    for (const auto& [id, e] : rule.lhs.edges())
        (rule.rhs.has_edge(id) ? d.preserved_edges : d.deleted_edges).insert(id);
    for (const auto& [id, v] : rule.rhs.vertices())
        if (!rule.lhs.has_vertex(id)) d.created_vertices.insert(id);
    for (const auto& [id, e] : rule.rhs.edges())
        if (!rule.lhs.has_edge(id)) d.created_edges.insert(id);
    return d;
}

namespace {

bool dangling_ok(const RuleDelta& d, const Graph& host, const Morphism& m) {
    if (d.deleted_vertices.empty()) return true;
    std::set<std::string> deleted_edge_images;
    for (const auto& id : d.deleted_edges) {
        auto it = m.emap.find(id);
        if (it == m.emap.end()) return false;
        deleted_edge_images.insert(it->second);
    }
    for (const auto& vid : d.deleted_vertices) {
        auto it = m.vmap.find(vid);
        if (it == m.vmap.end()) return false;
        for (const Edge* e : host.edges_incident(it->second))
            if (!deleted_edge_images.count(e->id)) return false;
    }
    return true;
}

bool nacs_ok(const Rule& rule, const Graph& host, const Morphism& m) {
    for (const Graph& nac : rule.nacs)
        if (extends_to(nac, host, m)) return false;
    return true;
}

} // namespace

MatchFailure check_match(const Rule& rule, const Graph& host, const Morphism& m) {
    if (!is_monomorphism(rule.lhs, host, m)) return MatchFailure::images_missing;
    if (!nacs_ok(rule, host, m)) return MatchFailure::nac_violated;
    if (!dangling_ok(delta(rule), host, m)) return MatchFailure::dangling_violated;
    return MatchFailure::none;
}

std::vector<Match> find_matches(const Rule& rule, const Graph& host) {
    RuleDelta d = delta(rule);
    std::vector<Match> out;
    for (auto& m : find_monomorphisms(rule.lhs, host)) {
        if (!nacs_ok(rule, host, m)) continue;
        if (!dangling_ok(d, host, m)) continue;
        out.push_back(Match{std::move(m)});
    }
    return out;
}

Graph apply(const Rule& rule, const Graph& host, const Match& match) {
    const Morphism& m = match.embedding;
    MatchFailure f = check_match(rule, host, m);
    if (f != MatchFailure::none)
        throw InvalidMatch(rule.name + ": match invalid on this host");

    RuleDelta d = delta(rule);
    std::set<std::string> gone_vertices, gone_edges;
    for (const auto& id : d.deleted_vertices) gone_vertices.insert(m.vmap.at(id));
    for (const auto& id : d.deleted_edges) gone_edges.insert(m.emap.at(id));

    Graph out;
    for (const auto& [id, v] : host.vertices())
        if (!gone_vertices.count(id)) out.add_vertex(v);
    for (const auto& [id, e] : host.edges())
        if (!gone_edges.count(id) && !gone_vertices.count(e.src) &&
            !gone_vertices.count(e.tgt))
            out.add_edge(e);

    // created elements get fresh ids; created edges attach through the match
    std::map<std::string, std::string> created_vertex_ids;
    for (const auto& id : d.created_vertices) {
        Vertex v = rule.rhs.vertex(id);
        v.id = out.fresh_vertex_id(id);
        created_vertex_ids[id] = v.id;
        out.add_vertex(std::move(v));
    }
    auto rhs_endpoint = [&](const std::string& rid) -> std::string {
        auto it = created_vertex_ids.find(rid);
        if (it != created_vertex_ids.end()) return it->second;
        return m.vmap.at(rid); // preserved
    };
    for (const auto& id : d.created_edges) {
        Edge e = rule.rhs.edge(id);
        e.id = out.fresh_edge_id(id);
        e.src = rhs_endpoint(e.src);
        e.tgt = rhs_endpoint(e.tgt);
        out.add_edge(std::move(e));
    }
    return out;
}

WeaveResult weave(const std::vector<Rule>& rules, const Graph& host) {
    struct Pending {
        const Rule* rule;
        Match match;
    };
    std::vector<Pending> queue;
    for (const Rule& r : rules)
        for (auto& m : find_matches(r, host)) queue.push_back({&r, std::move(m)});

    WeaveResult result;
    result.graph = host;
    for (auto& p : queue) {
        MatchFailure f = check_match(*p.rule, result.graph, p.match.embedding);
        if (f != MatchFailure::none) {
            result.skipped.push_back({p.rule->name, p.match.embedding, f});
            continue;
        }
        result.graph = apply(*p.rule, result.graph, p.match);
        result.applied.emplace_back(p.rule->name, p.match.embedding);
    }
    return result;
}

} // namespace aspectra
