#include "aspectra/io.hpp"

#include <fstream>
#include <functional>
#include <sstream>

namespace aspectra {

namespace {

void expect(bool cond, const std::string& msg) {
    if (!cond) throw IoError(msg);
}

const json& field(const json& j, const char* key, const std::string& what) {
    auto it = j.find(key);
    expect(it != j.end(), what + ": missing field '" + key + "'");
    return *it;
}

std::string str_field(const json& j, const char* key, const std::string& what) {
    const json& f = field(j, key, what);
    expect(f.is_string(), what + ": field '" + key + "' must be a string");
    return f.get<std::string>();
}

std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

} // namespace

json graph_to_json(const Graph& g) {
    json vertices = json::array();
    for (const auto& [id, v] : g.vertices())
        vertices.push_back({{"id", v.id}, {"kind", to_string(v.kind)}, {"attrs", v.attrs}});
    json edges = json::array();
    for (const auto& [id, e] : g.edges())
        edges.push_back({{"id", e.id}, {"src", e.src}, {"tgt", e.tgt}, {"label", e.label}});
    return {{"vertices", vertices}, {"edges", edges}};
}

Graph graph_from_json(const json& j) {
    expect(j.is_object(), "graph: expected an object");
    Graph g;
    for (const json& vj : field(j, "vertices", "graph")) {
        Vertex v;
        v.id = str_field(vj, "id", "vertex");
        v.kind = vertex_kind_from_string(
            vj.contains("kind") ? vj.at("kind").get<std::string>() : "state");
        if (vj.contains("attrs"))
            v.attrs = vj.at("attrs").get<AttrMap>();
        g.add_vertex(std::move(v));
    }
    for (const json& ej : field(j, "edges", "graph")) {
        Edge e;
        e.id = str_field(ej, "id", "edge");
        e.src = str_field(ej, "src", "edge");
        e.tgt = str_field(ej, "tgt", "edge");
        e.label = str_field(ej, "label", "edge");
        g.add_edge(std::move(e));
    }
    return g;
}

std::string graph_to_dot(const Graph& g) {
    std::string out = "digraph g {\n";
    for (const auto& [id, v] : g.vertices()) {
        const char* shape = "ellipse";
        switch (v.kind) {
        case VertexKind::initial: shape = "point"; break;
        case VertexKind::final_state: shape = "doublecircle"; break;
        case VertexKind::config: shape = "box"; break;
        case VertexKind::state: shape = "ellipse"; break;
        }
        out += "  \"" + dot_escape(id) + "\" [shape=" + shape + ", label=\"" +
               dot_escape(v.name()) + "\"];\n";
    }
    for (const auto& [id, e] : g.edges())
        out += "  \"" + dot_escape(e.src) + "\" -> \"" + dot_escape(e.tgt) +
               "\" [label=\"" + dot_escape(e.label) + "\"];\n";
    out += "}\n";
    return out;
}

json morphism_to_json(const Morphism& m) {
    return {{"vmap", m.vmap}, {"emap", m.emap}};
}

Morphism morphism_from_json(const json& j) {
    Morphism m;
    if (j.contains("vmap")) m.vmap = j.at("vmap").get<std::map<std::string, std::string>>();
    if (j.contains("emap")) m.emap = j.at("emap").get<std::map<std::string, std::string>>();
    return m;
}

json rule_to_json(const Rule& r) {
    json nacs = json::array();
    for (const Graph& nac : r.nacs) nacs.push_back(graph_to_json(nac));
    return {{"name", r.name},
            {"lhs", graph_to_json(r.lhs)},
            {"rhs", graph_to_json(r.rhs)},
            {"nacs", nacs}};
}

Rule rule_from_json(const json& j) {
    Rule r;
    r.name = str_field(j, "name", "rule");
    r.lhs = graph_from_json(field(j, "lhs", "rule " + r.name));
    r.rhs = graph_from_json(field(j, "rhs", "rule " + r.name));
    if (j.contains("nacs"))
        for (const json& nj : j.at("nacs")) r.nacs.push_back(graph_from_json(nj));
    validate_rule(r);
    return r;
}

json rules_to_json(const std::vector<Rule>& rules) {
    json arr = json::array();
    for (const Rule& r : rules) arr.push_back(rule_to_json(r));
    return {{"rules", arr}};
}

std::vector<Rule> rules_from_json(const json& j) {
    std::vector<Rule> out;
    for (const json& rj : field(j, "rules", "rules file")) out.push_back(rule_from_json(rj));
    return out;
}

std::string rule_to_dot(const Rule& r) {
    // lhs (with NAC-only elements dashed and marked "X") next to rhs
    std::string out = "digraph rule {\n  rankdir=LR;\n";
    auto cluster = [&](const std::string& name, const Graph& g, const std::string& prefix) {
        std::string s = "  subgraph cluster_" + name + " {\n    label=\"" + name + "\";\n";
        for (const auto& [id, v] : g.vertices())
            s += "    \"" + prefix + dot_escape(id) + "\" [label=\"" +
                 dot_escape(v.name()) + "\"];\n";
        for (const auto& [id, e] : g.edges())
            s += "    \"" + prefix + dot_escape(e.src) + "\" -> \"" + prefix +
                 dot_escape(e.tgt) + "\" [label=\"" + dot_escape(e.label) + "\"];\n";
        s += "  }\n";
        return s;
    };
    if (r.nacs.empty()) {
        out += cluster("LHS", r.lhs, "l_");
    } else {
        for (std::size_t n = 0; n < r.nacs.size(); ++n) {
            const Graph& nac = r.nacs[n];
            std::string prefix = "l" + std::to_string(n) + "_";
            std::string name = "LHS_NAC" + std::to_string(n + 1);
            std::string s = "  subgraph cluster_" + name + " {\n    label=\"" + name + "\";\n";
            for (const auto& [id, v] : nac.vertices()) {
                bool nac_only = !r.lhs.has_vertex(id);
                s += "    \"" + prefix + dot_escape(id) + "\" [label=\"" +
                     dot_escape(v.name()) + (nac_only ? " X" : "") + "\"" +
                     (nac_only ? ", style=dashed" : "") + "];\n";
            }
            for (const auto& [id, e] : nac.edges()) {
                bool nac_only = !r.lhs.has_edge(id);
                s += "    \"" + prefix + dot_escape(e.src) + "\" -> \"" + prefix +
                     dot_escape(e.tgt) + "\" [label=\"" + dot_escape(e.label) +
                     (nac_only ? " X" : "") + "\"" + (nac_only ? ", style=dashed" : "") +
                     "];\n";
            }
            s += "  }\n";
            out += s;
        }
    }
    out += cluster("RHS", r.rhs, "r_");
    out += "}\n";
    return out;
}

json model_to_json(const StateMachine& sm) {
    std::function<json(const State&)> state_to_json = [&](const State& s) -> json {
        json j = {{"id", s.id}, {"kind", to_string(s.kind)}};
        if (s.kind == StateKind::composite) {
            j["orthogonal"] = s.orthogonal;
            json regions = json::array();
            for (const Region& r : s.regions) {
                json states = json::array();
                for (const State& sub : r.states) states.push_back(state_to_json(sub));
                regions.push_back({{"initial", r.initial}, {"states", states}});
            }
            j["regions"] = regions;
        }
        return j;
    };
    json states = json::array();
    for (const State& s : sm.states) states.push_back(state_to_json(s));
    json transitions = json::array();
    for (const Transition& t : sm.transitions)
        transitions.push_back({{"source", t.source},
                               {"targets", t.targets},
                               {"event", t.event},
                               {"kind", to_string(t.kind)}});
    return {{"name", sm.name}, {"states", states}, {"transitions", transitions}};
}

StateMachine model_from_json(const json& j) {
    std::function<State(const json&)> state_from_json = [&](const json& sj) -> State {
        State s;
        s.id = str_field(sj, "id", "state");
        s.kind = state_kind_from_string(
            sj.contains("kind") ? sj.at("kind").get<std::string>() : "simple");
        if (sj.contains("orthogonal")) s.orthogonal = sj.at("orthogonal").get<bool>();
        if (sj.contains("regions"))
            for (const json& rj : sj.at("regions")) {
                Region r;
                r.initial = str_field(rj, "initial", "region of " + s.id);
                for (const json& subj : field(rj, "states", "region of " + s.id))
                    r.states.push_back(state_from_json(subj));
                s.regions.push_back(std::move(r));
            }
        return s;
    };
    StateMachine sm;
    sm.name = str_field(j, "name", "model");
    for (const json& sj : field(j, "states", "model")) sm.states.push_back(state_from_json(sj));
    for (const json& tj : field(j, "transitions", "model")) {
        Transition t;
        t.source = str_field(tj, "source", "transition");
        const json& targets = field(tj, "targets", "transition");
        expect(targets.is_array(), "transition: 'targets' must be an array");
        for (const json& g : targets) t.targets.push_back(g.get<std::string>());
        t.event = str_field(tj, "event", "transition");
        t.kind = transition_kind_from_string(
            tj.contains("kind") ? tj.at("kind").get<std::string>() : "simple");
        sm.transitions.push_back(std::move(t));
    }
    return sm;
}

namespace {

json pattern_state_to_json(const PatternState& s) {
    json j = {{"id", s.id}};
    if (s.kind != VertexKind::state) j["kind"] = to_string(s.kind);
    if (s.member) j["member"] = {{"state", s.member->state}, {"regions", s.member->regions}};
    if (s.config) j["config"] = {{"states", s.config->states}, {"regions", s.config->regions}};
    return j;
}

PatternState pattern_state_from_json(const json& j) {
    PatternState s;
    s.id = str_field(j, "id", "pattern state");
    if (j.contains("kind")) s.kind = vertex_kind_from_string(j.at("kind").get<std::string>());
    if (j.contains("member")) {
        MemberRef m;
        m.state = str_field(j.at("member"), "state", "member reference");
        m.regions = j.at("member").at("regions").get<std::vector<std::vector<std::string>>>();
        s.member = std::move(m);
    }
    if (j.contains("config")) {
        ConfigRef c;
        c.states = j.at("config").at("states").get<std::vector<std::string>>();
        c.regions = j.at("config").at("regions").get<std::vector<std::vector<std::string>>>();
        s.config = std::move(c);
    }
    return s;
}

json aspect_to_json(const Aspect& a) {
    json states = json::array();
    for (const PatternState& s : a.pointcut.states) states.push_back(pattern_state_to_json(s));
    json transitions = json::array();
    for (const PatternEdge& e : a.pointcut.transitions) {
        json ej = {{"source", e.source}, {"target", e.target}, {"event", e.event}};
        if (!e.id.empty()) ej["id"] = e.id;
        transitions.push_back(ej);
    }
    json create_states = json::array();
    for (const CreateState& cs : a.advice.create_states) {
        json cj = {{"id", cs.id}};
        if (!cs.name.empty() && cs.name != cs.id) cj["name"] = cs.name;
        if (cs.kind != VertexKind::state) cj["kind"] = to_string(cs.kind);
        create_states.push_back(cj);
    }
    json create_transitions = json::array();
    for (const CreateTransition& ct : a.advice.create_transitions) {
        json cj = {{"event", ct.event}, {"source", ct.source}};
        if (ct.kind == TransitionKind::fork) {
            cj["kind"] = "fork";
            cj["targets"] = ct.targets;
        } else {
            cj["target"] = ct.targets.front();
        }
        create_transitions.push_back(cj);
    }
    return {{"name", a.name},
            {"pointcut",
             {{"states", states},
              {"transitions", transitions},
              {"xor_groups", a.pointcut.xor_groups},
              {"exposed", a.pointcut.exposed}}},
            {"advice",
             {{"create_states", create_states},
              {"create_transitions", create_transitions},
              {"delete", a.advice.deletes}}}};
}

Aspect aspect_from_json(const json& j) {
    Aspect a;
    a.name = str_field(j, "name", "aspect");
    const json& pc = field(j, "pointcut", "aspect " + a.name);
    for (const json& sj : field(pc, "states", "pointcut of " + a.name))
        a.pointcut.states.push_back(pattern_state_from_json(sj));
    if (pc.contains("transitions"))
        for (const json& ej : pc.at("transitions")) {
            PatternEdge e;
            e.source = str_field(ej, "source", "pattern edge");
            e.target = str_field(ej, "target", "pattern edge");
            e.event = str_field(ej, "event", "pattern edge");
            if (ej.contains("id")) e.id = ej.at("id").get<std::string>();
            a.pointcut.transitions.push_back(std::move(e));
        }
    if (pc.contains("xor_groups"))
        a.pointcut.xor_groups = pc.at("xor_groups").get<std::vector<std::vector<std::size_t>>>();
    if (pc.contains("exposed"))
        a.pointcut.exposed = pc.at("exposed").get<std::set<std::string>>();
    if (j.contains("advice")) {
        const json& ad = j.at("advice");
        if (ad.contains("create_states"))
            for (const json& cj : ad.at("create_states")) {
                CreateState cs;
                cs.id = str_field(cj, "id", "created state");
                cs.name = cj.contains("name") ? cj.at("name").get<std::string>() : cs.id;
                if (cj.contains("kind"))
                    cs.kind = vertex_kind_from_string(cj.at("kind").get<std::string>());
                a.advice.create_states.push_back(std::move(cs));
            }
        if (ad.contains("create_transitions"))
            for (const json& cj : ad.at("create_transitions")) {
                CreateTransition ct;
                ct.source = str_field(cj, "source", "created transition");
                ct.event = str_field(cj, "event", "created transition");
                if (cj.contains("kind"))
                    ct.kind = transition_kind_from_string(cj.at("kind").get<std::string>());
                if (cj.contains("targets"))
                    ct.targets = cj.at("targets").get<std::vector<std::string>>();
                else
                    ct.targets.push_back(str_field(cj, "target", "created transition"));
                a.advice.create_transitions.push_back(std::move(ct));
            }
        if (ad.contains("delete"))
            a.advice.deletes = ad.at("delete").get<std::vector<std::string>>();
    }
    return a;
}

} // namespace

json concern_to_json(const Concern& c) {
    json aspects = json::array();
    for (const Aspect& a : c.aspects) aspects.push_back(aspect_to_json(a));
    return {{"name", c.name}, {"aspects", aspects}};
}

Concern concern_from_json(const json& j) {
    Concern c;
    c.name = str_field(j, "name", "concern");
    for (const json& aj : field(j, "aspects", "concern " + c.name))
        c.aspects.push_back(aspect_from_json(aj));
    return c;
}

json compiled_to_json(const std::vector<CompiledAspect>& compiled) {
    std::vector<Rule> rules;
    for (const CompiledAspect& ca : compiled)
        for (const Rule& r : ca.rules) rules.push_back(r);
    return rules_to_json(rules);
}

json critical_pair_to_json(const CriticalPair& cp) {
    return {{"first", cp.first},
            {"second", cp.second},
            {"kind", to_string(cp.kind)},
            {"overlap", graph_to_json(cp.overlap)},
            {"witness",
             {{"vertices", cp.witness.vertices}, {"edges", cp.witness.edges}}},
            {"first_embedding", morphism_to_json(cp.first_embedding)},
            {"second_embedding", morphism_to_json(cp.second_embedding)},
            {"nac_index", cp.nac_index}};
}

CriticalPair critical_pair_from_json(const json& j) {
    CriticalPair cp;
    cp.first = str_field(j, "first", "critical pair");
    cp.second = str_field(j, "second", "critical pair");
    cp.kind = interaction_kind_from_string(str_field(j, "kind", "critical pair"));
    cp.overlap = graph_from_json(field(j, "overlap", "critical pair"));
    if (j.contains("witness")) {
        cp.witness.vertices = j.at("witness").at("vertices").get<std::set<std::string>>();
        cp.witness.edges = j.at("witness").at("edges").get<std::set<std::string>>();
    }
    if (j.contains("first_embedding"))
        cp.first_embedding = morphism_from_json(j.at("first_embedding"));
    if (j.contains("second_embedding"))
        cp.second_embedding = morphism_from_json(j.at("second_embedding"));
    if (j.contains("nac_index")) cp.nac_index = j.at("nac_index").get<int>();
    return cp;
}

json report_to_json(const InteractionMatrix& matrix, const JoinpointTree& tree,
                    const ReportMeta& meta) {
    json conflict_matrix = json::array();
    json dependency_matrix = json::array();
    for (const auto& [key, cell] : matrix.cells) {
        json cpairs = json::array();
        for (const CriticalPair& cp : cell.conflict_pairs)
            cpairs.push_back(critical_pair_to_json(cp));
        conflict_matrix.push_back({{"first", key.first},
                                   {"second", key.second},
                                   {"pairs", cpairs},
                                   {"undecided", cell.undecided}});
        json dpairs = json::array();
        for (const CriticalPair& cp : cell.dependency_pairs)
            dpairs.push_back(critical_pair_to_json(cp));
        dependency_matrix.push_back({{"first", key.first},
                                     {"second", key.second},
                                     {"pairs", dpairs},
                                     {"undecided", cell.undecided}});
    }
    json nodes = json::array();
    for (const auto& [key, node] : tree.nodes)
        nodes.push_back({{"key", key},
                         {"overlap", graph_to_json(node.overlap)},
                         {"aspects", node.aspects}});
    return {{"aspects", matrix.aspects},
            {"conflict_matrix", conflict_matrix},
            {"dependency_matrix", dependency_matrix},
            {"joinpoint_tree", {{"nodes", nodes}}},
            {"meta",
             {{"rule_pair_count", meta.rule_pair_count},
              {"undecided_pairs", meta.undecided_pairs},
              {"engine_version", meta.engine_version}}}};
}

ReportDocument report_from_json(const json& j) {
    ReportDocument doc;
    doc.matrix.aspects = field(j, "aspects", "report").get<std::vector<std::string>>();
    for (const json& cj : field(j, "conflict_matrix", "report")) {
        PairKey key{str_field(cj, "first", "cell"), str_field(cj, "second", "cell")};
        auto& cell = doc.matrix.cells[key];
        for (const json& pj : field(cj, "pairs", "cell"))
            cell.conflict_pairs.push_back(critical_pair_from_json(pj));
        cell.undecided = cell.undecided || cj.value("undecided", false);
    }
    for (const json& cj : field(j, "dependency_matrix", "report")) {
        PairKey key{str_field(cj, "first", "cell"), str_field(cj, "second", "cell")};
        auto& cell = doc.matrix.cells[key];
        for (const json& pj : field(cj, "pairs", "cell"))
            cell.dependency_pairs.push_back(critical_pair_from_json(pj));
        cell.undecided = cell.undecided || cj.value("undecided", false);
    }
    if (j.contains("joinpoint_tree"))
        for (const json& nj : j.at("joinpoint_tree").at("nodes")) {
            JoinpointTree::Node node;
            node.overlap = graph_from_json(field(nj, "overlap", "joinpoint node"));
            node.aspects =
                nj.at("aspects").get<std::map<std::string, std::set<std::string>>>();
            doc.tree.nodes[str_field(nj, "key", "joinpoint node")] = std::move(node);
        }
    if (j.contains("meta")) {
        const json& m = j.at("meta");
        doc.meta.rule_pair_count = m.value("rule_pair_count", 0);
        doc.meta.undecided_pairs = m.value("undecided_pairs", 0);
        doc.meta.engine_version = m.value("engine_version", "");
    }
    return doc;
}

std::vector<CsvSummaryRow> parse_csv_summary(const std::string& text) {
    std::vector<CsvSummaryRow> rows;
    std::istringstream in(text);
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (header) {
            header = false;
            continue;
        }
        std::vector<std::string> fields;
        std::string cur;
        bool quoted = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            char c = line[i];
            if (quoted) {
                if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else if (c == '"') {
                    quoted = false;
                } else {
                    cur += c;
                }
            } else if (c == '"') {
                quoted = true;
            } else if (c == ',') {
                fields.push_back(cur);
                cur.clear();
            } else {
                cur += c;
            }
        }
        fields.push_back(cur);
        if (fields.size() != 5) throw IoError("csv summary: expected 5 fields per row");
        CsvSummaryRow row;
        row.first = fields[0];
        row.second = fields[1];
        row.conflicts = std::stoull(fields[2]);
        row.dependencies = std::stoull(fields[3]);
        row.undecided = fields[4] == "1";
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write file: " + path);
    out << content;
}

json load_json_file(const std::string& path) {
    const std::string text = read_file(path);
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw IoError(path + ": " + e.what());
    }
}

} // namespace aspectra
