#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "aspectra/canonical.hpp"
#include "aspectra/io.hpp"
#include "aspectra/oracle.hpp"
#include "aspectra/version.hpp"

namespace {

using namespace aspectra;

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitInput = 2;
constexpr int kExitFindings = 3;

struct GlobalOpts {
    std::string format = "json";
    unsigned jobs = 0; // 0 = hardware concurrency
    std::size_t max_overlaps = kDefaultOverlapCap;
    bool max_overlaps_set = false;
    long seed = 0; // reserved for randomized harnesses
    std::string out;
};

void emit(const GlobalOpts& g, const std::string& content) {
    if (g.out.empty())
        std::cout << content;
    else
        write_file(g.out, content);
}

std::size_t effective_cap(const GlobalOpts& g) {
    if (g.max_overlaps_set) return g.max_overlaps;
    if (const char* env = std::getenv("ASPECTRA_MAX_OVERLAPS")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
        throw IoError("ASPECTRA_MAX_OVERLAPS must be a positive integer");
    }
    return g.max_overlaps;
}

struct LoadedAspects {
    std::vector<CompiledAspect> compiled;
    std::vector<Rule> rules;
};

// Accepts either a concern file ({"name","aspects":[...]}) or a compiled
// rules file ({"rules":[...]}); rule files regroup by the naming convention.
LoadedAspects load_rules_or_aspects(const std::string& path) {
    LoadedAspects out;
    json j = load_json_file(path);
    if (j.contains("rules")) {
        out.rules = rules_from_json(j);
        std::map<std::string, std::size_t> index;
        for (const Rule& r : out.rules) {
            std::string aspect = parse_rule_name(r.name).first;
            auto it = index.find(aspect);
            if (it == index.end()) {
                index.emplace(aspect, out.compiled.size());
                out.compiled.push_back({aspect, {}});
                it = index.find(aspect);
            }
            out.compiled[it->second].rules.push_back(r);
        }
        return out;
    }
    Concern concern = concern_from_json(j);
    out.compiled = compile_all({concern});
    for (const CompiledAspect& ca : out.compiled)
        for (const Rule& r : ca.rules) out.rules.push_back(r);
    return out;
}

int cmd_flatten(const GlobalOpts& g, const std::string& model_path, bool prune) {
    StateMachine sm = model_from_json(load_json_file(model_path));
    std::vector<Diagnostic> diags = validate(sm);
    if (!diags.empty()) {
        for (const Diagnostic& d : diags)
            std::cerr << model_path << ": [" << d.element << "] " << d.message << "\n";
        return kExitInput;
    }
    Graph flat = flatten(sm, {prune});
    if (g.format == "dot")
        emit(g, graph_to_dot(flat));
    else if (g.format == "json")
        emit(g, graph_to_json(flat).dump(2) + "\n");
    else
        throw UnknownFormat("flatten supports formats json and dot, not " + g.format);
    return kExitOk;
}

int cmd_compile(const GlobalOpts& g, const std::string& aspects_path, bool stats) {
    Concern concern = concern_from_json(load_json_file(aspects_path));
    std::vector<CompiledAspect> compiled = compile_all({concern});
    if (stats) {
        std::string line;
        std::size_t total = 0;
        for (const CompiledAspect& ca : compiled) {
            line += ca.name + ":" + std::to_string(ca.rules.size()) + " ";
            total += ca.rules.size();
        }
        line += "total:" + std::to_string(total);
        std::cout << line << "\n";
        if (!g.out.empty()) write_file(g.out, compiled_to_json(compiled).dump(2) + "\n");
        return kExitOk;
    }
    emit(g, compiled_to_json(compiled).dump(2) + "\n");
    return kExitOk;
}

int cmd_analyze(const GlobalOpts& g, const std::string& input_path,
                const std::string& baseline_path, const std::string& added_path,
                bool fail_on_conflict) {
    AnalysisOptions opts;
    opts.cap = effective_cap(g);
    opts.jobs = g.jobs;

    InteractionMatrix matrix;
    JoinpointTree tree;
    ReportMeta meta;
    meta.engine_version = kEngineVersion;

    LoadedAspects base = load_rules_or_aspects(input_path);
    if (baseline_path.empty() != added_path.empty())
        throw IoError("--baseline and --added must be used together");

    if (baseline_path.empty()) {
        AnalysisResult analysis = analyze_rules(base.rules, opts);
        matrix = aggregate(base.compiled, analysis);
        tree = joinpoint_tree(analysis);
        meta.rule_pair_count = analysis.pairs_analyzed;
    } else {
        ReportDocument doc = report_from_json(load_json_file(baseline_path));
        LoadedAspects added = load_rules_or_aspects(added_path);
        matrix = doc.matrix;
        tree = doc.tree;
        meta.rule_pair_count = doc.meta.rule_pair_count;
        std::vector<CompiledAspect> pool = base.compiled;
        for (const CompiledAspect& ca : added.compiled) {
            IncrementalResult inc = incremental_update(matrix, pool, ca, opts);
            matrix = std::move(inc.matrix);
            meta.rule_pair_count += inc.analysis.pairs_analyzed;
            JoinpointTree delta = joinpoint_tree(inc.analysis);
            for (auto& [key, node] : delta.nodes) {
                auto [it, fresh] = tree.nodes.try_emplace(key, node);
                if (!fresh)
                    for (auto& [aspect, rules] : node.aspects)
                        it->second.aspects[aspect].insert(rules.begin(), rules.end());
            }
            pool.push_back(ca);
        }
    }
    meta.undecided_pairs = count_undecided_cells(matrix);

    emit(g, render(matrix, tree, meta, report_format_from_string(g.format)));

    if (fail_on_conflict)
        for (const auto& [key, cell] : matrix.cells)
            if (!cell.conflict_pairs.empty()) return kExitFindings;
    return kExitOk;
}

int cmd_oracle(const GlobalOpts& g, const std::string& model_path,
               const std::string& aspects_path, const std::string& pair,
               bool all, const std::string& against_path) {
    StateMachine sm = model_from_json(load_json_file(model_path));
    std::vector<Diagnostic> diags = validate(sm);
    if (!diags.empty()) {
        for (const Diagnostic& d : diags)
            std::cerr << model_path << ": [" << d.element << "] " << d.message << "\n";
        return kExitInput;
    }
    LoadedAspects loaded = load_rules_or_aspects(aspects_path);
    auto find = [&](const std::string& name) -> const CompiledAspect& {
        for (const CompiledAspect& ca : loaded.compiled)
            if (ca.name == name) return ca;
        throw IoError("no aspect named '" + name + "' in " + aspects_path);
    };

    if (!against_path.empty()) {
        ReportDocument doc = report_from_json(load_json_file(against_path));
        std::vector<Discrepancy> ds = cross_check(sm, loaded.compiled, doc.matrix);
        for (const Discrepancy& d : ds)
            std::cout << d.aspect_a << "," << d.aspect_b << ": oracle="
                      << to_string(d.oracle.classification) << " cpa=" << d.cpa_summary
                      << " (" << d.note << ")\n";
        if (!ds.empty()) return kExitFindings;
        std::cout << "cross-check clean: " << loaded.compiled.size() << " aspects\n";
        return kExitOk;
    }

    std::vector<std::pair<std::string, std::string>> pairs;
    if (all) {
        for (std::size_t i = 0; i < loaded.compiled.size(); ++i)
            for (std::size_t j = i + 1; j < loaded.compiled.size(); ++j)
                pairs.emplace_back(loaded.compiled[i].name, loaded.compiled[j].name);
    } else {
        auto comma = pair.find(',');
        if (pair.empty() || comma == std::string::npos)
            throw IoError("--pair expects 'A,B'");
        std::string a = pair.substr(0, comma), b = pair.substr(comma + 1);
        if (a == b) throw IoError("self-pair rejected: " + a);
        pairs.emplace_back(a, b);
    }
    for (const auto& [a, b] : pairs) {
        OracleVerdict v = classify_pair(sm, find(a), find(b));
        std::cout << a << "," << b << ": " << to_string(v.classification)
                  << "  [m12=m21:" << v.evidence.m12_iso_m21
                  << " m12=m2:" << v.evidence.m12_iso_m2
                  << " m21=m1:" << v.evidence.m21_iso_m1
                  << " m12=m1:" << v.evidence.m12_iso_m1
                  << " m21=m2:" << v.evidence.m21_iso_m2 << "]\n";
    }
    return kExitOk;
}

int cmd_export(const GlobalOpts& g, const std::string& input_path) {
    json j = load_json_file(input_path);
    const std::string format = g.format;
    if (j.contains("vertices")) {
        Graph graph = graph_from_json(j);
        if (format == "dot") return emit(g, graph_to_dot(graph)), kExitOk;
        if (format == "json") return emit(g, graph_to_json(graph).dump(2) + "\n"), kExitOk;
        throw UnknownFormat("graph export supports json and dot");
    }
    if (j.contains("rules")) {
        std::vector<Rule> rules = rules_from_json(j);
        if (format == "dot") {
            std::string out;
            for (const Rule& r : rules) out += rule_to_dot(r);
            return emit(g, out), kExitOk;
        }
        if (format == "json") return emit(g, rules_to_json(rules).dump(2) + "\n"), kExitOk;
        throw UnknownFormat("rules export supports json and dot");
    }
    if (j.contains("conflict_matrix")) {
        ReportDocument doc = report_from_json(j);
        return emit(g, render(doc.matrix, doc.tree, doc.meta,
                              report_format_from_string(format))),
               kExitOk;
    }
    throw IoError(input_path + ": unrecognized document (expected graph, rules, or report)");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Aspect interference analysis over state-machine models"};
    app.set_version_flag("--version", std::string("aspectra ") + kEngineVersion);
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--format", g.format, "Output format: json, csv, table, dot")
        ->capture_default_str();
    app.add_option("--jobs", g.jobs, "Worker count (0 = hardware concurrency)")
        ->capture_default_str();
    auto* cap_opt = app.add_option("--max-overlaps", g.max_overlaps,
                                   "Overlap cap per rule pair (env ASPECTRA_MAX_OVERLAPS)");
    app.add_option("--seed", g.seed, "Seed for randomized harnesses");
    app.add_option("--out", g.out, "Write output to a file instead of stdout");

    std::string model_path, aspects_path, input_path, baseline, added, pair, against;
    bool prune = false, stats = false, fail_on_conflict = false, all_pairs = false;

    CLI::App* flatten_cmd =
        app.add_subcommand("flatten", "Flatten a state-machine model into a graph");
    flatten_cmd->add_option("model", model_path, "Model file (json)")->required();
    flatten_cmd->add_flag("--prune-unreachable", prune,
                          "Drop vertices unreachable from the initial state");

    CLI::App* compile_cmd =
        app.add_subcommand("compile", "Compile aspects into GT rules");
    compile_cmd->add_option("aspects", aspects_path, "Concern file (json)")->required();
    compile_cmd->add_flag("--stats", stats, "Print per-aspect rule counts");

    CLI::App* analyze_cmd =
        app.add_subcommand("analyze", "Pairwise critical pair analysis and report");
    analyze_cmd->add_option("input", input_path, "Rules or concern file")->required();
    analyze_cmd->add_option("--baseline", baseline, "Existing report for incremental update");
    analyze_cmd->add_option("--added", added, "Aspects to add incrementally");
    analyze_cmd->add_flag("--fail-on-conflict", fail_on_conflict,
                          "Exit 3 when any conflict cell is nonempty");

    CLI::App* oracle_cmd =
        app.add_subcommand("oracle", "Both-orders weaving comparison on a base model");
    oracle_cmd->add_option("model", model_path, "Model file (json)")->required();
    oracle_cmd->add_option("aspects", aspects_path, "Concern or rules file")->required();
    oracle_cmd->add_option("--pair", pair, "Aspect pair 'A,B'");
    oracle_cmd->add_flag("--all", all_pairs, "Classify every unordered pair");
    oracle_cmd->add_option("--against", against, "Cross-check against a CPA report");

    CLI::App* export_cmd =
        app.add_subcommand("export", "Re-render a graph/rules/report document");
    export_cmd->add_option("input", input_path, "Document to convert")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitInput;
    }
    g.max_overlaps_set = cap_opt->count() > 0;

    try {
        if (flatten_cmd->parsed()) return cmd_flatten(g, model_path, prune);
        if (compile_cmd->parsed()) return cmd_compile(g, aspects_path, stats);
        if (analyze_cmd->parsed())
            return cmd_analyze(g, input_path, baseline, added, fail_on_conflict);
        if (oracle_cmd->parsed())
            return cmd_oracle(g, model_path, aspects_path, pair, all_pairs, against);
        if (export_cmd->parsed()) return cmd_export(g, input_path);
        return kExitInput;
    } catch (const aspectra::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}
