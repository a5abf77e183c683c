#include "aspectra/report.hpp"

#include <algorithm>

#include "aspectra/canonical.hpp"
#include "aspectra/io.hpp"

namespace aspectra {

namespace {

void fold_verdicts(InteractionMatrix& m, const AnalysisResult& analysis) {
    for (const auto& [key, verdict] : analysis.verdicts) {
        const std::string first_aspect = parse_rule_name(verdict.first).first;
        const std::string second_aspect = parse_rule_name(verdict.second).first;
        if (first_aspect == second_aspect) continue; // intra-aspect is ignored

        InteractionMatrix::Cell& forward = m.cells[{first_aspect, second_aspect}];
        InteractionMatrix::Cell& backward = m.cells[{second_aspect, first_aspect}];
        for (const CriticalPair& cp : verdict.conflicts)
            forward.conflict_pairs.push_back(cp);
        // p1 enables p2: the second aspect depends on the first
        for (const CriticalPair& cp : verdict.dependencies)
            backward.dependency_pairs.push_back(cp);
        if (verdict.undecided) {
            forward.undecided = true;
            backward.undecided = true;
        }
    }
}

void materialize_cells(InteractionMatrix& m) {
    for (const std::string& a : m.aspects)
        for (const std::string& b : m.aspects)
            if (a != b) m.cells.try_emplace({a, b});
}

} // namespace

InteractionMatrix aggregate(const std::vector<CompiledAspect>& compiled,
                            const AnalysisResult& analysis) {
    InteractionMatrix m;
    for (const CompiledAspect& ca : compiled) m.aspects.push_back(ca.name);
    materialize_cells(m);
    fold_verdicts(m, analysis);
    return m;
}

JoinpointTree joinpoint_tree(const AnalysisResult& analysis) {
    JoinpointTree tree;
    for (const auto& [key, verdict] : analysis.verdicts) {
        const std::string first_aspect = parse_rule_name(verdict.first).first;
        const std::string second_aspect = parse_rule_name(verdict.second).first;
        if (first_aspect == second_aspect) continue;
        auto add = [&](const CriticalPair& cp) {
            std::string id = canonical_form(cp.overlap);
            auto [it, fresh] = tree.nodes.try_emplace(id);
            // relabeled so any contributing pair stores identical bytes
            if (fresh) it->second.overlap = canonical_relabel(cp.overlap);
            it->second.aspects[first_aspect].insert(cp.first);
            it->second.aspects[second_aspect].insert(cp.second);
        };
        for (const CriticalPair& cp : verdict.conflicts) add(cp);
        for (const CriticalPair& cp : verdict.dependencies) add(cp);
    }
    return tree;
}

IncrementalResult incremental_update(const InteractionMatrix& matrix,
                                     const std::vector<CompiledAspect>& compiled,
                                     const CompiledAspect& new_aspect,
                                     const AnalysisOptions& opts) {
    for (const std::string& a : matrix.aspects)
        if (a == new_aspect.name)
            throw DuplicateAspectName("aspect already in matrix: " + new_aspect.name);

    std::vector<Rule> rules;
    for (const CompiledAspect& ca : compiled)
        if (ca.name != new_aspect.name)
            for (const Rule& r : ca.rules) rules.push_back(r);
    const std::size_t old_count = rules.size();
    for (const Rule& r : new_aspect.rules) rules.push_back(r);

    // exactly the ordered pairs involving the new aspect
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t n = old_count; n < rules.size(); ++n)
        for (std::size_t o = 0; o < old_count; ++o) {
            pairs.emplace_back(n, o);
            pairs.emplace_back(o, n);
        }
    for (std::size_t a = old_count; a < rules.size(); ++a)
        for (std::size_t b = old_count; b < rules.size(); ++b)
            if (a != b) pairs.emplace_back(a, b);
    std::sort(pairs.begin(), pairs.end());

    IncrementalResult res;
    res.analysis = analyze_rule_pairs(rules, pairs, opts);

    res.matrix.aspects = matrix.aspects;
    res.matrix.aspects.push_back(new_aspect.name);
    res.matrix.cells = matrix.cells; // existing cells untouched
    materialize_cells(res.matrix);
    fold_verdicts(res.matrix, res.analysis);
    return res;
}

ReportFormat report_format_from_string(const std::string& s) {
    if (s == "table") return ReportFormat::table;
    if (s == "csv") return ReportFormat::csv;
    if (s == "document" || s == "json") return ReportFormat::document;
    if (s == "dot") return ReportFormat::dot;
    throw UnknownFormat("unknown report format: " + s);
}

std::uint64_t count_undecided_cells(const InteractionMatrix& matrix) {
    std::uint64_t n = 0;
    for (const auto& [key, cell] : matrix.cells)
        if (cell.undecided) ++n;
    return n;
}

namespace {

std::string cell_glyph(const InteractionMatrix& m, const std::string& a,
                       const std::string& b) {
    const InteractionMatrix::Cell* ab = m.cell(a, b);
    const InteractionMatrix::Cell* ba = m.cell(b, a);
    bool conflict = (ab && !ab->conflict_pairs.empty()) || (ba && !ba->conflict_pairs.empty());
    bool dependency = ab && !ab->dependency_pairs.empty();
    if (conflict && dependency) return "CD";
    if (conflict) return "C";
    if (dependency) return "D";
    if (ab && ab->undecided) return "?";
    return ".";
}

std::string render_table(const InteractionMatrix& m) {
    std::size_t width = 2;
    for (const std::string& a : m.aspects) width = std::max(width, a.size());
    auto pad = [&](const std::string& s) {
        std::string out = s;
        out.resize(width, ' ');
        return out;
    };
    std::string out = pad("") + " |";
    for (const std::string& b : m.aspects) out += " " + pad(b);
    out += "\n";
    for (const std::string& a : m.aspects) {
        out += pad(a) + " |";
        for (const std::string& b : m.aspects)
            out += " " + pad(a == b ? "-" : cell_glyph(m, a, b));
        out += "\n";
    }
    return out;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += "\"";
    return out;
}

std::string render_csv(const InteractionMatrix& m) {
    std::string out = "first,second,conflicts,dependencies,undecided\n";
    for (const std::string& a : m.aspects)
        for (const std::string& b : m.aspects) {
            if (a == b) continue;
            const InteractionMatrix::Cell* cell = m.cell(a, b);
            out += csv_field(a) + "," + csv_field(b) + "," +
                   std::to_string(cell ? cell->conflict_pairs.size() : 0) + "," +
                   std::to_string(cell ? cell->dependency_pairs.size() : 0) + "," +
                   ((cell && cell->undecided) ? "1" : "0") + "\n";
        }
    return out;
}

std::string render_dot(const InteractionMatrix& m) {
    std::string out = "digraph interactions {\n  node [shape=box];\n";
    for (const std::string& a : m.aspects) out += "  \"" + a + "\";\n";
    for (const auto& [key, cell] : m.cells) {
        if (!cell.conflict_pairs.empty())
            out += "  \"" + key.first + "\" -> \"" + key.second +
                   "\" [color=red, label=\"conflict\"];\n";
        if (!cell.dependency_pairs.empty())
            out += "  \"" + key.first + "\" -> \"" + key.second +
                   "\" [color=blue, label=\"depends\"];\n";
    }
    out += "}\n";
    return out;
}

} // namespace

std::string render(const InteractionMatrix& matrix, const JoinpointTree& tree,
                   const ReportMeta& meta, ReportFormat format) {
    switch (format) {
    case ReportFormat::table: return render_table(matrix);
    case ReportFormat::csv: return render_csv(matrix);
    case ReportFormat::document: return report_to_json(matrix, tree, meta).dump(2) + "\n";
    case ReportFormat::dot: return render_dot(matrix);
    }
    throw UnknownFormat("unknown report format");
}

} // namespace aspectra
