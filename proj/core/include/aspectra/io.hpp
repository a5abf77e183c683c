#ifndef ASPECTRA_IO_HPP
#define ASPECTRA_IO_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "aspectra/aspect.hpp"
#include "aspectra/cpa.hpp"
#include "aspectra/graph.hpp"
#include "aspectra/report.hpp"
#include "aspectra/rule.hpp"
#include "aspectra/statechart.hpp"

namespace aspectra {

using json = nlohmann::json;

// graph exchange format
json graph_to_json(const Graph& g);
Graph graph_from_json(const json& j);
std::string graph_to_dot(const Graph& g);

json morphism_to_json(const Morphism& m);
Morphism morphism_from_json(const json& j);

// rule exchange format; a rules file is {"rules": [...]}
json rule_to_json(const Rule& r);
Rule rule_from_json(const json& j);
json rules_to_json(const std::vector<Rule>& rules);
std::vector<Rule> rules_from_json(const json& j);
std::string rule_to_dot(const Rule& r);

// statechart model file
json model_to_json(const StateMachine& sm);
StateMachine model_from_json(const json& j);

// aspect / concern files
json concern_to_json(const Concern& c);
Concern concern_from_json(const json& j);
json compiled_to_json(const std::vector<CompiledAspect>& compiled);

json critical_pair_to_json(const CriticalPair& cp);
CriticalPair critical_pair_from_json(const json& j);

// report document
struct ReportDocument {
    InteractionMatrix matrix;
    JoinpointTree tree;
    ReportMeta meta;
};

json report_to_json(const InteractionMatrix& matrix, const JoinpointTree& tree,
                    const ReportMeta& meta);
ReportDocument report_from_json(const json& j);

struct CsvSummaryRow {
    std::string first, second;
    std::uint64_t conflicts = 0, dependencies = 0;
    bool undecided = false;

    bool operator==(const CsvSummaryRow&) const = default;
};
std::vector<CsvSummaryRow> parse_csv_summary(const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);
json load_json_file(const std::string& path);

} // namespace aspectra

#endif
