#include "cpnconf/diagnostics.hpp"

#include "cpnconf/util.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace cpnconf {

namespace {

std::string fixed2(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    return buf;
}

const char* stage_name(JumpStage stage) {
    return stage == JumpStage::ControlFlow ? "control-flow" : "termination";
}

}  // namespace

DiagnosticsSummary aggregate(const std::vector<ReplayResult>& results, const CPN& cpn) {
    DiagnosticsSummary summary;
    summary.trace_count = results.size();
    for (const Arc& arc : cpn.arcs) summary.arc_means[{arc.from, arc.to}] = 0.0;
    for (const Transition& t : cpn.transitions) summary.measures[t.id] = {t.activity, 0, 0};
    summary.measures["termination"] = {"termination", 0, 0};
    for (DeviationKind kind :
         {DeviationKind::ControlFlow, DeviationKind::RuleViolation,
          DeviationKind::ResourceCorrupted, DeviationKind::NonproperTermination}) {
        summary.deviation_totals[kind] = 0;
    }

    for (const ReplayResult& result : results) {
        summary.totals.jumps += result.counters.jumps;
        summary.totals.consumed += result.counters.consumed;
        for (const DeviationRecord& d : result.deviations) {
            summary.deviation_totals[d.kind] += 1;
        }
        for (const auto& [edge, count] : result.arc_transfers) {
            summary.arc_means[edge] += static_cast<double>(count);
        }
        for (const auto& [edge, count] : result.jump_edges) {
            summary.jump_edges[edge].total += count;
        }
        for (const auto& [id, use] : result.transition_use) {
            MeasureStat& stat = summary.measures[id];
            if (stat.activity.empty()) {
                const Transition* t = cpn.find_transition(id);
                stat.activity = t != nullptr ? t->activity : id;
            }
            stat.via_model += use.via_model;
            stat.via_jump += use.via_jump;
        }
        std::size_t terminated_badly = result.count(DeviationKind::NonproperTermination);
        summary.measures["termination"].via_jump += terminated_badly;
        summary.measures["termination"].via_model += result.object_count - terminated_badly;
    }

    if (summary.trace_count > 0) {
        for (auto& [edge, sum] : summary.arc_means) {
            sum /= static_cast<double>(summary.trace_count);
        }
        for (auto& [edge, agg] : summary.jump_edges) {
            agg.mean = static_cast<double>(agg.total) / static_cast<double>(summary.trace_count);
        }
    }
    summary.aggregate_fitness = fitness(summary.totals);
    return summary;
}

nlohmann::ordered_json summary_to_json(const DiagnosticsSummary& summary) {
    nlohmann::ordered_json doc;
    doc["traces"] = summary.trace_count;
    doc["jumps"] = summary.totals.jumps;
    doc["consumed"] = summary.totals.consumed;
    doc["aggregate_fitness"] = summary.aggregate_fitness;

    nlohmann::ordered_json totals;
    for (const auto& [kind, count] : summary.deviation_totals) {
        totals[deviation_name(kind)] = count;
    }
    doc["deviation_totals"] = std::move(totals);

    doc["arc_means"] = nlohmann::ordered_json::array();
    for (const auto& [edge, mean] : summary.arc_means) {
        doc["arc_means"].push_back({{"from", edge.first}, {"to", edge.second}, {"mean", mean}});
    }

    doc["jump_edges"] = nlohmann::ordered_json::array();
    for (const auto& [edge, agg] : summary.jump_edges) {
        doc["jump_edges"].push_back({{"from", edge.from},
                                     {"to", edge.to},
                                     {"stage", stage_name(edge.stage)},
                                     {"total", agg.total},
                                     {"mean", agg.mean}});
    }

    doc["local_measures"] = nlohmann::ordered_json::array();
    for (const auto& [id, stat] : summary.measures) {
        doc["local_measures"].push_back({{"transition", id},
                                         {"activity", stat.activity},
                                         {"via_model", stat.via_model},
                                         {"via_jump", stat.via_jump},
                                         {"measure", stat.measure()}});
    }
    return doc;
}

std::string enhanced_model_dot(const CPN& cpn, const DiagnosticsSummary& summary) {
    std::ostringstream out;
    out << "digraph enhanced_model {\n";
    out << "rankdir=LR;\n";
    out << "node [fontname=\"Helvetica\"];\n";
    out << "edge [fontname=\"Helvetica\"];\n";

    for (const Place& p : cpn.places) {
        const char* shape = p.role == PlaceRole::Internal ? "circle" : "doublecircle";
        out << "\"" << p.id << "\" [shape=" << shape << ", label=\"" << p.id << "\\n"
            << cpn.colors[p.color].name << "\"];\n";
    }
    for (const Transition& t : cpn.transitions) {
        auto it = summary.measures.find(t.id);
        double measure = it != summary.measures.end() ? it->second.measure() : 1.0;
        out << "\"" << t.id << "\" [shape=box, label=\"" << t.activity << "\\n"
            << fixed2(measure) << "\"];\n";
    }
    for (const Arc& arc : cpn.arcs) {
        auto it = summary.arc_means.find({arc.from, arc.to});
        long shown = it != summary.arc_means.end() ? std::lround(it->second) : 0;
        out << "\"" << arc.from << "\" -> \"" << arc.to << "\" [label=\"" << shown << "\"];\n";
    }

    // Jump paths are extra dotted edges, merged across stages per (from,to).
    std::map<std::pair<std::string, std::string>, double> jump_means;
    for (const auto& [edge, agg] : summary.jump_edges) {
        jump_means[{edge.from, edge.to}] += agg.mean;
    }
    for (const auto& [edge, mean] : jump_means) {
        out << "\"" << edge.first << "\" -> \"" << edge.second
            << "\" [style=dotted, color=gray40, label=\"" << std::lround(mean) << "\"];\n";
    }

    out << "}\n";
    return out.str();
}

void export_enhanced_model(const CPN& cpn, const DiagnosticsSummary& summary,
                           const std::string& path) {
    write_text_file(path, enhanced_model_dot(cpn, summary));
}

}  // namespace cpnconf
