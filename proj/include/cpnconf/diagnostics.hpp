#pragma once

#include "cpnconf/cpn.hpp"
#include "cpnconf/replay.hpp"

#include <json.hpp>

#include <map>
#include <string>
#include <vector>

namespace cpnconf {

struct JumpAggregate {
    std::size_t total = 0;
    double mean = 0.0;  // total / trace count

    bool operator==(const JumpAggregate&) const = default;
};

// Consumption accounting for one transition (or the termination pseudo-stage
// keyed "termination"): a consumption conforms when its object reached the
// input place without a forced jump for that event.
struct MeasureStat {
    std::string activity;
    std::size_t via_model = 0;
    std::size_t via_jump = 0;

    double measure() const {
        std::size_t total = via_model + via_jump;
        return total == 0 ? 1.0 : static_cast<double>(via_model) / static_cast<double>(total);
    }

    bool operator==(const MeasureStat&) const = default;
};

struct DiagnosticsSummary {
    std::size_t trace_count = 0;
    ReplayCounters totals;
    double aggregate_fitness = 1.0;
    std::map<DeviationKind, std::size_t> deviation_totals;

    // Every model arc appears, unfired ones with mean 0.
    std::map<std::pair<std::string, std::string>, double> arc_means;
    std::map<JumpEdge, JumpAggregate> jump_edges;  // observed forced moves only
    std::map<std::string, MeasureStat> measures;   // transition id -> stat

    bool operator==(const DiagnosticsSummary&) const = default;
};

// Folds per-trace replay results into log-level diagnostics. Results must all
// come from `cpn`; an empty list yields the zeroed summary.
DiagnosticsSummary aggregate(const std::vector<ReplayResult>& results, const CPN& cpn);

nlohmann::ordered_json summary_to_json(const DiagnosticsSummary& summary);

// Graphviz rendering of the net with conformance annotations: solid arcs
// labeled with rounded mean transfers, dotted edges for jump paths, and
// transitions labeled "activity\nmeasure". One statement per line.
std::string enhanced_model_dot(const CPN& cpn, const DiagnosticsSummary& summary);

void export_enhanced_model(const CPN& cpn, const DiagnosticsSummary& summary,
                           const std::string& path);

}  // namespace cpnconf
