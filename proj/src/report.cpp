#include "cpnconf/report.hpp"

#include "cpnconf/util.hpp"

#include <cstdio>
#include <sstream>

namespace cpnconf {

namespace {

std::string fixed(double x, int decimals) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, x);
    return buf;
}

void count_line(std::ostringstream& out, const std::string& label, std::size_t cf, std::size_t rv,
                std::size_t rc, std::size_t nt, const ReplayCounters& counters,
                double fitness_value) {
    out << "# " << label << ": CF=" << cf << " RV=" << rv << " RC=" << rc << " NT=" << nt
        << " jumps=" << counters.jumps << " consumed=" << counters.consumed
        << " fitness=" << fixed(fitness_value, 2) << "\n";
}

}  // namespace

std::string deviations_tsv(const LogReplay& replay) {
    std::ostringstream out;
    out << "trace\tevent\tts\tactivity\tobject\tkind\tdescription\n";
    for (const ReplayResult& result : replay.per_trace) {
        for (const DeviationRecord& d : result.deviations) {
            out << d.trace_id << "\t";
            if (d.event_seq) {
                out << *d.event_seq;
            }
            out << "\t";
            if (d.timestamp) {
                out << *d.timestamp;
            } else if (d.kind == DeviationKind::NonproperTermination && result.last_timestamp) {
                out << "end@" << *result.last_timestamp;
            }
            out << "\t" << d.activity.value_or("") << "\t" << d.object_id << "\t"
                << deviation_code(d.kind) << "\t" << d.description << "\n";
        }
    }

    std::size_t cf = 0, rv = 0, rc = 0, nt = 0;
    for (const ReplayResult& result : replay.per_trace) {
        std::size_t tcf = result.count(DeviationKind::ControlFlow);
        std::size_t trv = result.count(DeviationKind::RuleViolation);
        std::size_t trc = result.count(DeviationKind::ResourceCorrupted);
        std::size_t tnt = result.count(DeviationKind::NonproperTermination);
        cf += tcf;
        rv += trv;
        rc += trc;
        nt += tnt;
        count_line(out, "trace " + result.trace_id, tcf, trv, trc, tnt, result.counters,
                   result.trace_fitness);
    }
    count_line(out, "total", cf, rv, rc, nt, replay.totals, replay.aggregate_fitness);
    return out.str();
}

std::string fitness_csv(const LogReplay& replay) {
    std::ostringstream out;
    out << "trace,jumps,consumed,fitness\n";
    for (const ReplayResult& result : replay.per_trace) {
        out << result.trace_id << "," << result.counters.jumps << "," << result.counters.consumed
            << "," << fixed(result.trace_fitness, 6) << "\n";
    }
    out << "TOTAL," << replay.totals.jumps << "," << replay.totals.consumed << ","
        << fixed(replay.aggregate_fitness, 6) << "\n";
    return out.str();
}

nlohmann::ordered_json manifest_to_json(const RunManifest& manifest) {
    nlohmann::ordered_json doc;
    doc["command"] = manifest.command;
    doc["inputs"] = manifest.inputs;
    if (manifest.seed) doc["seed"] = *manifest.seed;
    if (!manifest.model_hash.empty()) doc["model_hash"] = manifest.model_hash;
    doc["traces"] = manifest.trace_count;
    doc["events"] = manifest.event_count;
    doc["outputs"] = manifest.outputs;
    doc["wall_ms"] = manifest.wall_ms;
    return doc;
}

void write_manifest(const RunManifest& manifest, const std::string& path) {
    write_text_file(path, manifest_to_json(manifest).dump(2) + "\n");
}

}  // namespace cpnconf
