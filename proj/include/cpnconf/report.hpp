#pragma once

#include "cpnconf/replay.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cpnconf {

// Deviations table, one record per line:
//   trace, event, ts, activity, object, kind, description
// Termination records have no event of their own; their ts column reads
// "end@<last event ts>" for operator context. A "#" footer carries per-trace
// and aggregate counters.
std::string deviations_tsv(const LogReplay& replay);

// Per-trace fitness table: trace, jumps, consumed, fitness; final TOTAL row.
std::string fitness_csv(const LogReplay& replay);

// One human/machine-readable record per CLI run, written alongside outputs.
struct RunManifest {
    std::string command;
    std::vector<std::string> inputs;
    std::optional<std::uint64_t> seed;
    std::string model_hash;  // fnv1a-64 of the model file bytes
    std::size_t trace_count = 0;
    std::size_t event_count = 0;
    std::vector<std::string> outputs;
    std::int64_t wall_ms = 0;
};

nlohmann::ordered_json manifest_to_json(const RunManifest& manifest);
void write_manifest(const RunManifest& manifest, const std::string& path);

}  // namespace cpnconf
