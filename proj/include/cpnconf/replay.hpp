#pragma once

#include "cpnconf/cpn.hpp"
#include "cpnconf/event_log.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace cpnconf {

enum class DeviationKind { ControlFlow, RuleViolation, ResourceCorrupted, NonproperTermination };

const char* deviation_code(DeviationKind kind);  // "CF" | "RV" | "RC" | "NT"
const char* deviation_name(DeviationKind kind);  // "CONTROL_FLOW" | ...

struct ControlFlowDetail {
    std::string from_place, to_place;
    bool operator==(const ControlFlowDetail&) const = default;
};

struct RuleViolationDetail {
    std::string place;
    std::string preceding_id;  // token that should have been consumed first
    bool operator==(const RuleViolationDetail&) const = default;
};

struct CorruptionDetail {
    std::string attribute;
    std::string expected;  // model-computed value, or "undefined (...)"
    std::string observed;
    bool operator==(const CorruptionDetail&) const = default;
};

struct TerminationDetail {
    std::string resting_place, sink_place;
    bool operator==(const TerminationDetail&) const = default;
};

using DeviationDetail =
    std::variant<ControlFlowDetail, RuleViolationDetail, CorruptionDetail, TerminationDetail>;

struct DeviationRecord {
    DeviationKind kind = DeviationKind::ControlFlow;
    std::string trace_id;
    std::optional<std::size_t> event_seq;  // absent for NONPROPER_TERMINATION
    std::optional<std::string> timestamp;
    std::optional<std::string> activity;
    std::string object_id;
    std::string description;
    DeviationDetail detail;

    bool operator==(const DeviationRecord&) const = default;
};

// jumps: tokens force-moved to enable firings or reach sinks.
// consumed: tokens consumed/produced, |R(e)| per firing plus |R(sigma)| at
// final sink consumption.
struct ReplayCounters {
    std::size_t jumps = 0;
    std::size_t consumed = 0;

    bool operator==(const ReplayCounters&) const = default;
};

// 1 - jumps/consumed, 1.0 for the vacuous zero-consumption case, clamped to
// [0,1] with an internal warning (the invariant suite keeps the clamp dead).
double fitness(const ReplayCounters& counters);

enum class JumpStage { ControlFlow, Termination };

struct JumpEdge {
    std::string from, to;
    JumpStage stage = JumpStage::ControlFlow;

    bool operator==(const JumpEdge&) const = default;
    auto operator<=>(const JumpEdge&) const = default;
};

// How often a transition consumed honestly vs after a forced jump; feeds the
// local conformance measure.
struct TransitionUse {
    std::size_t via_model = 0;
    std::size_t via_jump = 0;

    bool operator==(const TransitionUse&) const = default;
};

struct ReplayResult {
    std::string trace_id;
    std::size_t object_count = 0;  // |R(sigma)|
    std::vector<DeviationRecord> deviations;
    ReplayCounters counters;
    double trace_fitness = 1.0;
    std::optional<std::string> last_timestamp;  // operator context for NT rows

    std::map<JumpEdge, std::size_t> jump_edges;                         // sums to counters.jumps
    std::map<std::pair<std::string, std::string>, std::size_t> arc_transfers;  // per firing
    std::map<std::string, TransitionUse> transition_use;                // by transition id

    std::size_t count(DeviationKind kind) const;

    bool operator==(const ReplayResult&) const = default;
};

// Inserts each distinct trace object, with first-occurrence values, into the
// source place of its color; other places empty. MismatchError when the color
// is unknown, lacks a source place, or the values do not fit it.
Marking populate_source_places(const CPN& cpn, const Trace& trace);

// Force-moves the token carrying `object_id` into `target` (values
// unchanged) and returns the place it came from. logic_error when the token
// exists nowhere; MismatchError when its current place's color differs from
// the target's.
std::string jump(const CPN& cpn, Marking& marking, const Value& object_id, std::size_t target);

// Full object-centric replay of one trace. Requires a conservative-workflow
// net with empty initial marking and a syntactically correct trace; violated
// preconditions surface as logic_error.
ReplayResult replay_trace(const CPN& cpn, const Trace& trace);

struct LogReplay {
    std::vector<ReplayResult> per_trace;  // in log order, independent of jobs
    ReplayCounters totals;
    double aggregate_fitness = 1.0;  // 1 - (sum j)/(sum k)
};

// Replays traces independently on `jobs` threads (0 or 1 = sequential) and
// merges results in trace order.
LogReplay replay_log(const CPN& cpn, const EventLog& log, unsigned jobs = 1);

}  // namespace cpnconf
