#pragma once

#include "cpnconf/cpn.hpp"
#include "cpnconf/validation.hpp"
#include "cpnconf/values.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cpnconf {

// One object's state carried by an event; values[0] is the identifier, which
// must stay identical across all appearances of the object.
struct ObjectState {
    std::string color;
    Token values;

    const Value& id() const { return values.at(0); }

    bool operator==(const ObjectState&) const = default;
};

struct EventRecord {
    std::size_t seq = 0;
    std::string activity;
    std::optional<std::string> timestamp;  // opaque; replay ordering uses seq
    std::vector<ObjectState> objects;      // canonically sorted by identifier

    bool operator==(const EventRecord&) const = default;
};

struct Trace {
    std::string trace_id;
    std::vector<EventRecord> events;

    bool operator==(const Trace&) const = default;
};

struct EventLog {
    std::vector<Trace> traces;

    std::size_t event_count() const;

    bool operator==(const EventLog&) const = default;
};

// First occurrence of one distinct object within a trace.
struct TraceObject {
    std::string color;
    Token first_values;
    std::size_t first_seq = 0;

    const Value& id() const { return first_values.at(0); }

    bool operator==(const TraceObject&) const = default;
};

// Distinct objects of a trace with first-occurrence values, ordered by first
// occurrence and then identifier. Conflicting colors for one identifier raise
// ValidationError.
std::vector<TraceObject> distinct_objects(const Trace& trace);

// Per-event activity/object-bijection checks against a net: a transition must
// carry the event's activity, and the event's objects must pair one-to-one by
// color with the transition's input places. Violations are data.
ValidationReport check_syntactic_correctness(const EventLog& log, const CPN& cpn);
ValidationReport check_syntactic_correctness(const Trace& trace, const CPN& cpn);

// JSONL, one event per line:
//   {"trace": id, "seq": n, "ts": "...", "activity": "...",
//    "objects": [{"color": "...", "values": [...]}]}
// "#"-prefixed lines are comments and survive only as read-side noise.
// Traces group by consecutive "trace" ids; seq must strictly increase within
// a trace. Malformed lines raise ParseError with the line number; schema
// breaches (duplicate ids in one event, cross-event color conflicts) raise
// ValidationError.
EventLog parse_log(const std::string& text, const std::string& source_name = "log");
EventLog read_log(const std::string& path);

// Canonical serialization: objects sorted by identifier, minimal JSON, one
// event per line. `header_comments` lines are emitted first, "#"-prefixed.
std::string write_log_string(const EventLog& log,
                             const std::vector<std::string>& header_comments = {});
void write_log(const EventLog& log, const std::string& path,
               const std::vector<std::string>& header_comments = {});

// Canonical in-memory form: objects of every event sorted by identifier.
void canonicalize(EventLog& log);

}  // namespace cpnconf
