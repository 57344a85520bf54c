#include "cpnconf/event_log.hpp"

#include "cpnconf/errors.hpp"
#include "cpnconf/util.hpp"

#include <json.hpp>

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace cpnconf {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

void sort_objects(EventRecord& event) {
    std::stable_sort(event.objects.begin(), event.objects.end(),
                     [](const ObjectState& a, const ObjectState& b) {
                         return compare_values(a.id(), b.id()) < 0;
                     });
}

Value value_from_json(const json& v, const std::string& where) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer() || v.is_number_unsigned()) return v.get<std::int64_t>();
    if (v.is_number_float()) return v.get<double>();
    throw ParseError("object values must be strings or numbers", where);
}

ordered_json value_to_json(const Value& v) {
    if (const auto* i = std::get_if<std::int64_t>(&v)) return *i;
    if (const auto* d = std::get_if<double>(&v)) return *d;
    return std::get<std::string>(v);
}

}  // namespace

std::size_t EventLog::event_count() const {
    std::size_t n = 0;
    for (const Trace& t : traces) n += t.events.size();
    return n;
}

void canonicalize(EventLog& log) {
    for (Trace& trace : log.traces) {
        for (EventRecord& event : trace.events) sort_objects(event);
    }
}

EventLog parse_log(const std::string& text, const std::string& source_name) {
    EventLog log;
    // Log-wide: one identifier keeps one color and one arity everywhere.
    std::map<std::string, std::pair<std::string, std::size_t>> shape_of_id;

    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        const std::string where = source_name + ":" + std::to_string(line_no);

        json doc;
        try {
            doc = json::parse(line);
        } catch (const json::parse_error& e) {
            throw ParseError(e.what(), where);
        }
        if (!doc.is_object()) throw ParseError("event line must be a JSON object", where);
        for (const char* key : {"trace", "seq", "activity", "objects"}) {
            if (!doc.contains(key)) {
                throw ParseError(std::string("missing required field '") + key + "'", where);
            }
        }
        if (!doc["trace"].is_string()) throw ParseError("'trace' must be a string", where);
        if (!doc["seq"].is_number_integer() && !doc["seq"].is_number_unsigned()) {
            throw ParseError("'seq' must be an integer", where);
        }
        if (!doc["activity"].is_string()) throw ParseError("'activity' must be a string", where);
        if (!doc["objects"].is_array()) throw ParseError("'objects' must be an array", where);

        std::string trace_id = doc["trace"].get<std::string>();
        EventRecord event;
        event.seq = doc["seq"].get<std::size_t>();
        event.activity = doc["activity"].get<std::string>();
        if (doc.contains("ts")) {
            if (!doc["ts"].is_string()) throw ParseError("'ts' must be a string", where);
            event.timestamp = doc["ts"].get<std::string>();
        }

        for (const json& o : doc["objects"]) {
            if (!o.is_object() || !o.contains("color") || !o.contains("values")) {
                throw ParseError("each object needs 'color' and 'values'", where);
            }
            if (!o["color"].is_string()) throw ParseError("object 'color' must be a string", where);
            if (!o["values"].is_array()) throw ParseError("object 'values' must be an array", where);
            ObjectState state;
            state.color = o["color"].get<std::string>();
            for (const json& v : o["values"]) state.values.push_back(value_from_json(v, where));
            if (state.values.empty()) {
                throw ValidationError(where + ": object has no values; values[0] must identify it");
            }
            if (!std::holds_alternative<std::string>(state.values[0])) {
                throw ValidationError(where + ": object identifier must be a string");
            }
            event.objects.push_back(std::move(state));
        }
        if (event.objects.empty()) {
            throw ValidationError(where + ": event carries no objects");
        }

        std::set<std::string> ids_in_event;
        for (const ObjectState& o : event.objects) {
            const std::string& id = std::get<std::string>(o.values[0]);
            if (!ids_in_event.insert(id).second) {
                throw ValidationError(where + ": identifier " + id + " appears twice in one event");
            }
            auto [it, fresh] = shape_of_id.emplace(id, std::make_pair(o.color, o.values.size()));
            if (!fresh && it->second.first != o.color) {
                throw ValidationError(where + ": object " + id + " appears with colors " +
                                      it->second.first + " and " + o.color);
            }
            if (!fresh && it->second.second != o.values.size()) {
                throw ValidationError(where + ": object " + id + " appears with " +
                                      std::to_string(it->second.second) + " and " +
                                      std::to_string(o.values.size()) + " values");
            }
        }

        sort_objects(event);

        if (log.traces.empty() || log.traces.back().trace_id != trace_id) {
            log.traces.push_back({trace_id, {}});
        }
        Trace& trace = log.traces.back();
        if (!trace.events.empty() && event.seq <= trace.events.back().seq) {
            throw ValidationError(where + ": seq " + std::to_string(event.seq) +
                                  " does not increase within trace " + trace_id);
        }
        trace.events.push_back(std::move(event));
    }
    return log;
}

EventLog read_log(const std::string& path) { return parse_log(read_text_file(path), path); }

std::string write_log_string(const EventLog& log, const std::vector<std::string>& header_comments) {
    std::string out;
    for (const std::string& comment : header_comments) {
        out += "# " + comment + "\n";
    }
    for (const Trace& trace : log.traces) {
        for (const EventRecord& event : trace.events) {
            std::vector<const ObjectState*> ordered;
            ordered.reserve(event.objects.size());
            for (const ObjectState& o : event.objects) ordered.push_back(&o);
            std::sort(ordered.begin(), ordered.end(), [](const ObjectState* a, const ObjectState* b) {
                return compare_values(a->id(), b->id()) < 0;
            });

            ordered_json line;
            line["trace"] = trace.trace_id;
            line["seq"] = event.seq;
            if (event.timestamp) line["ts"] = *event.timestamp;
            line["activity"] = event.activity;
            line["objects"] = ordered_json::array();
            for (const ObjectState* o : ordered) {
                ordered_json obj;
                obj["color"] = o->color;
                obj["values"] = ordered_json::array();
                for (const Value& v : o->values) obj["values"].push_back(value_to_json(v));
                line["objects"].push_back(std::move(obj));
            }
            out += line.dump() + "\n";
        }
    }
    return out;
}

void write_log(const EventLog& log, const std::string& path,
               const std::vector<std::string>& header_comments) {
    write_text_file(path, write_log_string(log, header_comments));
}

std::vector<TraceObject> distinct_objects(const Trace& trace) {
    std::vector<TraceObject> out;
    std::map<std::string, std::size_t> index_of;
    for (const EventRecord& event : trace.events) {
        for (const ObjectState& o : event.objects) {
            std::string id = format_value(o.id());
            auto it = index_of.find(id);
            if (it == index_of.end()) {
                index_of.emplace(id, out.size());
                out.push_back({o.color, o.values, event.seq});
            } else if (out[it->second].color != o.color) {
                throw ValidationError("trace " + trace.trace_id + ": object " + id +
                                      " appears with colors " + out[it->second].color + " and " +
                                      o.color);
            }
        }
    }
    return out;
}

namespace {

void check_trace(const Trace& trace, const CPN& cpn, ValidationReport& report) {
    for (const EventRecord& event : trace.events) {
        const std::string ctx = trace.trace_id + "#" + std::to_string(event.seq);
        const Transition* t = cpn.find_transition_by_activity(event.activity);
        if (t == nullptr) {
            report.violations.push_back(
                {"unknown-activity", ctx, "no transition labeled " + event.activity});
            continue;
        }

        std::map<std::string, std::size_t> supplied;  // color name -> object count
        for (const ObjectState& o : event.objects) supplied[o.color] += 1;

        for (const Arc* arc : cpn.input_arcs(*t)) {
            const Place* p = cpn.find_place(arc->from);
            const std::string& cname = cpn.colors[p->color].name;
            auto it = supplied.find(cname);
            if (it == supplied.end() || it->second == 0) {
                report.violations.push_back(
                    {"missing-input-object", ctx, "no object for input place " + p->id});
            } else {
                it->second -= 1;
            }
        }
        for (const auto& [cname, count] : supplied) {
            for (std::size_t i = 0; i < count; ++i) {
                report.violations.push_back(
                    {"extra-event-object", ctx,
                     "object of color " + cname + " matches no input place of " + t->id});
            }
        }
    }
}

}  // namespace

ValidationReport check_syntactic_correctness(const Trace& trace, const CPN& cpn) {
    ValidationReport report;
    check_trace(trace, cpn, report);
    return report;
}

ValidationReport check_syntactic_correctness(const EventLog& log, const CPN& cpn) {
    ValidationReport report;
    for (const Trace& trace : log.traces) check_trace(trace, cpn, report);
    return report;
}

}  // namespace cpnconf
