#include "cpnconf/replay.hpp"

#include "cpnconf/errors.hpp"
#include "cpnconf/util.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <set>
#include <stdexcept>
#include <thread>

namespace cpnconf {

const char* deviation_code(DeviationKind kind) {
    switch (kind) {
        case DeviationKind::ControlFlow: return "CF";
        case DeviationKind::RuleViolation: return "RV";
        case DeviationKind::ResourceCorrupted: return "RC";
        case DeviationKind::NonproperTermination: return "NT";
    }
    return "??";
}

const char* deviation_name(DeviationKind kind) {
    switch (kind) {
        case DeviationKind::ControlFlow: return "CONTROL_FLOW";
        case DeviationKind::RuleViolation: return "RULE_VIOLATION";
        case DeviationKind::ResourceCorrupted: return "RESOURCE_CORRUPTED";
        case DeviationKind::NonproperTermination: return "NONPROPER_TERMINATION";
    }
    return "UNKNOWN";
}

double fitness(const ReplayCounters& counters) {
    if (counters.consumed == 0) return 1.0;  // vacuous conformance
    double ratio = 1.0 - static_cast<double>(counters.jumps) / static_cast<double>(counters.consumed);
    if (ratio < 0.0 || ratio > 1.0) {
        log_warn("fitness " + std::to_string(ratio) + " clamped to [0,1]; jumps=" +
                 std::to_string(counters.jumps) + " consumed=" + std::to_string(counters.consumed));
        ratio = std::clamp(ratio, 0.0, 1.0);
    }
    return ratio;
}

std::size_t ReplayResult::count(DeviationKind kind) const {
    return static_cast<std::size_t>(std::count_if(
        deviations.begin(), deviations.end(),
        [&](const DeviationRecord& d) { return d.kind == kind; }));
}

Marking populate_source_places(const CPN& cpn, const Trace& trace) {
    Marking marking(cpn.places.size());
    for (const TraceObject& obj : distinct_objects(trace)) {
        auto cidx = cpn.color_index(obj.color);
        if (!cidx) {
            throw MismatchError("trace " + trace.trace_id + ": object " + format_value(obj.id()) +
                                " has color " + obj.color + ", unknown to the net");
        }
        const Place* source = cpn.source_of_color(*cidx);
        if (source == nullptr) {
            throw MismatchError("color " + obj.color + " has no source place for object " +
                                format_value(obj.id()));
        }
        auto fitted = cpn.fit_token(cpn.colors[*cidx], obj.first_values);
        if (!fitted) {
            throw MismatchError("object " + format_value(obj.id()) + " values " +
                                format_token(obj.first_values) + " do not fit color " + obj.color);
        }
        marking.add(*cpn.place_index(source->id), std::move(*fitted));
    }
    return marking;
}

std::string jump(const CPN& cpn, Marking& marking, const Value& object_id, std::size_t target) {
    auto from = marking.locate_identifier(object_id);
    if (!from) {
        throw std::logic_error("jump: token " + format_value(object_id) +
                               " exists nowhere in the marking");
    }
    if (*from == target) {
        throw std::logic_error("jump: token " + format_value(object_id) + " is already in " +
                               cpn.places[target].id);
    }
    if (cpn.places[*from].color != cpn.places[target].color) {
        throw MismatchError("jump: token " + format_value(object_id) + " in " +
                            cpn.places[*from].id + " cannot enter " + cpn.places[target].id +
                            " of another color");
    }
    Token tok = *marking.take_by_id(*from, object_id);
    marking.add(target, std::move(tok));
    return cpn.places[*from].id;
}

namespace {

// One output token while it is still being compared against the event's
// objects; raw keeps the pre-domain-check display per component.
struct ProducedToken {
    std::size_t place = 0;
    Value id;
    Token values;                    // components defaulted when undefined
    std::vector<bool> defined;       // component passed evaluation + domain
    std::vector<std::string> raw;    // arithmetic result before the domain check
};

[[noreturn]] void precondition_panic(const std::string& trace_id, const std::string& what) {
    throw std::logic_error("replay of trace " + trace_id + ": " + what);
}

}  // namespace

ReplayResult replay_trace(const CPN& cpn, const Trace& trace) {
    ReplayResult result;
    result.trace_id = trace.trace_id;

    const std::vector<TraceObject> objects = distinct_objects(trace);
    result.object_count = objects.size();

    Marking marking = populate_source_places(cpn, trace);

    for (const EventRecord& event : trace.events) {
        const Transition* t = cpn.find_transition_by_activity(event.activity);
        if (t == nullptr) {
            precondition_panic(trace.trace_id, "no transition labeled " + event.activity);
        }
        if (event.timestamp) result.last_timestamp = event.timestamp;

        // Resolve each event object to its input place once.
        struct Slot {
            const ObjectState* object = nullptr;
            std::size_t place = 0;
        };
        std::vector<Slot> slots;
        slots.reserve(event.objects.size());
        for (const ObjectState& o : event.objects) {
            auto cidx = cpn.color_index(o.color);
            const Place* p = cidx ? cpn.input_place_of_color(*t, *cidx) : nullptr;
            if (p == nullptr) {
                precondition_panic(trace.trace_id, "event #" + std::to_string(event.seq) +
                                                       ": no input place of color " + o.color +
                                                       " on " + t->id);
            }
            slots.push_back({&o, *cpn.place_index(p->id)});
        }

        // Missing tokens first: force each absent object into its input
        // place so the firing below cannot block.
        std::set<std::string> jumped_now;
        for (const Slot& slot : slots) {
            if (marking.find_by_id(slot.place, slot.object->id()) != nullptr) continue;
            std::string to = cpn.places[slot.place].id;
            std::string from = jump(cpn, marking, slot.object->id(), slot.place);
            std::string id = format_value(slot.object->id());
            jumped_now.insert(id);
            result.counters.jumps += 1;
            result.jump_edges[{from, to, JumpStage::ControlFlow}] += 1;
            result.deviations.push_back(
                {DeviationKind::ControlFlow, trace.trace_id, event.seq, event.timestamp,
                 event.activity, id,
                 "token " + id + " jumped from " + from + " to " + to + " to enable " +
                     event.activity,
                 ControlFlowDetail{from, to}});
        }

        // Priority checks run on the post-jump marking.
        if (t->priority_rule) {
            for (const Slot& slot : slots) {
                const Place& place = cpn.places[slot.place];
                const LocalRule* rule = t->priority_rule->rule_for(place.id);
                if (rule == nullptr) continue;
                const Token* candidate = marking.find_by_id(slot.place, slot.object->id());
                if (candidate == nullptr) {
                    precondition_panic(trace.trace_id, "candidate token vanished from " + place.id);
                }
                const Token* ahead = best_predecessor(cpn, *rule, place, marking.tokens(slot.place),
                                                      *candidate);
                if (ahead == nullptr) continue;
                std::string id = format_value(slot.object->id());
                std::string other = format_value((*ahead)[0]);
                result.deviations.push_back(
                    {DeviationKind::RuleViolation, trace.trace_id, event.seq, event.timestamp,
                     event.activity, id,
                     id + " consumed from " + place.id + " while " + other + " takes priority",
                     RuleViolationDetail{place.id, other}});
            }
        }

        // Fire: consume by identifier, bind input-arc variables from the
        // model's token values, evaluate output arcs.
        Binding binding;
        for (const Slot& slot : slots) {
            const Arc* in_arc = nullptr;
            for (const Arc* a : cpn.input_arcs(*t)) {
                if (a->from == cpn.places[slot.place].id) in_arc = a;
            }
            if (in_arc == nullptr || in_arc->expression.arity() == 0) {
                precondition_panic(trace.trace_id, "no usable input arc from " +
                                                       cpn.places[slot.place].id + " to " + t->id);
            }
            auto tok = marking.take_by_id(slot.place, slot.object->id());
            if (!tok || tok->size() != in_arc->expression.arity()) {
                precondition_panic(trace.trace_id, "token/arc arity mismatch at " + t->id);
            }
            for (std::size_t i = 0; i < tok->size(); ++i) {
                const TermPtr& term = in_arc->expression.terms[i];
                if (term->kind != Term::Kind::Variable) {
                    precondition_panic(trace.trace_id,
                                       "input arc term is not a variable; net not validated");
                }
                binding[term->variable] = (*tok)[i];
            }
            result.arc_transfers[{cpn.places[slot.place].id, t->id}] += 1;
        }

        std::vector<ProducedToken> produced;
        for (const Arc* out_arc : cpn.output_arcs(*t)) {
            std::size_t pidx = *cpn.place_index(out_arc->to);
            const ColorDef& color = cpn.colors[cpn.places[pidx].color];
            ProducedToken d;
            d.place = pidx;
            for (std::size_t i = 0; i < out_arc->expression.arity(); ++i) {
                CheckedValue cv =
                    eval_term_checked(out_arc->expression.terms[i], binding, cpn.domain_of(color, i));
                d.defined.push_back(cv.value.has_value());
                d.values.push_back(cv.value ? *cv.value : Value{std::int64_t{0}});
                d.raw.push_back(cv.raw);
            }
            if (d.values.empty() || !d.defined[0]) {
                precondition_panic(trace.trace_id, "output arc to " + out_arc->to +
                                                       " lost the token identifier");
            }
            d.id = d.values[0];
            produced.push_back(std::move(d));
            result.arc_transfers[{t->id, out_arc->to}] += 1;
        }

        result.counters.consumed += event.objects.size();
        for (const Slot& slot : slots) {
            TransitionUse& use = result.transition_use[t->id];
            if (jumped_now.count(format_value(slot.object->id()))) {
                use.via_jump += 1;
            } else {
                use.via_model += 1;
            }
        }

        // Compare produced tokens to the event's claims, attribute by
        // attribute; the event wins and the model state is overwritten.
        for (const Slot& slot : slots) {
            ProducedToken* d = nullptr;
            for (ProducedToken& candidate : produced) {
                if (candidate.id == slot.object->id()) d = &candidate;
            }
            if (d == nullptr) {
                precondition_panic(trace.trace_id, "no output token for object " +
                                                       format_value(slot.object->id()));
            }
            const ColorDef& color = cpn.colors[cpn.places[d->place].color];
            const Token& claimed = slot.object->values;
            if (claimed.size() != d->values.size()) {
                precondition_panic(trace.trace_id, "event object arity differs from color " +
                                                       color.name);
            }
            bool differs = false;
            for (std::size_t i = 0; i < claimed.size(); ++i) {
                bool equal = d->defined[i] && compare_values(d->values[i], claimed[i]) == 0;
                if (equal) continue;
                differs = true;
                std::string id = format_value(slot.object->id());
                std::string attr = i < color.attributes.size() ? color.attributes[i]
                                                               : "component " + std::to_string(i);
                std::string expected = d->defined[i] ? format_value(d->values[i]) : d->raw[i];
                std::string observed = format_value(claimed[i]);
                result.deviations.push_back(
                    {DeviationKind::ResourceCorrupted, trace.trace_id, event.seq, event.timestamp,
                     event.activity, id,
                     attr + " changed from " + expected + " to " + observed,
                     CorruptionDetail{attr, expected, observed}});
            }
            if (differs) {
                Token replacement;
                replacement.reserve(claimed.size());
                for (std::size_t i = 0; i < claimed.size(); ++i) {
                    auto fitted = fit_domain(claimed[i], cpn.domain_of(color, i).kind);
                    replacement.push_back(fitted ? std::move(*fitted) : claimed[i]);
                }
                d->values = std::move(replacement);
            }
        }
        for (ProducedToken& d : produced) {
            marking.add(d.place, std::move(d.values));
        }
    }

    // Objects that never reached their sink are forced there, then all sinks
    // drain.
    for (const TraceObject& obj : objects) {
        auto cidx = cpn.color_index(obj.color);
        const Place* sink = cidx ? cpn.sink_of_color(*cidx) : nullptr;
        if (sink == nullptr) {
            precondition_panic(trace.trace_id, "color " + obj.color + " has no sink place");
        }
        std::size_t sink_idx = *cpn.place_index(sink->id);
        auto at = marking.locate_identifier(obj.id());
        if (!at) {
            precondition_panic(trace.trace_id,
                               "object " + format_value(obj.id()) + " vanished before termination");
        }
        if (*at == sink_idx) continue;
        std::string from = jump(cpn, marking, obj.id(), sink_idx);
        std::string id = format_value(obj.id());
        result.counters.jumps += 1;
        result.jump_edges[{from, sink->id, JumpStage::Termination}] += 1;
        result.deviations.push_back(
            {DeviationKind::NonproperTermination, trace.trace_id, std::nullopt, std::nullopt,
             std::nullopt, id,
             id + " ended in " + from + " instead of sink " + sink->id + "; token jumped to " +
                 sink->id,
             TerminationDetail{from, sink->id}});
    }
    result.counters.consumed += objects.size();
    for (std::size_t p = 0; p < cpn.places.size(); ++p) {
        if (cpn.places[p].role == PlaceRole::Sink) marking.clear_place(p);
    }
    if (!marking.empty()) {
        precondition_panic(trace.trace_id, "marking not empty after sink consumption");
    }

    result.trace_fitness = fitness(result.counters);
    return result;
}

LogReplay replay_log(const CPN& cpn, const EventLog& log, unsigned jobs) {
    LogReplay out;
    out.per_trace.resize(log.traces.size());

    if (jobs <= 1 || log.traces.size() <= 1) {
        for (std::size_t i = 0; i < log.traces.size(); ++i) {
            out.per_trace[i] = replay_trace(cpn, log.traces[i]);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::mutex error_mutex;
        std::exception_ptr first_error;
        auto worker = [&] {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= log.traces.size()) return;
                try {
                    out.per_trace[i] = replay_trace(cpn, log.traces[i]);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                    return;
                }
            }
        };
        unsigned n = std::min<unsigned>(jobs, static_cast<unsigned>(log.traces.size()));
        std::vector<std::thread> pool;
        pool.reserve(n);
        for (unsigned i = 0; i < n; ++i) pool.emplace_back(worker);
        for (std::thread& th : pool) th.join();
        if (first_error) std::rethrow_exception(first_error);
    }

    for (const ReplayResult& r : out.per_trace) {
        out.totals.jumps += r.counters.jumps;
        out.totals.consumed += r.counters.consumed;
    }
    out.aggregate_fitness = fitness(out.totals);
    return out;
}

}  // namespace cpnconf
