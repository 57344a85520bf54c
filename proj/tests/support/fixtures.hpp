#pragma once

#include "cpnconf/event_log.hpp"
#include "cpnconf/trading.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace cpnconf::testing {

inline ObjectState buy(const std::string& id, std::int64_t tsub, double price, std::int64_t qty) {
    return {"OB", Token{Value(id), Value(tsub), Value(price), Value(qty)}};
}

inline ObjectState sell(const std::string& id, std::int64_t tsub, double price, std::int64_t qty) {
    return {"OS", Token{Value(id), Value(tsub), Value(price), Value(qty)}};
}

inline EventRecord event(std::size_t seq, const std::string& activity,
                         std::vector<ObjectState> objects) {
    EventRecord e;
    e.seq = seq;
    e.activity = activity;
    e.timestamp = "09:00:0" + std::to_string(seq);
    e.objects = std::move(objects);
    std::sort(e.objects.begin(), e.objects.end(), [](const ObjectState& a, const ObjectState& b) {
        return compare_values(a.id(), b.id()) < 0;
    });
    return e;
}

// One buy order partially filled against the cheaper of two sell orders: the
// second sell skips its submission, the trade consumes the wrong sell first
// and misreports the remaining buy quantity, and two orders never terminate.
// Replay must find exactly one deviation of each kind plus a second
// termination failure.
inline Trace partial_fill_trace() {
    Trace trace;
    trace.trace_id = "d1";
    trace.events = {
        event(1, "submit buy order", {buy("b1", 1, 22.0, 5)}),
        event(2, "new buy order", {buy("b1", 1, 22.0, 5)}),
        event(3, "submit sell order", {sell("s1", 2, 21.0, 2)}),
        event(4, "new sell order", {sell("s1", 2, 21.0, 2)}),
        event(5, "new sell order", {sell("s2", 3, 19.0, 1)}),
        event(6, "trade2", {buy("b1", 1, 22.0, 4), sell("s1", 2, 21.0, 0)}),
    };
    return trace;
}

// Same story, but the trade reports the arithmetically correct quantities.
inline Trace partial_fill_trace_correct_qty() {
    Trace trace = partial_fill_trace();
    trace.events[5] = event(6, "trade2", {buy("b1", 1, 22.0, 3), sell("s1", 2, 21.0, 0)});
    return trace;
}

// Clean single-fill lifecycle: both orders submit, match fully, and leave.
inline Trace conforming_trace() {
    Trace trace;
    trace.trace_id = "ok1";
    trace.events = {
        event(1, "submit buy order", {buy("b1", 1, 10.0, 2)}),
        event(2, "new buy order", {buy("b1", 1, 10.0, 2)}),
        event(3, "submit sell order", {sell("s1", 2, 10.0, 2)}),
        event(4, "new sell order", {sell("s1", 2, 10.0, 2)}),
        event(5, "trade1", {buy("b1", 1, 10.0, 0), sell("s1", 2, 10.0, 0)}),
    };
    return trace;
}

}  // namespace cpnconf::testing
