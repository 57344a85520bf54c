#include "cpnconf/diagnostics.hpp"
#include "cpnconf/replay.hpp"
#include "cpnconf/report.hpp"
#include "cpnconf/trading.hpp"

#include "support/fixtures.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>
#include <sstream>

using namespace cpnconf;
using namespace cpnconf::testing;

namespace {

// Trace with two sells where one skipped its submission: s2 jumps p2 -> p4.
Trace two_sell_trace() {
    Trace t;
    t.trace_id = "2s";
    t.events.push_back(event(1, "submit sell order", {sell("s1", 1, 21.0, 2)}));
    t.events.push_back(event(2, "new sell order", {sell("s1", 1, 21.0, 2)}));
    t.events.push_back(event(3, "new sell order", {sell("s2", 2, 19.0, 1)}));
    t.events.push_back(event(4, "cancel sell order", {sell("s1", 1, 21.0, 2)}));
    t.events.push_back(event(5, "cancel sell order", {sell("s2", 2, 19.0, 1)}));
    return t;
}

DiagnosticsSummary summarize(const std::vector<Trace>& traces) {
    CPN cpn = build_reference_model();
    EventLog log;
    log.traces = traces;
    LogReplay rep = replay_log(cpn, log);
    return aggregate(rep.per_trace, cpn);
}

}  // namespace

TEST_CASE("local measures attribute jump-assisted firings to the transition") {
    DiagnosticsSummary s = summarize({two_sell_trace()});
    // t4 = "new sell order": s1 via model, s2 via jump.
    const MeasureStat& t4 = s.measures.at("t4");
    CHECK(t4.via_model == 1);
    CHECK(t4.via_jump == 1);
    CHECK(t4.measure() == doctest::Approx(0.5));
    // Unused transitions report a clean 1.0.
    CHECK(s.measures.at("t1").measure() == doctest::Approx(1.0));
    // Both sells reached their sink properly, so termination is clean.
    CHECK(s.measures.at("termination").via_jump == 0);
    CHECK(s.measures.at("termination").via_model == 2);
    CHECK(s.measures.at("termination").measure() == doctest::Approx(1.0));
}

TEST_CASE("jump edges aggregate with means per trace") {
    DiagnosticsSummary s = summarize({two_sell_trace()});
    auto it = s.jump_edges.find(JumpEdge{"p2", "p4", JumpStage::ControlFlow});
    REQUIRE(it != s.jump_edges.end());
    CHECK(it->second.total == 1);
    CHECK(it->second.mean == doctest::Approx(1.0));
    CHECK(s.trace_count == 1);
    CHECK(s.deviation_totals.at(DeviationKind::ControlFlow) == 1);
}

TEST_CASE("an all-conforming log yields unit measures and no jump edges") {
    DiagnosticsSummary s = summarize({conforming_trace()});
    CHECK(s.jump_edges.empty());
    for (const auto& [id, stat] : s.measures) {
        CHECK(stat.measure() == doctest::Approx(1.0));
    }
    CHECK(s.aggregate_fitness == doctest::Approx(1.0));
    for (const auto& [kind, n] : s.deviation_totals) CHECK(n == 0);
}

TEST_CASE("arc means cover every model arc, defaulting to zero") {
    DiagnosticsSummary s = summarize({conforming_trace()});
    CPN cpn = build_reference_model();
    CHECK(s.arc_means.size() == cpn.arcs.size());
    CHECK(s.arc_means.at({"p1", "t1"}) == doctest::Approx(1.0));
    CHECK(s.arc_means.at({"p3", "t3"}) == doctest::Approx(1.0));
    // The cancel path was never taken.
    CHECK(s.arc_means.at({"p5", "t8"}) == doctest::Approx(0.0));
}

TEST_CASE("termination jumps feed the termination pseudo-measure") {
    DiagnosticsSummary s = summarize({partial_fill_trace()});
    const MeasureStat& term = s.measures.at("termination");
    CHECK(term.via_jump == 2);   // b1 and s2 failed to reach their sinks
    CHECK(term.via_model == 1);  // s1 ended in p8 properly
    CHECK(term.measure() == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("summary JSON carries the headline numbers") {
    DiagnosticsSummary s = summarize({partial_fill_trace(), conforming_trace()});
    nlohmann::ordered_json j = summary_to_json(s);
    CHECK(j.at("traces") == 2);
    CHECK(j.at("jumps") == 3);
    CHECK(j.at("deviation_totals").at("CONTROL_FLOW") == 1);
    CHECK(j.at("deviation_totals").at("RULE_VIOLATION") == 1);
    CHECK(j.at("deviation_totals").at("RESOURCE_CORRUPTED") == 1);
    CHECK(j.at("deviation_totals").at("NONPROPER_TERMINATION") == 2);
    CHECK(j.at("local_measures").is_array());
    CHECK(j.at("jump_edges").is_array());
    bool has_termination_row = false;
    for (const auto& row : j.at("local_measures")) {
        if (row.at("activity") == "termination") has_termination_row = true;
    }
    CHECK(has_termination_row);
}

namespace {

struct DotShape {
    std::set<std::string> nodes;
    std::set<std::string> solid_edges;
    std::set<std::string> dotted_edges;
};

DotShape parse_dot(const std::string& text) {
    DotShape shape;
    auto trim = [](std::string s) {
        s.erase(0, s.find_first_not_of(" \t\""));
        s.erase(s.find_last_not_of(" \t\"") + 1);
        return s;
    };
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        auto arrow = line.find("->");
        if (arrow != std::string::npos) {
            std::string from = line.substr(0, arrow);
            std::string to = line.substr(arrow + 2, line.find('[') - arrow - 2);
            std::string edge = trim(from) + "->" + trim(to);
            if (line.find("dotted") != std::string::npos)
                shape.dotted_edges.insert(edge);
            else
                shape.solid_edges.insert(edge);
        } else if (line.find("label=") != std::string::npos &&
                   line.find("shape=") != std::string::npos) {
            shape.nodes.insert(trim(line.substr(0, line.find('['))));
        }
    }
    return shape;
}

}  // namespace

TEST_CASE("the annotated graph drawing mirrors the model structure") {
    CPN cpn = build_reference_model();
    DiagnosticsSummary s = summarize({partial_fill_trace()});
    std::string dot = enhanced_model_dot(cpn, s);
    DotShape shape = parse_dot(dot);

    CHECK(shape.nodes.size() == cpn.places.size() + cpn.transitions.size());
    for (const Place& p : cpn.places) CHECK(shape.nodes.count(p.id) == 1);
    for (const Transition& t : cpn.transitions) CHECK(shape.nodes.count(t.id) == 1);
    CHECK(shape.solid_edges.size() == cpn.arcs.size());
    for (const Arc& a : cpn.arcs) CHECK(shape.solid_edges.count(a.from + "->" + a.to) == 1);

    // Jumps p2->p4 (control flow), p5->p7 and p6->p8 (termination).
    CHECK(shape.dotted_edges ==
          std::set<std::string>{"p2->p4", "p5->p7", "p6->p8"});

    // Labels carry the local measures.
    CHECK(dot.find("trade2") != std::string::npos);
    CHECK(dot.find("0.50") != std::string::npos);  // new sell order measure 1/2
}

TEST_CASE("a conforming summary draws no dotted edges") {
    CPN cpn = build_reference_model();
    DiagnosticsSummary s = summarize({conforming_trace()});
    DotShape shape = parse_dot(enhanced_model_dot(cpn, s));
    CHECK(shape.dotted_edges.empty());
}

TEST_CASE("aggregation is invariant under trace order") {
    std::vector<Trace> a{partial_fill_trace(), conforming_trace(), two_sell_trace()};
    std::vector<Trace> b{two_sell_trace(), partial_fill_trace(), conforming_trace()};
    DiagnosticsSummary sa = summarize(a);
    DiagnosticsSummary sb = summarize(b);
    CHECK(summary_to_json(sa) == summary_to_json(sb));
    CHECK(enhanced_model_dot(build_reference_model(), sa) ==
          enhanced_model_dot(build_reference_model(), sb));
}

TEST_CASE("deviation reports list records then per-trace footers") {
    CPN cpn = build_reference_model();
    EventLog log;
    log.traces.push_back(partial_fill_trace());
    LogReplay rep = replay_log(cpn, log);
    std::string tsv = deviations_tsv(rep);

    CHECK(tsv.find("trace\tevent\tts\tactivity\tobject\tkind\tdescription") == 0);
    // Kind column carries the short codes.
    CHECK(tsv.find("\tCF\t") != std::string::npos);
    CHECK(tsv.find("\tRV\t") != std::string::npos);
    CHECK(tsv.find("\tRC\t") != std::string::npos);
    CHECK(tsv.find("\tNT\t") != std::string::npos);
    CHECK(tsv.find("fitness=0.70") != std::string::npos);
    CHECK(tsv.find("CF=1 RV=1 RC=1 NT=2") != std::string::npos);
    CHECK(tsv.find("jumps=3 consumed=10") != std::string::npos);

    std::string csv = fitness_csv(rep);
    CHECK(csv.find("trace,jumps,consumed,fitness") == 0);
    CHECK(csv.find("d1,3,10,0.700000") != std::string::npos);
    CHECK(csv.find("TOTAL,3,10,0.700000") != std::string::npos);
}
