#include "cpnconf/validation.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace cpnconf {

bool ValidationReport::has(std::string_view code) const {
    return std::any_of(violations.begin(), violations.end(),
                       [&](const Violation& v) { return v.code == code; });
}

std::string ValidationReport::to_string() const {
    std::ostringstream out;
    for (const Violation& v : violations) {
        out << v.code << " [" << v.context << "]: " << v.message << "\n";
    }
    return out.str();
}

namespace {

void add(ValidationReport& report, std::string code, std::string context, std::string message) {
    report.violations.push_back({std::move(code), std::move(context), std::move(message)});
}

template <typename Range, typename KeyFn>
void check_unique(ValidationReport& report, const Range& range, KeyFn key, const char* code,
                  const char* what) {
    std::set<std::string> seen;
    for (const auto& item : range) {
        std::string k = key(item);
        if (!seen.insert(k).second) {
            add(report, code, k, std::string(what) + " '" + k + "' declared more than once");
        }
    }
}

}  // namespace

ValidationReport validate_syntax(const CPN& cpn) {
    ValidationReport report;

    check_unique(report, cpn.domains, [](const DataDomain& d) { return d.name; },
                 "duplicate-domain-name", "domain");
    check_unique(report, cpn.colors, [](const ColorDef& c) { return c.name; },
                 "duplicate-color-name", "color");

    for (const ColorDef& color : cpn.colors) {
        if (color.arity() == 0) {
            add(report, "color-arity", color.name,
                "color has no components; tokens need at least an identifier");
        }
        if (color.attributes.size() != color.arity()) {
            add(report, "color-attribute-count", color.name,
                "color declares " + std::to_string(color.attributes.size()) + " attributes for " +
                    std::to_string(color.arity()) + " components");
        }
        std::set<std::string> attrs;
        for (const std::string& a : color.attributes) {
            if (!attrs.insert(a).second) {
                add(report, "color-attribute-duplicate", color.name,
                    "attribute '" + a + "' repeats within the color");
            }
        }
        for (std::size_t d : color.domains) {
            if (d >= cpn.domains.size()) {
                add(report, "domain-index", color.name,
                    "color references domain #" + std::to_string(d) + " but only " +
                        std::to_string(cpn.domains.size()) + " domains exist");
            }
        }
    }

    std::set<std::string> node_ids;
    for (const Place& p : cpn.places) {
        if (!node_ids.insert(p.id).second) {
            add(report, "duplicate-node-id", p.id, "node id '" + p.id + "' is not unique");
        }
        if (p.color >= cpn.colors.size()) {
            add(report, "color-index", p.id,
                "place references color #" + std::to_string(p.color) + " but only " +
                    std::to_string(cpn.colors.size()) + " colors exist");
        }
    }
    std::map<std::string, std::string> activity_owner;
    for (const Transition& t : cpn.transitions) {
        if (!node_ids.insert(t.id).second) {
            add(report, "duplicate-node-id", t.id, "node id '" + t.id + "' is not unique");
        }
        auto [it, fresh] = activity_owner.emplace(t.activity, t.id);
        if (!fresh) {
            add(report, "duplicate-activity-label", t.activity,
                "duplicate activity label: transitions " + it->second + " and " + t.id +
                    " are both labeled '" + t.activity + "'");
        }
    }

    for (const Arc& arc : cpn.arcs) {
        bool from_place = cpn.is_place(arc.from);
        bool to_place = cpn.is_place(arc.to);
        bool from_trans = cpn.find_transition(arc.from) != nullptr;
        bool to_trans = cpn.find_transition(arc.to) != nullptr;
        std::string ctx = arc.from + " -> " + arc.to;
        if ((!from_place && !from_trans) || (!to_place && !to_trans)) {
            add(report, "arc-endpoint", ctx, "arc endpoint does not name an existing node");
            continue;
        }
        if (from_place == to_place) {
            add(report, "arc-endpoint", ctx,
                "arc must connect a place and a transition, not two nodes of the same kind");
            continue;
        }
        const Place* place = cpn.find_place(from_place ? arc.from : arc.to);
        if (place->color >= cpn.colors.size()) continue;  // reported above
        const ColorDef& color = cpn.colors[place->color];
        if (arc.expression.arity() != color.arity()) {
            add(report, "expression-color-mismatch", ctx,
                "expression color mismatch: " + std::to_string(arc.expression.arity()) +
                    "-term expression on a place of color " + color.name + " (arity " +
                    std::to_string(color.arity()) + ")");
        }
    }

    for (const Transition& t : cpn.transitions) {
        if (!t.priority_rule) continue;
        for (const auto& [place_id, rule] : t.priority_rule->local_rules) {
            const Place* place = cpn.find_place(place_id);
            bool is_input = false;
            for (const Arc* a : cpn.input_arcs(t)) is_input = is_input || a->from == place_id;
            if (place == nullptr || !is_input) {
                add(report, "priority-rule-place", t.id,
                    "priority rule names '" + place_id + "', not an input place of " + t.id);
                continue;
            }
            if (place->color >= cpn.colors.size()) continue;
            const ColorDef& color = cpn.colors[place->color];
            for (const auto& [attr, dir] : rule.keys) {
                (void)dir;
                if (!color.attribute_index(attr)) {
                    add(report, "priority-rule-attribute", t.id,
                        "rule on " + place_id + " sorts by '" + attr + "', absent from color " +
                            color.name);
                }
            }
        }
    }

    if (cpn.initial_marking.place_count() != cpn.places.size()) {
        add(report, "marking-shape", "initial marking",
            "marking covers " + std::to_string(cpn.initial_marking.place_count()) +
                " places, net has " + std::to_string(cpn.places.size()));
    } else {
        for (std::size_t p = 0; p < cpn.places.size(); ++p) {
            if (cpn.places[p].color >= cpn.colors.size()) continue;
            const ColorDef& color = cpn.colors[cpn.places[p].color];
            for (const Token& tok : cpn.initial_marking.tokens(p)) {
                if (!cpn.fit_token(color, tok)) {
                    add(report, "initial-token-color", cpn.places[p].id,
                        "token " + format_token(tok) + " does not fit color " + color.name);
                }
            }
        }
    }

    return report;
}

namespace {

// First variables of a transition's input arcs, in arc order, with form
// checks: every input term must be a distinct plain variable so firing can
// transfer values deterministically.
std::vector<std::string> input_first_variables(const CPN& cpn, const Transition& t,
                                               ValidationReport& report,
                                               std::set<std::string>& bound) {
    std::vector<std::string> firsts;
    for (const Arc* arc : cpn.input_arcs(t)) {
        std::string ctx = arc->from + " -> " + t.id;
        bool first = true;
        for (const TermPtr& term : arc->expression.terms) {
            if (term->kind != Term::Kind::Variable) {
                add(report, "cw1-input-form", ctx,
                    "input term '" + term_to_string(term) + "' is not a plain variable");
                first = false;
                continue;
            }
            if (!bound.insert(term->variable).second) {
                add(report, "cw1-input-form", ctx,
                    "variable '" + term->variable + "' bound twice across input arcs");
            }
            if (first) firsts.push_back(term->variable);
            first = false;
        }
        if (arc->expression.arity() == 0) {
            add(report, "cw1-input-form", ctx, "input expression is empty");
        }
    }
    return firsts;
}

}  // namespace

ValidationReport validate_conservative_workflow(const CPN& cpn) {
    ValidationReport report;

    // Condition 1: identifier-preserving bijection between input and output
    // arcs, pairing on first variables.
    for (const Transition& t : cpn.transitions) {
        std::set<std::string> bound;
        std::vector<std::string> in_firsts = input_first_variables(cpn, t, report, bound);

        std::multiset<std::string> out_firsts;
        for (const Arc* arc : cpn.output_arcs(t)) {
            std::string ctx = t.id + " -> " + arc->to;
            if (arc->expression.arity() == 0) {
                add(report, "cw1-identifier-bijection", ctx, "output expression is empty");
                continue;
            }
            const TermPtr& head = arc->expression.terms[0];
            if (head->kind != Term::Kind::Variable) {
                add(report, "cw1-identifier-bijection", ctx,
                    "first output term '" + term_to_string(head) +
                        "' is not a variable; the identifier would not be preserved");
            } else {
                out_firsts.insert(head->variable);
            }
            std::vector<std::string> used_list;
            for (const TermPtr& term : arc->expression.terms) collect_variables(term, used_list);
            std::set<std::string> used(used_list.begin(), used_list.end());
            for (const std::string& v : used) {
                if (!bound.count(v)) {
                    add(report, "cw1-unbound-output-variable", ctx,
                        "output variable '" + v + "' is not bound by any input arc of " + t.id);
                }
            }
        }

        for (const std::string& v : in_firsts) {
            std::size_t n = out_firsts.count(v);
            if (n != 1) {
                add(report, "cw1-identifier-bijection", t.id,
                    "identifier variable '" + v + "' heads " + std::to_string(n) +
                        " output arcs, expected exactly 1");
            }
        }
        std::set<std::string> in_set(in_firsts.begin(), in_firsts.end());
        for (const std::string& v : out_firsts) {
            if (!in_set.count(v)) {
                add(report, "cw1-identifier-bijection", t.id,
                    "output identifier variable '" + v + "' heads no input arc");
            }
        }
    }

    // Condition 2: pairwise-distinct identifiers in the initial marking.
    {
        std::map<std::string, std::string> owner;  // formatted id -> place
        for (std::size_t p = 0; p < cpn.initial_marking.place_count(); ++p) {
            for (const Token& tok : cpn.initial_marking.tokens(p)) {
                if (tok.empty()) continue;
                std::string id = format_value(tok[0]);
                auto [it, fresh] = owner.emplace(id, cpn.places[p].id);
                if (!fresh) {
                    add(report, "cw2-duplicate-identifier", id,
                        "identifier appears in both " + it->second + " and " + cpn.places[p].id);
                }
            }
        }
    }

    // Condition 3: one source, one sink, and a monochrome path, per color
    // that owns at least one place.
    for (std::size_t c = 0; c < cpn.colors.size(); ++c) {
        std::vector<std::size_t> owned;
        for (std::size_t p = 0; p < cpn.places.size(); ++p) {
            if (cpn.places[p].color == c) owned.push_back(p);
        }
        if (owned.empty()) continue;

        std::vector<std::size_t> sources, sinks;
        for (std::size_t p : owned) {
            if (cpn.places[p].role == PlaceRole::Source) sources.push_back(p);
            if (cpn.places[p].role == PlaceRole::Sink) sinks.push_back(p);
        }
        const std::string& cname = cpn.colors[c].name;
        if (sources.size() != 1 || sinks.size() != 1) {
            add(report, "cw3-source-sink-count", cname,
                "color has " + std::to_string(sources.size()) + " sources and " +
                    std::to_string(sinks.size()) + " sinks, expected one of each");
            continue;
        }

        // Reachability over same-color places: p -> p' when some transition
        // consumes from p and produces into p'.
        std::set<std::size_t> reached{sources[0]};
        std::vector<std::size_t> frontier{sources[0]};
        while (!frontier.empty()) {
            std::size_t p = frontier.back();
            frontier.pop_back();
            for (const Transition& t : cpn.transitions) {
                bool consumes = false;
                for (const Arc* a : cpn.input_arcs(t)) consumes = consumes || a->from == cpn.places[p].id;
                if (!consumes) continue;
                for (const Arc* a : cpn.output_arcs(t)) {
                    auto q = cpn.place_index(a->to);
                    if (q && cpn.places[*q].color == c && reached.insert(*q).second) {
                        frontier.push_back(*q);
                    }
                }
            }
        }
        if (!reached.count(sinks[0])) {
            add(report, "cw3-monochrome-path", cname,
                "no path from " + cpn.places[sources[0]].id + " to " + cpn.places[sinks[0]].id +
                    " through places of color " + cname);
        }
    }

    // Condition 4: color-distinct input places and color-distinct output
    // places per transition.
    for (const Transition& t : cpn.transitions) {
        auto check_side = [&](const std::vector<const Arc*>& arcs, bool inputs) {
            std::map<std::size_t, std::string> seen;  // color -> place id
            for (const Arc* a : arcs) {
                const Place* p = cpn.find_place(inputs ? a->from : a->to);
                if (p == nullptr) continue;
                auto [it, fresh] = seen.emplace(p->color, p->id);
                if (!fresh) {
                    add(report, inputs ? "cw4-input-colors" : "cw4-output-colors", t.id,
                        std::string(inputs ? "input" : "output") + " places " + it->second +
                            " and " + p->id + " share color " + cpn.colors[p->color].name);
                }
            }
        };
        check_side(cpn.input_arcs(t), true);
        check_side(cpn.output_arcs(t), false);
    }

    return report;
}

}  // namespace cpnconf
