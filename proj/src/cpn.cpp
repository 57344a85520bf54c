#include "cpnconf/cpn.hpp"

#include "cpnconf/errors.hpp"

#include <algorithm>
#include <stdexcept>

namespace cpnconf {

std::optional<std::size_t> ColorDef::attribute_index(std::string_view attr) const {
    for (std::size_t i = 0; i < attributes.size(); ++i) {
        if (attributes[i] == attr) return i;
    }
    return std::nullopt;
}

const char* place_role_name(PlaceRole role) {
    switch (role) {
        case PlaceRole::Source: return "source";
        case PlaceRole::Sink: return "sink";
        case PlaceRole::Internal: return "internal";
    }
    return "internal";
}

std::optional<PlaceRole> parse_place_role(std::string_view name) {
    if (name == "source") return PlaceRole::Source;
    if (name == "sink") return PlaceRole::Sink;
    if (name == "internal") return PlaceRole::Internal;
    return std::nullopt;
}

std::optional<LocalRule> builtin_local_rule(std::string_view name) {
    if (name == "price-time-buy") {
        return LocalRule{"price-time-buy",
                         {{"price", SortDirection::Descending}, {"tsub", SortDirection::Ascending}}};
    }
    if (name == "price-time-sell") {
        return LocalRule{"price-time-sell",
                         {{"price", SortDirection::Ascending}, {"tsub", SortDirection::Ascending}}};
    }
    return std::nullopt;
}

const LocalRule* PriorityRule::rule_for(std::string_view place_id) const {
    auto it = local_rules.find(std::string(place_id));
    return it == local_rules.end() ? nullptr : &it->second;
}

bool Marking::remove_one(std::size_t place, const Token& token) {
    auto& bag = per_place_[place];
    auto it = std::find(bag.begin(), bag.end(), token);
    if (it == bag.end()) return false;
    bag.erase(it);
    return true;
}

const Token* Marking::find_by_id(std::size_t place, const Value& id) const {
    for (const Token& tok : per_place_[place]) {
        if (!tok.empty() && tok[0] == id) return &tok;
    }
    return nullptr;
}

std::optional<Token> Marking::take_by_id(std::size_t place, const Value& id) {
    auto& bag = per_place_[place];
    for (auto it = bag.begin(); it != bag.end(); ++it) {
        if (!it->empty() && (*it)[0] == id) {
            Token out = std::move(*it);
            bag.erase(it);
            return out;
        }
    }
    return std::nullopt;
}

bool Marking::overwrite_by_id(std::size_t place, const Value& id, Token replacement) {
    for (Token& tok : per_place_[place]) {
        if (!tok.empty() && tok[0] == id) {
            tok = std::move(replacement);
            return true;
        }
    }
    return false;
}

std::optional<std::size_t> Marking::locate_identifier(const Value& id) const {
    for (std::size_t p = 0; p < per_place_.size(); ++p) {
        if (find_by_id(p, id) != nullptr) return p;
    }
    return std::nullopt;
}

std::size_t Marking::total_tokens() const {
    std::size_t n = 0;
    for (const auto& bag : per_place_) n += bag.size();
    return n;
}

std::optional<std::size_t> CPN::domain_index(std::string_view name) const {
    for (std::size_t i = 0; i < domains.size(); ++i) {
        if (domains[i].name == name) return i;
    }
    return std::nullopt;
}

std::optional<std::size_t> CPN::color_index(std::string_view name) const {
    for (std::size_t i = 0; i < colors.size(); ++i) {
        if (colors[i].name == name) return i;
    }
    return std::nullopt;
}

std::optional<std::size_t> CPN::place_index(std::string_view id) const {
    for (std::size_t i = 0; i < places.size(); ++i) {
        if (places[i].id == id) return i;
    }
    return std::nullopt;
}

const Place* CPN::find_place(std::string_view id) const {
    auto idx = place_index(id);
    return idx ? &places[*idx] : nullptr;
}

const Transition* CPN::find_transition(std::string_view id) const {
    for (const Transition& t : transitions) {
        if (t.id == id) return &t;
    }
    return nullptr;
}

const Transition* CPN::find_transition_by_activity(std::string_view activity) const {
    for (const Transition& t : transitions) {
        if (t.activity == activity) return &t;
    }
    return nullptr;
}

std::vector<const Arc*> CPN::input_arcs(const Transition& t) const {
    std::vector<const Arc*> out;
    for (const Arc& a : arcs) {
        if (a.to == t.id && is_place(a.from)) out.push_back(&a);
    }
    return out;
}

std::vector<const Arc*> CPN::output_arcs(const Transition& t) const {
    std::vector<const Arc*> out;
    for (const Arc& a : arcs) {
        if (a.from == t.id && is_place(a.to)) out.push_back(&a);
    }
    return out;
}

const Place* CPN::input_place_of_color(const Transition& t, std::size_t color) const {
    for (const Arc* a : input_arcs(t)) {
        const Place* p = find_place(a->from);
        if (p != nullptr && p->color == color) return p;
    }
    return nullptr;
}

const Place* CPN::output_place_of_color(const Transition& t, std::size_t color) const {
    for (const Arc* a : output_arcs(t)) {
        const Place* p = find_place(a->to);
        if (p != nullptr && p->color == color) return p;
    }
    return nullptr;
}

const Place* CPN::source_of_color(std::size_t color) const {
    for (const Place& p : places) {
        if (p.color == color && p.role == PlaceRole::Source) return &p;
    }
    return nullptr;
}

const Place* CPN::sink_of_color(std::size_t color) const {
    for (const Place& p : places) {
        if (p.color == color && p.role == PlaceRole::Sink) return &p;
    }
    return nullptr;
}

std::optional<Token> CPN::fit_token(const ColorDef& color, const Token& raw) const {
    if (raw.size() != color.arity()) return std::nullopt;
    Token out;
    out.reserve(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        auto fitted = fit_domain(raw[i], domain_of(color, i).kind);
        if (!fitted) return std::nullopt;
        out.push_back(std::move(*fitted));
    }
    return out;
}

namespace {

// Evaluates one arc expression under `b` as the raw tuple of its term values.
// Undefined terms (division by zero, overflow) surface as EvalError here:
// strict semantics has no token to produce.
Token eval_arc_raw(const Arc& arc, const Binding& b) {
    Token tok;
    tok.reserve(arc.expression.arity());
    for (const TermPtr& term : arc.expression.terms) {
        RawResult r = eval_term_raw(term, b);
        if (!r.defined) {
            throw EvalError("arc " + arc.from + " -> " + arc.to + ": expression '" +
                            term_to_string(term) + "' is " + r.display());
        }
        tok.push_back(r.value);
    }
    return tok;
}

}  // namespace

bool enabled(const CPN& cpn, const Marking& marking, const Transition& t, const Binding& b) {
    for (const Arc* arc : cpn.input_arcs(t)) {
        auto pidx = cpn.place_index(arc->from);
        const ColorDef& color = cpn.colors[cpn.places[*pidx].color];
        Token want = eval_arc_raw(*arc, b);
        auto fitted = cpn.fit_token(color, want);
        if (!fitted) return false;
        const auto& bag = marking.tokens(*pidx);
        if (std::find(bag.begin(), bag.end(), *fitted) == bag.end()) return false;
    }
    return true;
}

Marking fire(const CPN& cpn, const Marking& marking, const Transition& t, const Binding& b) {
    if (!enabled(cpn, marking, t, b)) {
        throw std::logic_error("transition " + t.id + " is not enabled under the given binding");
    }
    Marking next = marking;
    for (const Arc* arc : cpn.input_arcs(t)) {
        auto pidx = cpn.place_index(arc->from);
        const ColorDef& color = cpn.colors[cpn.places[*pidx].color];
        Token want = *cpn.fit_token(color, eval_arc_raw(*arc, b));
        next.remove_one(*pidx, want);
    }
    for (const Arc* arc : cpn.output_arcs(t)) {
        auto pidx = cpn.place_index(arc->to);
        const Place& place = cpn.places[*pidx];
        const ColorDef& color = cpn.colors[place.color];
        Token raw = eval_arc_raw(*arc, b);
        auto fitted = cpn.fit_token(color, raw);
        if (!fitted) {
            throw DomainError("transition " + t.id + ": token " + format_token(raw) +
                              " does not fit color " + color.name + " at place " + place.id);
        }
        next.add(*pidx, std::move(*fitted));
    }
    return next;
}

namespace {

std::size_t rule_attribute_index(const LocalRule& rule, const ColorDef& color,
                                 const std::string& attr) {
    auto idx = color.attribute_index(attr);
    if (!idx) {
        throw ConfigError("priority rule " + rule.name + ": color " + color.name +
                          " has no attribute '" + attr + "'");
    }
    return *idx;
}

}  // namespace

bool strictly_precedes(const LocalRule& rule, const ColorDef& color, const Token& a,
                       const Token& b) {
    for (const auto& [attr, dir] : rule.keys) {
        std::size_t idx = rule_attribute_index(rule, color, attr);
        int cmp = compare_values(a[idx], b[idx]);
        if (cmp == 0) continue;
        bool a_first = dir == SortDirection::Ascending ? cmp < 0 : cmp > 0;
        return a_first;
    }
    return false;  // full tie: neither precedes the other
}

bool check_priority(const CPN& cpn, const LocalRule& rule, const Place& place,
                    const std::vector<Token>& place_tokens, const Token& candidate) {
    return best_predecessor(cpn, rule, place, place_tokens, candidate) != nullptr;
}

const Token* best_predecessor(const CPN& cpn, const LocalRule& rule, const Place& place,
                              const std::vector<Token>& place_tokens, const Token& candidate) {
    const ColorDef& color = cpn.colors[place.color];
    const Token* best = nullptr;
    for (const Token& other : place_tokens) {
        if (other.empty() || candidate.empty() || other[0] == candidate[0]) continue;
        if (!strictly_precedes(rule, color, other, candidate)) continue;
        if (best == nullptr || strictly_precedes(rule, color, other, *best)) {
            best = &other;
            continue;
        }
        // Comparator tie between predecessors: smallest identifier wins so
        // diagnostics are deterministic.
        if (!strictly_precedes(rule, color, *best, other) &&
            compare_values(other[0], (*best)[0]) < 0) {
            best = &other;
        }
    }
    return best;
}

}  // namespace cpnconf
