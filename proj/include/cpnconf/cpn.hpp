#pragma once

#include "cpnconf/expression.hpp"
#include "cpnconf/values.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cpnconf {

// A color is a named Cartesian product of data domains; attribute names give
// member access into tokens of that color. attributes[0] names the token
// identifier, which no operation may change.
struct ColorDef {
    std::string name;
    std::vector<std::size_t> domains;  // indices into CPN::domains
    std::vector<std::string> attributes;

    std::size_t arity() const { return domains.size(); }
    std::optional<std::size_t> attribute_index(std::string_view attr) const;

    bool operator==(const ColorDef&) const = default;
};

enum class PlaceRole { Source, Sink, Internal };

const char* place_role_name(PlaceRole role);
std::optional<PlaceRole> parse_place_role(std::string_view name);

struct Place {
    std::string id;
    std::size_t color = 0;  // index into CPN::colors
    PlaceRole role = PlaceRole::Internal;

    bool operator==(const Place&) const = default;
};

enum class SortDirection { Ascending, Descending };

// Strict-priority comparator over token attributes; earlier keys dominate,
// full ties mean neither token precedes the other.
struct LocalRule {
    std::string name;  // builtin name, or "custom" for inline specs
    std::vector<std::pair<std::string, SortDirection>> keys;

    bool operator==(const LocalRule&) const = default;
};

// Built-in registry: "price-time-buy" (higher price first, then earlier tsub)
// and "price-time-sell" (lower price first, then earlier tsub).
std::optional<LocalRule> builtin_local_rule(std::string_view name);

// Conjunction of local rules over the input places of one transition.
struct PriorityRule {
    std::map<std::string, LocalRule> local_rules;  // input place id -> rule

    const LocalRule* rule_for(std::string_view place_id) const;

    bool operator==(const PriorityRule&) const = default;
};

struct Transition {
    std::string id;
    std::string activity;
    std::optional<PriorityRule> priority_rule;

    bool operator==(const Transition&) const = default;
};

struct Arc {
    std::string from, to;  // node ids; exactly one endpoint is a place
    Expression expression;

    bool operator==(const Arc& other) const {
        return from == other.from && to == other.to && expression == other.expression;
    }
};

// Place-indexed token multisets. Indexing follows the owning net's place
// order; a marking is a plain value owned by one replay at a time.
class Marking {
public:
    Marking() = default;
    explicit Marking(std::size_t place_count) : per_place_(place_count) {}

    std::size_t place_count() const { return per_place_.size(); }
    void resize(std::size_t place_count) { per_place_.resize(place_count); }

    const std::vector<Token>& tokens(std::size_t place) const { return per_place_[place]; }

    void add(std::size_t place, Token token) { per_place_[place].push_back(std::move(token)); }

    // Removes one token equal to `token`; false when absent.
    bool remove_one(std::size_t place, const Token& token);

    // First token in the place whose identifier component equals `id`.
    const Token* find_by_id(std::size_t place, const Value& id) const;

    // Removes the token with identifier `id` from the place and returns it.
    std::optional<Token> take_by_id(std::size_t place, const Value& id);

    // Replaces the values of the token with identifier `id`; false when absent.
    bool overwrite_by_id(std::size_t place, const Value& id, Token replacement);

    // Place currently holding a token with identifier `id`, if any.
    std::optional<std::size_t> locate_identifier(const Value& id) const;

    std::size_t total_tokens() const;
    bool empty() const { return total_tokens() == 0; }
    void clear_place(std::size_t place) { per_place_[place].clear(); }

    bool operator==(const Marking&) const = default;

private:
    std::vector<std::vector<Token>> per_place_;
};

// Conservative-workflow colored Petri net. Immutable once built; markings are
// the only mutable state and live outside the structure.
struct CPN {
    std::vector<DataDomain> domains;
    std::vector<ColorDef> colors;
    std::vector<Place> places;
    std::vector<Transition> transitions;
    std::vector<Arc> arcs;
    Marking initial_marking;

    // --- lookups (nullptr / nullopt when absent) ---
    std::optional<std::size_t> domain_index(std::string_view name) const;
    std::optional<std::size_t> color_index(std::string_view name) const;
    std::optional<std::size_t> place_index(std::string_view id) const;
    const Place* find_place(std::string_view id) const;
    const Transition* find_transition(std::string_view id) const;
    const Transition* find_transition_by_activity(std::string_view activity) const;

    bool is_place(std::string_view id) const { return place_index(id).has_value(); }

    std::vector<const Arc*> input_arcs(const Transition& t) const;   // place -> t
    std::vector<const Arc*> output_arcs(const Transition& t) const;  // t -> place

    const Place* input_place_of_color(const Transition& t, std::size_t color) const;
    const Place* output_place_of_color(const Transition& t, std::size_t color) const;
    const Place* source_of_color(std::size_t color) const;
    const Place* sink_of_color(std::size_t color) const;

    const DataDomain& domain_of(const ColorDef& color, std::size_t position) const {
        return domains[color.domains[position]];
    }

    // Typed copy of a raw token for `color`; nullopt when arity or any
    // component does not fit the color's domains.
    std::optional<Token> fit_token(const ColorDef& color, const Token& raw) const;

    bool operator==(const CPN&) const = default;
};

// --- Enabling and firing ----------------------------------------------------

// True iff every input-arc expression of `t`, evaluated under `b`, yields a
// token present in its place. Throws EvalError for incomplete bindings.
bool enabled(const CPN& cpn, const Marking& marking, const Transition& t, const Binding& b);

// Fires `t` under `b` and returns the successor marking. Throws
// std::logic_error when not enabled and DomainError when an output
// expression leaves the target place's domain.
Marking fire(const CPN& cpn, const Marking& marking, const Transition& t, const Binding& b);

// --- priority rules ---------------------------------------------------------

// True iff `a` strictly precedes `b` under the rule's comparator keys.
// Attribute names resolve against `color`; unknown names raise ConfigError.
bool strictly_precedes(const LocalRule& rule, const ColorDef& color, const Token& a,
                       const Token& b);

// True = violation: some token with a different identifier in the place
// strictly precedes the candidate. The candidate must be in `place_tokens`.
bool check_priority(const CPN& cpn, const LocalRule& rule, const Place& place,
                    const std::vector<Token>& place_tokens, const Token& candidate);

// The strongest token strictly preceding `candidate`, for diagnostics;
// nullptr when the candidate is maximal.
const Token* best_predecessor(const CPN& cpn, const LocalRule& rule, const Place& place,
                              const std::vector<Token>& place_tokens, const Token& candidate);

}  // namespace cpnconf
