#include "cpnconf/model_io.hpp"

#include "cpnconf/errors.hpp"
#include "cpnconf/util.hpp"

#include <utility>

namespace cpnconf {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw ParseError(what, where);
}

const json& require(const json& obj, const char* key, const std::string& where) {
    if (!obj.is_object() || !obj.contains(key)) {
        fail(where, std::string("missing required field '") + key + "'");
    }
    return obj.at(key);
}

std::string require_string(const json& obj, const char* key, const std::string& where) {
    const json& v = require(obj, key, where);
    if (!v.is_string()) fail(where, std::string("field '") + key + "' must be a string");
    return v.get<std::string>();
}

Value value_from_json(const json& v, const std::string& where) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer() || v.is_number_unsigned()) return v.get<std::int64_t>();
    if (v.is_number_float()) return v.get<double>();
    fail(where, "token component must be a string or number");
}

ordered_json value_to_json(const Value& v) {
    if (const auto* i = std::get_if<std::int64_t>(&v)) return *i;
    if (const auto* d = std::get_if<double>(&v)) return *d;
    return std::get<std::string>(v);
}

SortDirection parse_direction(const std::string& s, const std::string& where) {
    if (s == "asc") return SortDirection::Ascending;
    if (s == "desc") return SortDirection::Descending;
    fail(where, "direction must be 'asc' or 'desc', got '" + s + "'");
}

LocalRule rule_from_json(const json& spec, const std::string& where) {
    if (spec.is_string()) {
        auto builtin = builtin_local_rule(spec.get<std::string>());
        if (!builtin) {
            throw ConfigError(where + ": unknown built-in rule '" + spec.get<std::string>() + "'");
        }
        return *builtin;
    }
    if (!spec.is_array() || spec.empty()) {
        fail(where, "rule must be a built-in name or a non-empty key array");
    }
    LocalRule rule{"custom", {}};
    for (const json& key : spec) {
        std::string attr = require_string(key, "attribute", where);
        SortDirection dir = parse_direction(require_string(key, "direction", where), where);
        rule.keys.emplace_back(std::move(attr), dir);
    }
    return rule;
}

json rule_to_json(const LocalRule& rule) {
    if (auto builtin = builtin_local_rule(rule.name); builtin && *builtin == rule) {
        return rule.name;
    }
    ordered_json keys = ordered_json::array();
    for (const auto& [attr, dir] : rule.keys) {
        keys.push_back({{"attribute", attr},
                        {"direction", dir == SortDirection::Ascending ? "asc" : "desc"}});
    }
    return keys;
}

}  // namespace

CPN model_from_json(const json& doc) {
    if (!doc.is_object()) fail("model", "model document must be a JSON object");
    CPN cpn;

    for (const json& d : require(doc, "domains", "model")) {
        std::string name = require_string(d, "name", "domains");
        std::string kind_str = require_string(d, "kind", "domains." + name);
        auto kind = parse_domain_kind(kind_str);
        if (!kind) fail("domains." + name, "unknown domain kind '" + kind_str + "'");
        cpn.domains.push_back({std::move(name), *kind});
    }

    for (const json& c : require(doc, "colors", "model")) {
        ColorDef color;
        color.name = require_string(c, "name", "colors");
        const std::string where = "colors." + color.name;
        for (const json& dn : require(c, "domains", where)) {
            if (!dn.is_string()) fail(where, "domain references must be strings");
            auto idx = cpn.domain_index(dn.get<std::string>());
            if (!idx) fail(where, "unknown domain '" + dn.get<std::string>() + "'");
            color.domains.push_back(*idx);
        }
        for (const json& a : require(c, "attributes", where)) {
            if (!a.is_string()) fail(where, "attributes must be strings");
            color.attributes.push_back(a.get<std::string>());
        }
        cpn.colors.push_back(std::move(color));
    }

    for (const json& p : require(doc, "places", "model")) {
        Place place;
        place.id = require_string(p, "id", "places");
        const std::string where = "places." + place.id;
        std::string color_name = require_string(p, "color", where);
        auto cidx = cpn.color_index(color_name);
        if (!cidx) fail(where, "unknown color '" + color_name + "'");
        place.color = *cidx;
        std::string role_str = p.contains("role") ? require_string(p, "role", where) : "internal";
        auto role = parse_place_role(role_str);
        if (!role) fail(where, "unknown place role '" + role_str + "'");
        place.role = *role;
        cpn.places.push_back(std::move(place));
    }

    for (const json& t : require(doc, "transitions", "model")) {
        Transition trans;
        trans.id = require_string(t, "id", "transitions");
        const std::string where = "transitions." + trans.id;
        trans.activity = require_string(t, "activity", where);
        if (t.contains("priority_rule")) {
            const json& spec = t.at("priority_rule");
            if (!spec.is_object()) fail(where, "priority_rule must map place ids to rules");
            PriorityRule rule;
            for (const auto& [place_id, local] : spec.items()) {
                rule.local_rules.emplace(place_id, rule_from_json(local, where + "." + place_id));
            }
            trans.priority_rule = std::move(rule);
        }
        cpn.transitions.push_back(std::move(trans));
    }

    for (const json& a : require(doc, "arcs", "model")) {
        Arc arc;
        arc.from = require_string(a, "from", "arcs");
        arc.to = require_string(a, "to", "arcs");
        const std::string where = "arcs." + arc.from + "->" + arc.to;
        arc.expression = parse_expression(require_string(a, "expression", where));
        cpn.arcs.push_back(std::move(arc));
    }

    cpn.initial_marking.resize(cpn.places.size());
    if (doc.contains("initial_marking")) {
        const json& marking = doc.at("initial_marking");
        if (!marking.is_object()) fail("initial_marking", "must map place ids to token arrays");
        for (const auto& [place_id, tokens] : marking.items()) {
            auto pidx = cpn.place_index(place_id);
            if (!pidx) fail("initial_marking", "unknown place '" + place_id + "'");
            if (!tokens.is_array()) fail("initial_marking." + place_id, "tokens must be an array");
            for (const json& tok : tokens) {
                if (!tok.is_array()) fail("initial_marking." + place_id, "each token must be an array");
                Token token;
                for (const json& v : tok) {
                    token.push_back(value_from_json(v, "initial_marking." + place_id));
                }
                cpn.initial_marking.add(*pidx, std::move(token));
            }
        }
    }

    return cpn;
}

ordered_json model_to_json(const CPN& cpn) {
    ordered_json doc;

    doc["domains"] = ordered_json::array();
    for (const DataDomain& d : cpn.domains) {
        doc["domains"].push_back({{"name", d.name}, {"kind", domain_kind_name(d.kind)}});
    }

    doc["colors"] = ordered_json::array();
    for (const ColorDef& c : cpn.colors) {
        ordered_json color;
        color["name"] = c.name;
        color["domains"] = ordered_json::array();
        for (std::size_t d : c.domains) color["domains"].push_back(cpn.domains[d].name);
        color["attributes"] = c.attributes;
        doc["colors"].push_back(std::move(color));
    }

    doc["places"] = ordered_json::array();
    for (const Place& p : cpn.places) {
        doc["places"].push_back({{"id", p.id},
                                 {"color", cpn.colors[p.color].name},
                                 {"role", place_role_name(p.role)}});
    }

    doc["transitions"] = ordered_json::array();
    for (const Transition& t : cpn.transitions) {
        ordered_json trans;
        trans["id"] = t.id;
        trans["activity"] = t.activity;
        if (t.priority_rule) {
            ordered_json rules;
            for (const auto& [place_id, rule] : t.priority_rule->local_rules) {
                rules[place_id] = rule_to_json(rule);
            }
            trans["priority_rule"] = std::move(rules);
        }
        doc["transitions"].push_back(std::move(trans));
    }

    doc["arcs"] = ordered_json::array();
    for (const Arc& a : cpn.arcs) {
        doc["arcs"].push_back(
            {{"from", a.from}, {"to", a.to}, {"expression", a.expression.to_string()}});
    }

    bool any_tokens = cpn.initial_marking.total_tokens() > 0;
    if (any_tokens) {
        ordered_json marking;
        for (std::size_t p = 0; p < cpn.places.size(); ++p) {
            const auto& bag = cpn.initial_marking.tokens(p);
            if (bag.empty()) continue;
            ordered_json tokens = ordered_json::array();
            for (const Token& tok : bag) {
                ordered_json arr = ordered_json::array();
                for (const Value& v : tok) arr.push_back(value_to_json(v));
                tokens.push_back(std::move(arr));
            }
            marking[cpn.places[p].id] = std::move(tokens);
        }
        doc["initial_marking"] = std::move(marking);
    }

    return doc;
}

CPN load_model(const std::string& path) {
    std::string text = read_text_file(path);
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(e.what(), path);
    }
    try {
        return model_from_json(doc);
    } catch (const ParseError& e) {
        throw ParseError(e.what(), path);
    }
}

void save_model(const CPN& cpn, const std::string& path) {
    write_text_file(path, model_to_json(cpn).dump(2) + "\n");
}

}  // namespace cpnconf
