#pragma once

#include "cpnconf/cpn.hpp"

#include <json.hpp>

#include <string>

namespace cpnconf {

// Model-definition JSON:
//   {
//     "domains":  [{"name": "...", "kind": "identifier-set|natural-number|positive-real|string"}],
//     "colors":   [{"name": "...", "domains": ["..."], "attributes": ["..."]}],
//     "places":   [{"id": "...", "color": "...", "role": "source|sink|internal"}],
//     "transitions": [{"id": "...", "activity": "...",
//                      "priority_rule": {"<place>": "price-time-buy" | [{"attribute": "...",
//                                                                       "direction": "asc|desc"}]}}],
//     "arcs":     [{"from": "...", "to": "...", "expression": "(a, b, ...)"}],
//     "initial_marking": {"<place>": [[v, ...], ...]}   // optional, default empty
//   }
// Unresolvable references and malformed expressions are ParseError (the file
// cannot be interpreted); semantic violations are validate_syntax's job.

CPN model_from_json(const nlohmann::json& doc);
nlohmann::ordered_json model_to_json(const CPN& cpn);

CPN load_model(const std::string& path);
void save_model(const CPN& cpn, const std::string& path);

}  // namespace cpnconf
