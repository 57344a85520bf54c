#pragma once

#include "cpnconf/cpn.hpp"

#include <string>
#include <vector>

namespace cpnconf {

// One violated well-formedness clause. Violations are data: callers decide
// whether to abort, report, or ignore.
struct Violation {
    std::string code;     // stable kebab-case identifier, e.g. "duplicate-activity-label"
    std::string context;  // offending node / color / token
    std::string message;  // human-readable explanation

    bool operator==(const Violation&) const = default;
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }
    bool has(std::string_view code) const;
    std::string to_string() const;  // one line per violation, "" when ok
};

// Structural well-formedness: node ids unique, arcs bipartite between
// existing nodes, expression arity matches the adjacent place's color,
// activity labels unique, priority rules reference real input places and
// attributes, initial-marking tokens fit their place colors.
ValidationReport validate_syntax(const CPN& cpn);

// The four conservative-workflow conditions, checked only on a net that
// passes validate_syntax:
//   1. per transition, input and output arcs pair off by first variable,
//      so identifiers neither vanish nor duplicate (codes cw1-*);
//   2. initial-marking identifiers pairwise distinct (cw2-*);
//   3. per used color, exactly one source and one sink and a path between
//      them through places of that color only (cw3-*);
//   4. per transition, input places pairwise color-distinct and output
//      places pairwise color-distinct (cw4-*).
ValidationReport validate_conservative_workflow(const CPN& cpn);

}  // namespace cpnconf
