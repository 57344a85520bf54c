#pragma once

#include "cpnconf/values.hpp"

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace cpnconf {

// Assignment of values to arc-expression variables.
using Binding = std::map<std::string, Value>;

enum class TermOp { Add, Sub, Mul, Div };

// One component of an arc expression: a constant, a variable, or an
// arithmetic function over further terms. Terms are immutable and shared.
struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
    enum class Kind { Constant, Variable, Function };

    Kind kind = Kind::Constant;
    Value constant{};      // Kind::Constant
    std::string variable;  // Kind::Variable
    TermOp op = TermOp::Add;
    TermPtr lhs, rhs;  // Kind::Function

    static TermPtr make_constant(Value v);
    static TermPtr make_variable(std::string name);
    static TermPtr make_function(TermOp op, TermPtr lhs, TermPtr rhs);
};

bool terms_equal(const TermPtr& a, const TermPtr& b);
void collect_variables(const TermPtr& term, std::vector<std::string>& out);
std::string term_to_string(const TermPtr& term);

// Tuple of terms labelling an arc: "(b, ts, pr, q1 - q2)".
struct Expression {
    std::vector<TermPtr> terms;

    std::size_t arity() const { return terms.size(); }
    std::string to_string() const;

    friend bool operator==(const Expression& a, const Expression& b);
};

// Parses the tuple grammar
//   expr := "(" term {"," term} ")"
//   term := ident | number | term op term    op := "+" | "-" | "*" | "/"
// with the usual precedence and parentheses inside terms.
// Throws ParseError; the message points at the failing tuple component
// ("token N" counts components, matching how model authors read tuples).
Expression parse_expression(std::string_view text);

// Raw evaluation outcome of one term, before any domain check. `defined` is
// false for division by zero and non-finite intermediate results; the value
// may then still be outside every domain (e.g. a negative difference).
struct RawResult {
    bool defined = true;
    Value value{};
    std::string note;  // why undefined

    std::string display() const { return defined ? format_value(value) : "undefined (" + note + ")"; }
};

// Throws EvalError for unbound variables and non-numeric function operands.
RawResult eval_term_raw(const TermPtr& term, const Binding& binding);

// Strict evaluation: the result must land in `target`. Throws DomainError
// when it does not (or is undefined).
Value eval_term(const TermPtr& term, const Binding& binding, const DataDomain& target);

// Checked evaluation for replay: domain misses are data, not failures.
// `value` is empty when the raw result does not fit the target domain;
// `raw` always carries a printable form of what the arithmetic produced.
struct CheckedValue {
    std::optional<Value> value;
    std::string raw;
};

CheckedValue eval_term_checked(const TermPtr& term, const Binding& binding, const DataDomain& target);

}  // namespace cpnconf
