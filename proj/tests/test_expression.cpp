#include "cpnconf/errors.hpp"
#include "cpnconf/expression.hpp"

#include <doctest.h>

using namespace cpnconf;

TEST_CASE("tuple expressions parse and print back") {
    Expression e = parse_expression("(b, ts1, pr1, q1 - q2)");
    REQUIRE(e.arity() == 4);
    CHECK(e.terms[0]->kind == Term::Kind::Variable);
    CHECK(e.terms[0]->variable == "b");
    CHECK(e.terms[3]->kind == Term::Kind::Function);
    CHECK(e.to_string() == "(b, ts1, pr1, q1 - q2)");
}

TEST_CASE("constants and nested arithmetic survive a round-trip") {
    Expression e = parse_expression("(s, ts2, pr2, 0)");
    CHECK(e.terms[3]->kind == Term::Kind::Constant);
    CHECK(e.to_string() == "(s, ts2, pr2, 0)");

    Expression nested = parse_expression("(x, (a + b) * 2, 1.5)");
    CHECK(nested.to_string() == "(x, (a + b) * 2, 1.5)");
    Expression same = parse_expression(nested.to_string());
    CHECK(nested == same);
}

TEST_CASE("malformed tuples report the failing component") {
    CHECK_THROWS_AS(parse_expression("(b, ts,, q)"), ParseError);
    try {
        parse_expression("(b, ts,, q)");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("token 3") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_expression("b, ts"), ParseError);
    CHECK_THROWS_AS(parse_expression("(b, ts"), ParseError);
    CHECK_THROWS_AS(parse_expression("()"), ParseError);
    CHECK_THROWS_AS(parse_expression("(a, b) extra"), ParseError);
}

TEST_CASE("variable collection is order-preserving and duplicate-free per term") {
    Expression e = parse_expression("(b, q1 - q2, q1)");
    std::vector<std::string> vars;
    for (const auto& t : e.terms) collect_variables(t, vars);
    CHECK(vars == std::vector<std::string>{"b", "q1", "q2", "q1"});
}

TEST_CASE("evaluation binds variables and keeps integer arithmetic exact") {
    DataDomain nat{"qty", DomainKind::NaturalNumber};
    Binding b{{"q1", Value(std::int64_t{5})}, {"q2", Value(std::int64_t{2})}};
    Expression e = parse_expression("(q1 - q2)");
    Value v = eval_term(e.terms[0], b, nat);
    CHECK(std::get<std::int64_t>(v) == 3);

    DataDomain pos{"price", DomainKind::PositiveReal};
    Binding mixed{{"p", Value(21.5)}, {"d", Value(std::int64_t{2})}};
    Value prod = eval_term(parse_expression("(p * d)").terms[0], mixed, pos);
    CHECK(std::get<double>(prod) == doctest::Approx(43.0));
}

TEST_CASE("inexact integer division widens to a real") {
    Binding b{{"a", Value(std::int64_t{7})}, {"c", Value(std::int64_t{2})}};
    RawResult r = eval_term_raw(parse_expression("(a / c)").terms[0], b);
    REQUIRE(r.defined);
    CHECK(std::get<double>(r.value) == doctest::Approx(3.5));

    // The widened value is then judged by the target domain.
    DataDomain nat{"qty", DomainKind::NaturalNumber};
    DataDomain pos{"price", DomainKind::PositiveReal};
    CHECK_THROWS_AS(eval_term(parse_expression("(a / c)").terms[0], b, nat), DomainError);
    Value ok = eval_term(parse_expression("(a / c)").terms[0], b, pos);
    CHECK(std::get<double>(ok) == doctest::Approx(3.5));
}

TEST_CASE("undefined arithmetic is reported, not crashed on") {
    DataDomain nat{"qty", DomainKind::NaturalNumber};
    Binding b{{"a", Value(std::int64_t{1})}, {"c", Value(std::int64_t{0})}};
    RawResult r = eval_term_raw(parse_expression("(a / c)").terms[0], b);
    CHECK_FALSE(r.defined);
    CHECK(r.display().find("undefined") != std::string::npos);

    CHECK_THROWS_AS(eval_term(parse_expression("(a / c)").terms[0], b, nat), DomainError);
}

TEST_CASE("unbound variables and non-numeric operands raise evaluation errors") {
    DataDomain nat{"qty", DomainKind::NaturalNumber};
    Binding b{{"a", Value(std::int64_t{1})}};
    CHECK_THROWS_AS(eval_term(parse_expression("(a + zz)").terms[0], b, nat), EvalError);

    Binding s{{"a", Value(std::string("b1"))}, {"c", Value(std::int64_t{1})}};
    CHECK_THROWS_AS(eval_term(parse_expression("(a + c)").terms[0], s, nat), EvalError);

    // The checked path converts the same failure into an undefined result.
    CheckedValue cv = eval_term_checked(parse_expression("(a + c)").terms[0], s, nat);
    CHECK_FALSE(cv.value.has_value());
    CHECK(cv.raw.find("undefined") != std::string::npos);
}

TEST_CASE("signed overflow lands in the undefined bucket") {
    Binding b{{"a", Value(std::int64_t{1} << 62)}, {"c", Value(std::int64_t{1} << 62)}};
    RawResult r = eval_term_raw(parse_expression("(a + c)").terms[0], b);
    CHECK_FALSE(r.defined);
}
