#include "cpnconf/cpn.hpp"
#include "cpnconf/errors.hpp"
#include "cpnconf/trading.hpp"

#include <doctest.h>

using namespace cpnconf;

namespace {

Token buy_token(const char* id, std::int64_t ts, double price, std::int64_t qty) {
    return Token{Value(std::string(id)), Value(ts), Value(price), Value(qty)};
}

Token sell_token(const char* id, std::int64_t ts, double price, std::int64_t qty) {
    return Token{Value(std::string(id)), Value(ts), Value(price), Value(qty)};
}

}  // namespace

TEST_CASE("a transition is enabled only when every input arc finds its token") {
    CPN cpn = build_reference_model();
    Marking m = cpn.initial_marking;
    std::size_t p5 = *cpn.place_index("p5");
    std::size_t p6 = *cpn.place_index("p6");
    m.add(p5, buy_token("b1", 1, 22.0, 5));

    const Transition& t6 = *cpn.find_transition("t6");
    Binding b{{"b", Value(std::string("b1"))}, {"ts1", Value(std::int64_t{1})},
              {"pr1", Value(22.0)},           {"q1", Value(std::int64_t{5})},
              {"s", Value(std::string("s1"))}, {"ts2", Value(std::int64_t{2})},
              {"pr2", Value(21.0)},           {"q2", Value(std::int64_t{2})}};

    CHECK_FALSE(enabled(cpn, m, t6, b));  // p6 is empty
    m.add(p6, sell_token("s1", 2, 21.0, 2));
    CHECK(enabled(cpn, m, t6, b));

    Binding wrong = b;
    wrong["q2"] = Value(std::int64_t{3});  // no such sell token present
    CHECK_FALSE(enabled(cpn, m, t6, wrong));
}

TEST_CASE("firing a partial fill moves the remainder and retires the sell") {
    CPN cpn = build_reference_model();
    Marking m = cpn.initial_marking;
    std::size_t p5 = *cpn.place_index("p5");
    std::size_t p6 = *cpn.place_index("p6");
    std::size_t p8 = *cpn.place_index("p8");
    m.add(p5, buy_token("b1", 1, 22.0, 5));
    m.add(p6, sell_token("s1", 2, 21.0, 2));

    Binding b{{"b", Value(std::string("b1"))}, {"ts1", Value(std::int64_t{1})},
              {"pr1", Value(22.0)},           {"q1", Value(std::int64_t{5})},
              {"s", Value(std::string("s1"))}, {"ts2", Value(std::int64_t{2})},
              {"pr2", Value(21.0)},           {"q2", Value(std::int64_t{2})}};

    Marking after = fire(cpn, m, *cpn.find_transition("t6"), b);

    REQUIRE(after.tokens(p5).size() == 1);
    CHECK(after.tokens(p5)[0] == buy_token("b1", 1, 22.0, 3));
    CHECK(after.tokens(p6).empty());
    REQUIRE(after.tokens(p8).size() == 1);
    CHECK(after.tokens(p8)[0] == sell_token("s1", 2, 21.0, 0));
    CHECK(after.total_tokens() == 2);
}

TEST_CASE("an exact match retires both orders with zero quantity") {
    CPN cpn = build_reference_model();
    Marking m = cpn.initial_marking;
    m.add(*cpn.place_index("p5"), buy_token("b1", 1, 10.0, 2));
    m.add(*cpn.place_index("p6"), sell_token("s1", 2, 10.0, 2));

    Binding b{{"b", Value(std::string("b1"))}, {"ts1", Value(std::int64_t{1})},
              {"pr1", Value(10.0)},           {"q1", Value(std::int64_t{2})},
              {"s", Value(std::string("s1"))}, {"ts2", Value(std::int64_t{2})},
              {"pr2", Value(10.0)},           {"q2", Value(std::int64_t{2})}};

    Marking after = fire(cpn, m, *cpn.find_transition("t5"), b);
    CHECK(after.tokens(*cpn.place_index("p7"))[0] == buy_token("b1", 1, 10.0, 0));
    CHECK(after.tokens(*cpn.place_index("p8"))[0] == sell_token("s1", 2, 10.0, 0));
}

TEST_CASE("firing a disabled transition is a programming error") {
    CPN cpn = build_reference_model();
    Binding b{{"b", Value(std::string("b1"))}, {"ts", Value(std::int64_t{1})},
              {"pr", Value(22.0)},            {"q", Value(std::int64_t{5})}};
    CHECK_THROWS_AS(fire(cpn, cpn.initial_marking, *cpn.find_transition("t1"), b),
                    std::logic_error);
}

TEST_CASE("negative trade remainders violate the quantity domain") {
    CPN cpn = build_reference_model();
    Marking m = cpn.initial_marking;
    m.add(*cpn.place_index("p5"), buy_token("b1", 1, 22.0, 2));
    m.add(*cpn.place_index("p6"), sell_token("s1", 2, 21.0, 5));

    // t6 computes q1 - q2 = -3, which has no home in natural numbers.
    Binding b{{"b", Value(std::string("b1"))}, {"ts1", Value(std::int64_t{1})},
              {"pr1", Value(22.0)},           {"q1", Value(std::int64_t{2})},
              {"s", Value(std::string("s1"))}, {"ts2", Value(std::int64_t{2})},
              {"pr2", Value(21.0)},           {"q2", Value(std::int64_t{5})}};
    CHECK_THROWS_AS(fire(cpn, m, *cpn.find_transition("t6"), b), DomainError);
}

TEST_CASE("sell-side priority prefers lower price, then earlier submission") {
    CPN cpn = build_reference_model();
    const Transition& t6 = *cpn.find_transition("t6");
    REQUIRE(t6.priority_rule.has_value());
    const LocalRule* rule = t6.priority_rule->rule_for("p6");
    REQUIRE(rule != nullptr);

    std::vector<Token> book{sell_token("s1", 2, 21.0, 2), sell_token("s2", 3, 19.0, 1)};

    // s2 offers a lower price, so consuming s1 breaks the rule.
    CHECK(check_priority(cpn, *rule, *cpn.find_place("p6"), book, book[0]));
    CHECK_FALSE(check_priority(cpn, *rule, *cpn.find_place("p6"), book, book[1]));

    const Token* best = best_predecessor(cpn, *rule, *cpn.find_place("p6"), book, book[0]);
    REQUIRE(best != nullptr);
    CHECK(format_value((*best)[0]) == "s2");
}

TEST_CASE("a singleton book can never violate priority") {
    CPN cpn = build_reference_model();
    const LocalRule* rule = cpn.find_transition("t5")->priority_rule->rule_for("p6");
    std::vector<Token> book{sell_token("s1", 2, 21.0, 2)};
    CHECK_FALSE(check_priority(cpn, *rule, *cpn.find_place("p6"), book, book[0]));
}

TEST_CASE("equal prices fall back to submission time") {
    CPN cpn = build_reference_model();
    const LocalRule* rule = cpn.find_transition("t5")->priority_rule->rule_for("p6");
    std::vector<Token> book{sell_token("s1", 5, 21.0, 2), sell_token("s2", 3, 21.0, 1)};
    CHECK(check_priority(cpn, *rule, *cpn.find_place("p6"), book, book[0]));
    CHECK_FALSE(check_priority(cpn, *rule, *cpn.find_place("p6"), book, book[1]));
}

TEST_CASE("buy-side priority prefers higher price") {
    CPN cpn = build_reference_model();
    const LocalRule* rule = cpn.find_transition("t5")->priority_rule->rule_for("p5");
    REQUIRE(rule != nullptr);
    std::vector<Token> book{buy_token("b1", 1, 22.0, 5), buy_token("b2", 2, 25.0, 1)};
    CHECK(check_priority(cpn, *rule, *cpn.find_place("p5"), book, book[0]));
    CHECK_FALSE(check_priority(cpn, *rule, *cpn.find_place("p5"), book, book[1]));
}

TEST_CASE("full ties on every key are not violations") {
    CPN cpn = build_reference_model();
    const LocalRule* rule = cpn.find_transition("t5")->priority_rule->rule_for("p6");
    std::vector<Token> book{sell_token("s1", 3, 21.0, 2), sell_token("s2", 3, 21.0, 9)};
    CHECK_FALSE(check_priority(cpn, *rule, *cpn.find_place("p6"), book, book[0]));
    CHECK_FALSE(check_priority(cpn, *rule, *cpn.find_place("p6"), book, book[1]));
}

TEST_CASE("marking bookkeeping: find, take, overwrite, locate") {
    CPN cpn = build_reference_model();
    Marking m = cpn.initial_marking;
    std::size_t p5 = *cpn.place_index("p5");
    m.add(p5, buy_token("b1", 1, 22.0, 5));

    const Token* found = m.find_by_id(p5, Value(std::string("b1")));
    REQUIRE(found != nullptr);
    CHECK((*found)[3] == Value(std::int64_t{5}));
    CHECK(m.find_by_id(p5, Value(std::string("zz"))) == nullptr);

    auto where = m.locate_identifier(Value(std::string("b1")));
    REQUIRE(where.has_value());
    CHECK(*where == p5);

    m.overwrite_by_id(p5, Value(std::string("b1")), buy_token("b1", 1, 22.0, 4));
    CHECK((*m.find_by_id(p5, Value(std::string("b1"))))[3] == Value(std::int64_t{4}));

    auto taken = m.take_by_id(p5, Value(std::string("b1")));
    REQUIRE(taken.has_value());
    CHECK(m.tokens(p5).empty());
    CHECK(m.empty());
}
