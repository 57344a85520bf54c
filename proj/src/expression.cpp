#include "cpnconf/expression.hpp"

#include "cpnconf/errors.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>

namespace cpnconf {

TermPtr Term::make_constant(Value v) {
    auto t = std::make_shared<Term>();
    t->kind = Kind::Constant;
    t->constant = std::move(v);
    return t;
}

TermPtr Term::make_variable(std::string name) {
    auto t = std::make_shared<Term>();
    t->kind = Kind::Variable;
    t->variable = std::move(name);
    return t;
}

TermPtr Term::make_function(TermOp op, TermPtr lhs, TermPtr rhs) {
    auto t = std::make_shared<Term>();
    t->kind = Kind::Function;
    t->op = op;
    t->lhs = std::move(lhs);
    t->rhs = std::move(rhs);
    return t;
}

bool terms_equal(const TermPtr& a, const TermPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case Term::Kind::Constant: return a->constant == b->constant;
        case Term::Kind::Variable: return a->variable == b->variable;
        case Term::Kind::Function:
            return a->op == b->op && terms_equal(a->lhs, b->lhs) && terms_equal(a->rhs, b->rhs);
    }
    return false;
}

void collect_variables(const TermPtr& term, std::vector<std::string>& out) {
    if (!term) return;
    switch (term->kind) {
        case Term::Kind::Constant: return;
        case Term::Kind::Variable: out.push_back(term->variable); return;
        case Term::Kind::Function:
            collect_variables(term->lhs, out);
            collect_variables(term->rhs, out);
            return;
    }
}

namespace {

int precedence(TermOp op) {
    return (op == TermOp::Mul || op == TermOp::Div) ? 2 : 1;
}

char op_char(TermOp op) {
    switch (op) {
        case TermOp::Add: return '+';
        case TermOp::Sub: return '-';
        case TermOp::Mul: return '*';
        case TermOp::Div: return '/';
    }
    return '?';
}

std::string print_term(const TermPtr& term, int parent_prec, bool right_operand) {
    switch (term->kind) {
        case Term::Kind::Constant: return format_value(term->constant);
        case Term::Kind::Variable: return term->variable;
        case Term::Kind::Function: break;
    }
    const int prec = precedence(term->op);
    std::string body = print_term(term->lhs, prec, false);
    body += ' ';
    body += op_char(term->op);
    body += ' ';
    body += print_term(term->rhs, prec, true);
    // Operators are left-associative: a right operand of equal precedence
    // needs parentheses to survive a reparse.
    if (prec < parent_prec || (prec == parent_prec && right_operand)) {
        return "(" + body + ")";
    }
    return body;
}

}  // namespace

std::string term_to_string(const TermPtr& term) {
    return print_term(term, 0, false);
}

std::string Expression::to_string() const {
    std::string out = "(";
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (i > 0) out += ", ";
        out += term_to_string(terms[i]);
    }
    out += ")";
    return out;
}

bool operator==(const Expression& a, const Expression& b) {
    if (a.terms.size() != b.terms.size()) return false;
    for (std::size_t i = 0; i < a.terms.size(); ++i) {
        if (!terms_equal(a.terms[i], b.terms[i])) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

enum class TokKind { LParen, RParen, Comma, Op, Ident, Number, End };

struct Tok {
    TokKind kind = TokKind::End;
    std::string text;
    TermOp op = TermOp::Add;
    Value number{};
};

struct Lexer {
    std::string_view src;
    std::size_t pos = 0;

    Tok next() {
        while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
        if (pos >= src.size()) return {TokKind::End, ""};
        const char c = src[pos];
        switch (c) {
            case '(': ++pos; return {TokKind::LParen, "("};
            case ')': ++pos; return {TokKind::RParen, ")"};
            case ',': ++pos; return {TokKind::Comma, ","};
            case '+': ++pos; return {TokKind::Op, "+", TermOp::Add};
            case '-': ++pos; return {TokKind::Op, "-", TermOp::Sub};
            case '*': ++pos; return {TokKind::Op, "*", TermOp::Mul};
            case '/': ++pos; return {TokKind::Op, "/", TermOp::Div};
            default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            const std::size_t start = pos;
            while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
            bool is_real = false;
            if (pos + 1 < src.size() && src[pos] == '.' &&
                std::isdigit(static_cast<unsigned char>(src[pos + 1]))) {
                is_real = true;
                ++pos;
                while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
            }
            const std::string text(src.substr(start, pos - start));
            Tok t{TokKind::Number, text};
            if (is_real) {
                t.number = Value(std::stod(text));
            } else {
                std::int64_t v = 0;
                auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
                if (ec != std::errc() || p != text.data() + text.size()) {
                    throw ParseError("integer literal out of range: " + text);
                }
                t.number = Value(v);
            }
            return t;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const std::size_t start = pos;
            while (pos < src.size() &&
                   (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_')) {
                ++pos;
            }
            return {TokKind::Ident, std::string(src.substr(start, pos - start))};
        }
        throw ParseError("unexpected character '" + std::string(1, c) + "' at offset " +
                         std::to_string(pos));
    }
};

struct Parser {
    std::vector<Tok> toks;
    std::size_t at = 0;
    std::size_t component = 0;  // 1-based tuple component being parsed

    const Tok& peek() const { return toks[at]; }
    const Tok& take() { return toks[at++]; }

    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError("parse error at token " + std::to_string(component) + ": " + what);
    }

    TermPtr parse_primary() {
        const Tok& t = peek();
        switch (t.kind) {
            case TokKind::Ident: return Term::make_variable(take().text);
            case TokKind::Number: return Term::make_constant(take().number);
            case TokKind::LParen: {
                take();
                TermPtr inner = parse_additive();
                if (peek().kind != TokKind::RParen) fail("expected ')'");
                take();
                return inner;
            }
            default: fail("expected identifier, number or '('");
        }
    }

    TermPtr parse_multiplicative() {
        TermPtr lhs = parse_primary();
        while (peek().kind == TokKind::Op &&
               (peek().op == TermOp::Mul || peek().op == TermOp::Div)) {
            const TermOp op = take().op;
            lhs = Term::make_function(op, lhs, parse_primary());
        }
        return lhs;
    }

    TermPtr parse_additive() {
        TermPtr lhs = parse_multiplicative();
        while (peek().kind == TokKind::Op &&
               (peek().op == TermOp::Add || peek().op == TermOp::Sub)) {
            const TermOp op = take().op;
            lhs = Term::make_function(op, lhs, parse_multiplicative());
        }
        return lhs;
    }
};

}  // namespace

Expression parse_expression(std::string_view text) {
    Lexer lex{text};
    Parser p;
    for (;;) {
        Tok t = lex.next();
        const bool end = t.kind == TokKind::End;
        p.toks.push_back(std::move(t));
        if (end) break;
    }

    if (p.peek().kind != TokKind::LParen) {
        p.component = 1;
        p.fail("expression must start with '('");
    }
    p.take();

    Expression expr;
    for (;;) {
        p.component = expr.terms.size() + 1;
        expr.terms.push_back(p.parse_additive());
        if (p.peek().kind == TokKind::Comma) {
            p.take();
            continue;
        }
        if (p.peek().kind == TokKind::RParen) {
            p.take();
            break;
        }
        p.fail("expected ',' or ')'");
    }
    if (p.peek().kind != TokKind::End) {
        p.component = expr.terms.size();
        p.fail("trailing input after ')'");
    }
    return expr;
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

RawResult numeric_op(TermOp op, const RawResult& a, const RawResult& b) {
    if (!a.defined) return a;
    if (!b.defined) return b;
    if (!is_numeric(a.value) || !is_numeric(b.value)) {
        throw EvalError("arithmetic over non-numeric operand");
    }

    const auto* ia = std::get_if<std::int64_t>(&a.value);
    const auto* ib = std::get_if<std::int64_t>(&b.value);
    if (ia && ib) {
        std::int64_t r = 0;
        bool overflow = false;
        switch (op) {
            case TermOp::Add: overflow = __builtin_add_overflow(*ia, *ib, &r); break;
            case TermOp::Sub: overflow = __builtin_sub_overflow(*ia, *ib, &r); break;
            case TermOp::Mul: overflow = __builtin_mul_overflow(*ia, *ib, &r); break;
            case TermOp::Div:
                if (*ib == 0) return {false, Value{}, "division by zero"};
                if (*ia % *ib == 0) return {true, Value(*ia / *ib), {}};
                // Inexact integer division produces a real; the domain check decides.
                return {true, Value(static_cast<double>(*ia) / static_cast<double>(*ib)), {}};
        }
        if (overflow) return {false, Value{}, "integer overflow"};
        return {true, Value(r), {}};
    }

    const double x = numeric_as_double(a.value);
    const double y = numeric_as_double(b.value);
    double r = 0.0;
    switch (op) {
        case TermOp::Add: r = x + y; break;
        case TermOp::Sub: r = x - y; break;
        case TermOp::Mul: r = x * y; break;
        case TermOp::Div:
            if (y == 0.0) return {false, Value{}, "division by zero"};
            r = x / y;
            break;
    }
    if (!std::isfinite(r)) return {false, Value{}, "non-finite result"};
    return {true, Value(r), {}};
}

}  // namespace

RawResult eval_term_raw(const TermPtr& term, const Binding& binding) {
    switch (term->kind) {
        case Term::Kind::Constant: return {true, term->constant, {}};
        case Term::Kind::Variable: {
            const auto it = binding.find(term->variable);
            if (it == binding.end()) throw EvalError("unbound variable: " + term->variable);
            return {true, it->second, {}};
        }
        case Term::Kind::Function:
            return numeric_op(term->op, eval_term_raw(term->lhs, binding),
                              eval_term_raw(term->rhs, binding));
    }
    throw EvalError("corrupt term");
}

Value eval_term(const TermPtr& term, const Binding& binding, const DataDomain& target) {
    const RawResult raw = eval_term_raw(term, binding);
    if (!raw.defined) {
        throw DomainError("term '" + term_to_string(term) + "' is undefined: " + raw.note);
    }
    auto fitted = fit_domain(raw.value, target.kind);
    if (!fitted) {
        throw DomainError("value " + format_value(raw.value) + " of term '" +
                          term_to_string(term) + "' is outside domain " + target.name + " (" +
                          domain_kind_name(target.kind) + ")");
    }
    return *fitted;
}

CheckedValue eval_term_checked(const TermPtr& term, const Binding& binding,
                               const DataDomain& target) {
    CheckedValue out;
    try {
        const RawResult raw = eval_term_raw(term, binding);
        out.raw = raw.display();
        if (raw.defined) out.value = fit_domain(raw.value, target.kind);
    } catch (const EvalError& e) {
        // Corrupted logs can put strings where arithmetic expects numbers;
        // on this path that is a finding, not a failure.
        out.raw = std::string("undefined (") + e.what() + ")";
    }
    return out;
}

}  // namespace cpnconf
