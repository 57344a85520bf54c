#include "cpnconf/values.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

namespace cpnconf {

const char* domain_kind_name(DomainKind kind) {
    switch (kind) {
        case DomainKind::IdentifierSet: return "identifier-set";
        case DomainKind::NaturalNumber: return "natural-number";
        case DomainKind::PositiveReal: return "positive-real";
        case DomainKind::Text: return "string";
    }
    return "unknown";
}

std::optional<DomainKind> parse_domain_kind(std::string_view name) {
    if (name == "identifier-set") return DomainKind::IdentifierSet;
    if (name == "natural-number") return DomainKind::NaturalNumber;
    if (name == "positive-real") return DomainKind::PositiveReal;
    if (name == "string") return DomainKind::Text;
    return std::nullopt;
}

bool is_numeric(const Value& v) {
    return std::holds_alternative<std::int64_t>(v) || std::holds_alternative<double>(v);
}

double numeric_as_double(const Value& v) {
    if (const auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
    return std::get<double>(v);
}

std::optional<Value> fit_domain(const Value& v, DomainKind kind) {
    switch (kind) {
        case DomainKind::IdentifierSet:
        case DomainKind::Text:
            if (const auto* s = std::get_if<std::string>(&v)) return Value(*s);
            return std::nullopt;
        case DomainKind::NaturalNumber: {
            if (const auto* i = std::get_if<std::int64_t>(&v)) {
                if (*i >= 0) return Value(*i);
                return std::nullopt;
            }
            if (const auto* d = std::get_if<double>(&v)) {
                if (std::isfinite(*d) && *d >= 0.0 && std::floor(*d) == *d &&
                    *d <= 9007199254740992.0) {
                    return Value(static_cast<std::int64_t>(*d));
                }
                return std::nullopt;
            }
            return std::nullopt;
        }
        case DomainKind::PositiveReal: {
            if (!is_numeric(v)) return std::nullopt;
            const double d = numeric_as_double(v);
            if (std::isfinite(d) && d > 0.0) return Value(d);
            return std::nullopt;
        }
    }
    return std::nullopt;
}

int compare_values(const Value& a, const Value& b) {
    if (is_numeric(a) && is_numeric(b)) {
        const double x = numeric_as_double(a);
        const double y = numeric_as_double(b);
        if (x < y) return -1;
        if (x > y) return 1;
        return 0;
    }
    if (a.index() != b.index()) return a.index() < b.index() ? -1 : 1;
    const auto& x = std::get<std::string>(a);
    const auto& y = std::get<std::string>(b);
    return x.compare(y) < 0 ? -1 : (x == y ? 0 : 1);
}

std::string format_value(const Value& v) {
    if (const auto* i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
    if (const auto* d = std::get_if<double>(&v)) {
        char buf[64];
        auto [end, ec] = std::to_chars(buf, buf + sizeof buf, *d);
        if (ec != std::errc()) {
            std::snprintf(buf, sizeof buf, "%g", *d);
            return std::string(buf);
        }
        return std::string(buf, end);
    }
    return std::get<std::string>(v);
}

std::string format_token(const Token& t) {
    std::string out = "(";
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (i > 0) out += ", ";
        out += format_value(t[i]);
    }
    out += ")";
    return out;
}

}  // namespace cpnconf
