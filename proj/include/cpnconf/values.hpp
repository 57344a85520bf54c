#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace cpnconf {

// Token data domains. NaturalNumber includes zero; PositiveReal excludes it.
enum class DomainKind { IdentifierSet, NaturalNumber, PositiveReal, Text };

const char* domain_kind_name(DomainKind kind);
std::optional<DomainKind> parse_domain_kind(std::string_view name);

struct DataDomain {
    std::string name;
    DomainKind kind = DomainKind::Text;

    bool operator==(const DataDomain&) const = default;
};

// One token component. Naturals are exact integers, reals are doubles,
// identifiers and text are strings.
using Value = std::variant<std::int64_t, double, std::string>;

bool is_numeric(const Value& v);
double numeric_as_double(const Value& v);  // precondition: is_numeric

// Normalizes a raw value into `kind`: naturals become non-negative int64,
// positive reals become doubles > 0, identifiers/text stay strings.
// Returns nullopt when the value cannot belong to the domain.
std::optional<Value> fit_domain(const Value& v, DomainKind kind);

// Three-way comparison; int64 and double compare numerically, strings
// lexicographically. Ordering across kinds falls back to the variant index.
int compare_values(const Value& a, const Value& b);

std::string format_value(const Value& v);

using Token = std::vector<Value>;

std::string format_token(const Token& t);

}  // namespace cpnconf
