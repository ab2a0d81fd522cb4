#pragma once

// Textual constraint language: parser, canonical printer and diagnostics.
//
// Grammar (EBNF):
//
//   constraint    = composite | aggregation | predicate ;
//   composite     = "include" "at" "least" integer "users" "with" conj ;
//   conj          = simple { "and" simple } ;
//   simple        = aggregation | predicate ;
//   aggregation   = agg "(" ident ")" aop number ;
//   agg           = "avg" | "sum" | "min" | "max" | "count" ;
//   predicate     = ident op literal ;
//   op            = "=" | "!=" | "<" | "<=" | ">" | ">=" | "substring" ;
//   aop           = "=" | "<" | "<=" | ">" | ">=" ;
//   literal       = number | date | string ;
//   date          = digit{4} "-" digit{2} "-" digit{2} ;
//   string        = '"' { any-char-except-quote } '"' ;
//
// Text literals are double-quoted with no escape sequences, so a text value
// containing '"' has no written form; dates are unquoted ISO tokens. The
// word "include" is reserved in constraint-head position, and an aggregator
// name starts an aggregation only when followed by '('. Parsing is total:
// any input yields a constraint or error diagnostics.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "groupform/constraint.hpp"

namespace groupform::dsl {

struct SourceSpan {
    int line = 1;
    int column = 1;
    int length = 0;
};

enum class Severity { error, warning };

struct ParseDiagnostic {
    SourceSpan span;
    std::string message;
    Severity severity = Severity::error;
};

template <typename T>
struct Parsed {
    std::optional<T> value;
    std::vector<ParseDiagnostic> diagnostics;

    bool ok() const { return value.has_value(); }

    // First error message, for terse contexts.
    std::string first_error() const {
        for (const auto& d : diagnostics) {
            if (d.severity == Severity::error) return d.message;
        }
        return {};
    }
};

Parsed<ItemPredicate> parse_item_predicate(std::string_view text);
Parsed<GroupConstraint> parse_group_constraint(std::string_view text);

// Canonical text; reparsing it yields a structurally identical constraint.
std::string render(const ItemPredicate& pred);
std::string render(const ValuePredicate& pred);
std::string render(const AggregationPredicate& pred);
std::string render(const CompositeConstraint& constraint);
std::string render(const GroupConstraint& constraint);

}  // namespace groupform::dsl
