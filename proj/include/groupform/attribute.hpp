#pragma once

// Attribute records describe items and users: a finite map from attribute
// name to a typed value (text, number or date). Records are immutable once
// built and every operation here is pure, so concurrent use needs no
// synchronization.

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "groupform/date.hpp"
#include "groupform/decimal.hpp"
#include "groupform/errors.hpp"

namespace groupform {

enum class Kind { text, number, date };

std::string_view kind_name(Kind kind);

class AttributeValue {
public:
    static AttributeValue text(std::string value) { return AttributeValue(std::move(value)); }
    static AttributeValue number(Decimal value) { return AttributeValue(value); }
    static AttributeValue date(Date value) { return AttributeValue(value); }

    Kind kind() const {
        switch (payload_.index()) {
            case 0: return Kind::text;
            case 1: return Kind::number;
            default: return Kind::date;
        }
    }

    const std::string& as_text() const { return std::get<std::string>(payload_); }
    Decimal as_number() const { return std::get<Decimal>(payload_); }
    Date as_date() const { return std::get<Date>(payload_); }

    // Display form; text comes back unquoted.
    std::string str() const;

    friend bool operator==(const AttributeValue&, const AttributeValue&) = default;

private:
    explicit AttributeValue(std::string v) : payload_(std::move(v)) {}
    explicit AttributeValue(Decimal v) : payload_(v) {}
    explicit AttributeValue(Date v) : payload_(v) {}

    std::variant<std::string, Decimal, Date> payload_;
};

enum class CmpOp { eq, neq, lt, leq, gt, geq, substring };

std::string_view op_symbol(CmpOp op);

// Ordering operators apply to numbers and dates, substring to text only,
// equality to any same-kind pair.
bool op_applies_to(CmpOp op, Kind kind);

// Operators allowed on aggregates: eq and the four orderings.
bool op_allowed_in_aggregation(CmpOp op);

// Truth of `lhs op rhs`. Numbers compare numerically, dates chronologically,
// text by exact equality; substring tests that lhs contains rhs. Mismatched
// kinds or an inapplicable operator raise EvalError.
bool compare(const AttributeValue& lhs, CmpOp op, const AttributeValue& rhs);

struct AttributeRecord {
    std::string entity_id;
    std::map<std::string, AttributeValue> attributes;
};

std::optional<AttributeValue> attribute_lookup(const AttributeRecord& record,
                                               std::string_view name);

// A population of user records with unique, non-empty ids.
class Population {
public:
    Population() = default;

    // Throws ContractError on an empty or duplicate id.
    void add(AttributeRecord record);

    const AttributeRecord* find(std::string_view id) const;

    std::size_t size() const { return records_.size(); }
    bool empty() const { return records_.empty(); }
    const std::vector<AttributeRecord>& records() const { return records_; }

    auto begin() const { return records_.begin(); }
    auto end() const { return records_.end(); }

private:
    std::vector<AttributeRecord> records_;
    std::map<std::string, std::size_t, std::less<>> index_;
};

}  // namespace groupform
