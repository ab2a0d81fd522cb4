#include "groupform/attribute.hpp"

namespace groupform {

std::string_view kind_name(Kind kind) {
    switch (kind) {
        case Kind::text: return "text";
        case Kind::number: return "number";
        case Kind::date: return "date";
    }
    return "?";
}

std::string AttributeValue::str() const {
    switch (kind()) {
        case Kind::text: return as_text();
        case Kind::number: return as_number().str();
        case Kind::date: return as_date().str();
    }
    return {};
}

std::string_view op_symbol(CmpOp op) {
    switch (op) {
        case CmpOp::eq: return "=";
        case CmpOp::neq: return "!=";
        case CmpOp::lt: return "<";
        case CmpOp::leq: return "<=";
        case CmpOp::gt: return ">";
        case CmpOp::geq: return ">=";
        case CmpOp::substring: return "substring";
    }
    return "?";
}

bool op_applies_to(CmpOp op, Kind kind) {
    switch (op) {
        case CmpOp::eq:
        case CmpOp::neq:
            return true;
        case CmpOp::lt:
        case CmpOp::leq:
        case CmpOp::gt:
        case CmpOp::geq:
            return kind == Kind::number || kind == Kind::date;
        case CmpOp::substring:
            return kind == Kind::text;
    }
    return false;
}

bool op_allowed_in_aggregation(CmpOp op) {
    return op == CmpOp::eq || op == CmpOp::lt || op == CmpOp::leq || op == CmpOp::gt ||
           op == CmpOp::geq;
}

namespace {

template <typename T>
bool ordered(const T& a, CmpOp op, const T& b) {
    switch (op) {
        case CmpOp::eq: return a == b;
        case CmpOp::neq: return a != b;
        case CmpOp::lt: return a < b;
        case CmpOp::leq: return a <= b;
        case CmpOp::gt: return a > b;
        case CmpOp::geq: return a >= b;
        default: break;
    }
    throw EvalError("operator not orderable");
}

}  // namespace

bool compare(const AttributeValue& lhs, CmpOp op, const AttributeValue& rhs) {
    if (lhs.kind() != rhs.kind()) {
        throw EvalError(std::string("kind mismatch: ") + std::string(kind_name(lhs.kind())) +
                        " vs " + std::string(kind_name(rhs.kind())));
    }
    if (!op_applies_to(op, lhs.kind())) {
        throw EvalError(std::string("operator '") + std::string(op_symbol(op)) +
                        "' does not apply to " + std::string(kind_name(lhs.kind())) +
                        " operands");
    }
    switch (lhs.kind()) {
        case Kind::text: {
            const std::string& a = lhs.as_text();
            const std::string& b = rhs.as_text();
            if (op == CmpOp::eq) return a == b;
            if (op == CmpOp::neq) return a != b;
            return a.find(b) != std::string::npos;  // substring: lhs contains rhs
        }
        case Kind::number:
            return ordered(lhs.as_number(), op, rhs.as_number());
        case Kind::date:
            return ordered(lhs.as_date(), op, rhs.as_date());
    }
    throw EvalError("unreachable kind");
}

std::optional<AttributeValue> attribute_lookup(const AttributeRecord& record,
                                               std::string_view name) {
    auto it = record.attributes.find(std::string(name));
    if (it == record.attributes.end()) return std::nullopt;
    return it->second;
}

void Population::add(AttributeRecord record) {
    if (record.entity_id.empty()) throw ContractError("record with empty entity id");
    if (index_.count(record.entity_id) != 0) {
        throw ContractError("duplicate entity id '" + record.entity_id + "'");
    }
    index_.emplace(record.entity_id, records_.size());
    records_.push_back(std::move(record));
}

const AttributeRecord* Population::find(std::string_view id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return nullptr;
    return &records_[it->second];
}

}  // namespace groupform
