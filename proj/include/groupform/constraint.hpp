#pragma once

// The three constraint tiers: user-to-item predicates, user-to-group
// constraints (value / aggregation / composite) and the company's
// group-to-group constraints, which share the user-to-group shape.

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "groupform/attribute.hpp"
#include "groupform/decimal.hpp"

namespace groupform {

// Predicate an item must satisfy for the owning user to be eligible.
struct ItemPredicate {
    std::string attribute;
    CmpOp op = CmpOp::eq;
    AttributeValue value = AttributeValue::number(Decimal{});

    friend bool operator==(const ItemPredicate&, const ItemPredicate&) = default;
};

// Member-wise predicate over group members' attributes.
struct ValuePredicate {
    std::string attribute;
    CmpOp op = CmpOp::eq;
    AttributeValue value = AttributeValue::number(Decimal{});

    friend bool operator==(const ValuePredicate&, const ValuePredicate&) = default;
};

enum class Aggregator { avg, sum, min, max, count };

std::string_view aggregator_name(Aggregator agg);

// Threshold on an aggregate of a member attribute over the group. The
// operator set excludes neq and substring.
struct AggregationPredicate {
    Aggregator aggregator = Aggregator::avg;
    std::string attribute;
    CmpOp op = CmpOp::eq;
    Decimal value;

    friend bool operator==(const AggregationPredicate&, const AggregationPredicate&) = default;
};

using Conjunct = std::variant<ValuePredicate, AggregationPredicate>;

// "include at least l users with C1 and C2 and ...": some size-l subgroup
// must satisfy every conjunct.
struct CompositeConstraint {
    int min_count = 1;
    std::vector<Conjunct> conjuncts;

    friend bool operator==(const CompositeConstraint&, const CompositeConstraint&) = default;
};

using GroupConstraint = std::variant<ValuePredicate, AggregationPredicate, CompositeConstraint>;

enum class GroupConstraintKind { value, aggregation, composite };

GroupConstraintKind group_constraint_kind(const GroupConstraint& constraint);

// All constraints owned by one user, or by the company. The company profile
// carries no item constraints.
struct ConstraintProfile {
    std::string owner;
    std::vector<ItemPredicate> item_constraints;
    std::vector<GroupConstraint> group_constraints;

    bool empty() const { return item_constraints.empty() && group_constraints.empty(); }

    friend bool operator==(const ConstraintProfile&, const ConstraintProfile&) = default;
};

using ProfileMap = std::map<std::string, ConstraintProfile>;

// Profile for id, or an empty profile when the user never expressed one.
ConstraintProfile profile_for(const ProfileMap& profiles, const std::string& id);

inline constexpr std::string_view kCompanyOwner = "company";

enum class ConstraintTier { user_to_item, user_to_group, group_to_group };

std::string_view tier_name(ConstraintTier tier);

// One evaluated constraint: satisfied iff grade == 1; grade lies in [0, 1].
struct ConstraintVerdict {
    ConstraintTier tier = ConstraintTier::user_to_group;
    std::string owner;
    std::string constraint;  // canonical rendering, the constraint reference
    bool satisfied = false;
    Decimal grade;
};

struct SatisfactionReport {
    std::vector<ConstraintVerdict> verdicts;

    int satisfied_count() const;
    Decimal graded_total() const;
    bool all_satisfied() const;

    void append(const SatisfactionReport& other) {
        verdicts.insert(verdicts.end(), other.verdicts.begin(), other.verdicts.end());
    }
};

}  // namespace groupform
