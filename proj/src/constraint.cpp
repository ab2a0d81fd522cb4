#include "groupform/constraint.hpp"

namespace groupform {

std::string_view aggregator_name(Aggregator agg) {
    switch (agg) {
        case Aggregator::avg: return "avg";
        case Aggregator::sum: return "sum";
        case Aggregator::min: return "min";
        case Aggregator::max: return "max";
        case Aggregator::count: return "count";
    }
    return "?";
}

GroupConstraintKind group_constraint_kind(const GroupConstraint& constraint) {
    if (std::holds_alternative<ValuePredicate>(constraint)) return GroupConstraintKind::value;
    if (std::holds_alternative<AggregationPredicate>(constraint)) {
        return GroupConstraintKind::aggregation;
    }
    return GroupConstraintKind::composite;
}

ConstraintProfile profile_for(const ProfileMap& profiles, const std::string& id) {
    auto it = profiles.find(id);
    if (it != profiles.end()) return it->second;
    ConstraintProfile empty;
    empty.owner = id;
    return empty;
}

std::string_view tier_name(ConstraintTier tier) {
    switch (tier) {
        case ConstraintTier::user_to_item: return "user_to_item";
        case ConstraintTier::user_to_group: return "user_to_group";
        case ConstraintTier::group_to_group: return "group_to_group";
    }
    return "?";
}

int SatisfactionReport::satisfied_count() const {
    int n = 0;
    for (const auto& v : verdicts) {
        if (v.satisfied) ++n;
    }
    return n;
}

Decimal SatisfactionReport::graded_total() const {
    Decimal total;
    for (const auto& v : verdicts) total += v.grade;
    return total;
}

bool SatisfactionReport::all_satisfied() const {
    for (const auto& v : verdicts) {
        if (!v.satisfied) return false;
    }
    return true;
}

}  // namespace groupform
