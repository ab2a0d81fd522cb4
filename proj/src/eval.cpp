#include "groupform/eval.hpp"

#include <algorithm>
#include <set>

#include "groupform/dsl.hpp"

namespace groupform {

namespace {

using int128 = __int128;

// Wraps predicate-level evaluation so kind-mismatch errors name the
// constraint and the entity they were hit on.
[[noreturn]] void rethrow_with_context(const EvalError& e, const std::string& constraint,
                                       const std::string& entity) {
    throw EvalError("constraint '" + constraint + "' on '" + entity + "': " + e.what());
}

template <typename Pred>
bool predicate_holds_on(const Pred& pred, const AttributeRecord& record) {
    auto it = record.attributes.find(pred.attribute);
    if (it == record.attributes.end()) return false;  // absent attribute: unsatisfied
    try {
        return compare(it->second, pred.op, pred.value);
    } catch (const EvalError& e) {
        rethrow_with_context(e, pred.attribute + " " + std::string(op_symbol(pred.op)) + " " +
                                    pred.value.str(),
                             record.entity_id);
    }
}

bool compare_units(int128 lhs, CmpOp op, int128 rhs) {
    switch (op) {
        case CmpOp::eq: return lhs == rhs;
        case CmpOp::lt: return lhs < rhs;
        case CmpOp::leq: return lhs <= rhs;
        case CmpOp::gt: return lhs > rhs;
        case CmpOp::geq: return lhs >= rhs;
        default: break;
    }
    throw EvalError("operator not allowed on aggregates");
}

// Numeric values of the attribute across members; throws when a member
// defines the attribute with a non-numeric kind.
std::vector<Decimal> defined_numeric_values(const std::string& attribute,
                                            const MemberList& members,
                                            const AggregationPredicate& pred) {
    std::vector<Decimal> values;
    values.reserve(members.size());
    for (const auto* m : members) {
        auto it = m->attributes.find(attribute);
        if (it == m->attributes.end()) continue;
        if (it->second.kind() != Kind::number) {
            throw EvalError("constraint '" + dsl::render(pred) + "' on '" + m->entity_id +
                            "': aggregator requires number, attribute '" + attribute + "' is " +
                            std::string(kind_name(it->second.kind())));
        }
        values.push_back(it->second.as_number());
    }
    return values;
}

std::size_t count_defined(const std::string& attribute, const MemberList& members) {
    std::size_t n = 0;
    for (const auto* m : members) n += m->attributes.count(attribute);
    return n;
}

int128 sum_units(const std::vector<Decimal>& values) {
    int128 total = 0;
    for (Decimal v : values) total += v.units();
    return total;
}

// Visits every size-l index subset of [0, n) in lexicographic order until the
// visitor returns true.
template <typename Visitor>
bool any_subset(std::size_t n, std::size_t l, Visitor&& visit) {
    if (l > n) return false;
    std::vector<std::size_t> idx(l);
    for (std::size_t i = 0; i < l; ++i) idx[i] = i;
    while (true) {
        if (visit(idx)) return true;
        // advance to the next combination
        std::size_t i = l;
        while (i > 0) {
            --i;
            if (idx[i] != i + n - l) {
                ++idx[i];
                for (std::size_t j = i + 1; j < l; ++j) idx[j] = idx[j - 1] + 1;
                break;
            }
            if (i == 0) return false;
        }
        if (l == 0) return false;
    }
}

bool monotone_fast_path_applies(const AggregationPredicate& pred, const MemberList& members) {
    const bool upward = pred.op == CmpOp::gt || pred.op == CmpOp::geq;
    const bool downward = pred.op == CmpOp::lt || pred.op == CmpOp::leq;
    switch (pred.aggregator) {
        case Aggregator::count:
            return upward || downward;
        case Aggregator::avg:
        case Aggregator::sum:
            // The extremal pick is only valid when no member can be swapped
            // for one that lacks the attribute.
            return (upward || downward) &&
                   count_defined(pred.attribute, members) == members.size();
        case Aggregator::max:
            // Upward: include the global max, padding is harmless. Downward:
            // the l smallest values, valid only with everyone defining.
            return upward ||
                   (downward && count_defined(pred.attribute, members) == members.size());
        case Aggregator::min:
            return downward ||
                   (upward && count_defined(pred.attribute, members) == members.size());
    }
    return false;
}

// Existence of a size-l subset satisfying the single aggregation predicate,
// decided by checking the extremal subset only. Callers must have verified
// monotone_fast_path_applies.
bool extremal_subset_satisfies(const AggregationPredicate& pred, const MemberList& members,
                               std::size_t l) {
    switch (pred.aggregator) {
        case Aggregator::count: {
            std::size_t defined = count_defined(pred.attribute, members);
            std::size_t undefined = members.size() - defined;
            // Achievable counts over exactly-l subsets form the contiguous
            // range [l - undefined, min(l, defined)].
            std::size_t extreme = (pred.op == CmpOp::gt || pred.op == CmpOp::geq)
                                      ? std::min(l, defined)
                                      : (l > undefined ? l - undefined : 0);
            return compare_units(static_cast<int128>(Decimal::from_int(
                                     static_cast<std::int64_t>(extreme)).units()),
                                 pred.op, pred.value.units());
        }
        case Aggregator::max: {
            std::vector<Decimal> values = defined_numeric_values(pred.attribute, members, pred);
            if (values.empty()) return false;
            Decimal best;
            if (pred.op == CmpOp::gt || pred.op == CmpOp::geq) {
                best = *std::max_element(values.begin(), values.end());
            } else {
                // smallest achievable max over exactly-l subsets: the l-th
                // smallest value (all members define the attribute here)
                std::sort(values.begin(), values.end());
                best = values[l - 1];
            }
            return compare_units(best.units(), pred.op, pred.value.units());
        }
        case Aggregator::min: {
            std::vector<Decimal> values = defined_numeric_values(pred.attribute, members, pred);
            if (values.empty()) return false;
            Decimal best;
            if (pred.op == CmpOp::lt || pred.op == CmpOp::leq) {
                best = *std::min_element(values.begin(), values.end());
            } else {
                // largest achievable min: the l-th largest value
                std::sort(values.begin(), values.end());
                best = values[values.size() - l];
            }
            return compare_units(best.units(), pred.op, pred.value.units());
        }
        case Aggregator::avg:
        case Aggregator::sum: {
            std::vector<Decimal> values = defined_numeric_values(pred.attribute, members, pred);
            const bool want_large = pred.op == CmpOp::gt || pred.op == CmpOp::geq;
            std::sort(values.begin(), values.end());
            int128 total = 0;
            if (want_large) {
                for (std::size_t i = values.size() - l; i < values.size(); ++i) {
                    total += values[i].units();
                }
            } else {
                for (std::size_t i = 0; i < l; ++i) total += values[i].units();
            }
            int128 rhs = pred.aggregator == Aggregator::sum
                             ? static_cast<int128>(pred.value.units())
                             : static_cast<int128>(pred.value.units()) * static_cast<int128>(l);
            return compare_units(total, pred.op, rhs);
        }
    }
    return false;
}

}  // namespace

bool item_predicate_holds(const ItemPredicate& pred, const AttributeRecord& item) {
    return predicate_holds_on(pred, item);
}

bool eval_user_to_item(const ConstraintProfile& profile, const AttributeRecord& item) {
    for (const auto& pred : profile.item_constraints) {
        if (!item_predicate_holds(pred, item)) return false;
    }
    return true;
}

ValueEval eval_value_predicate(const ValuePredicate& pred, const MemberList& members) {
    if (members.empty()) throw ContractError("value predicate over an empty member list");
    std::size_t satisfying = 0;
    for (const auto* m : members) {
        if (predicate_holds_on(pred, *m)) ++satisfying;
    }
    ValueEval out;
    out.satisfied = satisfying == members.size();
    out.satisfying_fraction = Decimal::from_fraction(static_cast<std::int64_t>(satisfying),
                                                     static_cast<std::int64_t>(members.size()));
    return out;
}

bool eval_aggregation_predicate(const AggregationPredicate& pred, const MemberList& members) {
    if (members.empty()) throw ContractError("aggregation predicate over an empty member list");
    if (pred.aggregator == Aggregator::count) {
        auto n = static_cast<std::int64_t>(count_defined(pred.attribute, members));
        return compare_units(Decimal::from_int(n).units(), pred.op, pred.value.units());
    }
    std::vector<Decimal> values = defined_numeric_values(pred.attribute, members, pred);
    if (values.empty()) return false;  // nobody defines the attribute
    switch (pred.aggregator) {
        case Aggregator::avg:
            // sum/n op v  <=>  sum op v*n, exactly
            return compare_units(sum_units(values), pred.op,
                                 static_cast<int128>(pred.value.units()) *
                                     static_cast<int128>(values.size()));
        case Aggregator::sum:
            return compare_units(sum_units(values), pred.op, pred.value.units());
        case Aggregator::min:
            return compare_units(std::min_element(values.begin(), values.end())->units(),
                                 pred.op, pred.value.units());
        case Aggregator::max:
            return compare_units(std::max_element(values.begin(), values.end())->units(),
                                 pred.op, pred.value.units());
        case Aggregator::count:
            break;
    }
    throw EvalError("unreachable aggregator");
}

CompositeEval eval_composite(const CompositeConstraint& constraint, const MemberList& members) {
    if (members.empty()) throw ContractError("composite constraint over an empty member list");
    if (constraint.min_count < 1) throw ContractError("composite min_count must be >= 1");
    const auto l = static_cast<std::size_t>(constraint.min_count);

    std::vector<const ValuePredicate*> value_conjuncts;
    std::vector<const AggregationPredicate*> agg_conjuncts;
    for (const auto& conjunct : constraint.conjuncts) {
        if (const auto* v = std::get_if<ValuePredicate>(&conjunct)) {
            value_conjuncts.push_back(v);
        } else {
            agg_conjuncts.push_back(&std::get<AggregationPredicate>(conjunct));
        }
    }

    // Members qualifying for the witness subgroup: those passing every value
    // conjunct. Any witness is a subset of this pool.
    MemberList pool;
    for (const auto* m : members) {
        bool qualifies = true;
        for (const auto* v : value_conjuncts) {
            if (!predicate_holds_on(*v, *m)) {
                qualifies = false;
                break;
            }
        }
        if (qualifies) pool.push_back(m);
    }

    if (agg_conjuncts.empty()) {
        CompositeEval out;
        out.satisfied = pool.size() >= l;
        out.grade = out.satisfied
                        ? kDecimalOne
                        : Decimal::from_fraction(static_cast<std::int64_t>(pool.size()),
                                                 static_cast<std::int64_t>(l));
        return out;
    }

    bool satisfied = false;
    if (pool.size() >= l) {
        if (value_conjuncts.empty() && agg_conjuncts.size() == 1 &&
            monotone_fast_path_applies(*agg_conjuncts[0], pool)) {
            satisfied = extremal_subset_satisfies(*agg_conjuncts[0], pool, l);
        } else {
            satisfied = any_subset(pool.size(), l, [&](const std::vector<std::size_t>& idx) {
                MemberList subset;
                subset.reserve(idx.size());
                for (std::size_t i : idx) subset.push_back(pool[i]);
                for (const auto* a : agg_conjuncts) {
                    if (!eval_aggregation_predicate(*a, subset)) return false;
                }
                return true;
            });
        }
    }
    return {satisfied, satisfied ? kDecimalOne : kDecimalZero};
}

namespace {

ConstraintVerdict verdict_for(const GroupConstraint& gc, ConstraintTier tier,
                              const std::string& owner, const MemberList& all,
                              const MemberList& value_targets) {
    ConstraintVerdict v;
    v.tier = tier;
    v.owner = owner;
    v.constraint = dsl::render(gc);
    if (const auto* value_pred = std::get_if<ValuePredicate>(&gc)) {
        if (value_targets.empty()) {
            v.satisfied = true;  // vacuous: no other members to constrain
            v.grade = kDecimalOne;
        } else {
            ValueEval e = eval_value_predicate(*value_pred, value_targets);
            v.satisfied = e.satisfied;
            v.grade = e.satisfying_fraction;
        }
    } else if (const auto* agg = std::get_if<AggregationPredicate>(&gc)) {
        v.satisfied = eval_aggregation_predicate(*agg, all);
        v.grade = v.satisfied ? kDecimalOne : kDecimalZero;
    } else {
        CompositeEval e = eval_composite(std::get<CompositeConstraint>(gc), all);
        v.satisfied = e.satisfied;
        v.grade = e.grade;
    }
    return v;
}

}  // namespace

SatisfactionReport eval_user_to_group(const ConstraintProfile& profile,
                                      const std::string& subject, const MemberList& group,
                                      const EvalOptions& opts) {
    if (group.empty()) throw ContractError("user-to-group evaluation over an empty group");
    MemberList others;
    others.reserve(group.size());
    bool found = false;
    for (const auto* m : group) {
        if (m->entity_id == subject) {
            found = true;
        } else {
            others.push_back(m);
        }
    }
    if (!found) throw ContractError("subject '" + subject + "' is not a member of the group");

    const MemberList& value_targets = opts.include_self ? group : others;
    SatisfactionReport report;
    report.verdicts.reserve(profile.group_constraints.size());
    for (const auto& gc : profile.group_constraints) {
        report.verdicts.push_back(
            verdict_for(gc, ConstraintTier::user_to_group, profile.owner, group, value_targets));
    }
    return report;
}

SatisfactionReport eval_group_to_group(const ConstraintProfile& company,
                                       const MemberList& group) {
    if (group.empty()) throw ContractError("group-to-group evaluation over an empty group");
    if (!company.item_constraints.empty()) {
        throw ContractError("company profile must not carry item constraints");
    }
    SatisfactionReport report;
    report.verdicts.reserve(company.group_constraints.size());
    for (const auto& gc : company.group_constraints) {
        report.verdicts.push_back(
            verdict_for(gc, ConstraintTier::group_to_group, company.owner, group, group));
    }
    return report;
}

MemberList resolve_members(const Population& users, const std::vector<std::string>& group) {
    if (group.empty()) throw ContractError("group must be non-empty");
    std::set<std::string> seen;
    MemberList members;
    members.reserve(group.size());
    for (const auto& id : group) {
        if (!seen.insert(id).second) throw ContractError("duplicate member id '" + id + "'");
        const AttributeRecord* record = users.find(id);
        if (record == nullptr) throw ContractError("unknown member id '" + id + "'");
        members.push_back(record);
    }
    return members;
}

bool is_satisfiable_group(const AttributeRecord& item, const std::vector<std::string>& group,
                          const ProfileMap& profiles, const ConstraintProfile& company,
                          const Population& users, const EvalOptions& opts) {
    MemberList members = resolve_members(users, group);
    for (const auto& id : group) {
        if (!eval_user_to_item(profile_for(profiles, id), item)) return false;
    }
    for (const auto& id : group) {
        if (!eval_user_to_group(profile_for(profiles, id), id, members, opts).all_satisfied()) {
            return false;
        }
    }
    return eval_group_to_group(company, members).all_satisfied();
}

GroupAudit evaluate_group_report(const AttributeRecord& item,
                                 const std::vector<std::string>& group,
                                 const ProfileMap& profiles, const ConstraintProfile& company,
                                 const Population& users, const EvalOptions& opts) {
    MemberList members = resolve_members(users, group);
    GroupAudit audit;
    for (const auto& id : group) {
        ConstraintProfile profile = profile_for(profiles, id);
        for (const auto& pred : profile.item_constraints) {
            ConstraintVerdict v;
            v.tier = ConstraintTier::user_to_item;
            v.owner = id;
            v.constraint = dsl::render(pred);
            v.satisfied = item_predicate_holds(pred, item);
            v.grade = v.satisfied ? kDecimalOne : kDecimalZero;
            audit.report.verdicts.push_back(std::move(v));
        }
    }
    for (const auto& id : group) {
        audit.report.append(
            eval_user_to_group(profile_for(profiles, id), id, members, opts));
    }
    audit.report.append(eval_group_to_group(company, members));
    audit.satisfiable = audit.report.all_satisfied();
    return audit;
}

}  // namespace groupform
