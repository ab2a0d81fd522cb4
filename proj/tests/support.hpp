#pragma once

// Shared fixture builders and independent oracles for the test suites.
//
// The oracles deliberately re-derive expected results from first principles
// (plain enumeration, integer arithmetic) instead of calling the production
// evaluation paths they are checking.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "groupform/dataset.hpp"
#include "groupform/eval.hpp"
#include "groupform/runner.hpp"
#include "groupform/solver.hpp"

namespace testsupport {

using namespace groupform;

inline AttributeRecord user_with_age(const std::string& id, int age) {
    AttributeRecord r;
    r.entity_id = id;
    r.attributes.emplace("age", AttributeValue::number(Decimal::from_int(age)));
    return r;
}

inline MemberList view(const std::vector<AttributeRecord>& records) {
    MemberList out;
    out.reserve(records.size());
    for (const auto& r : records) out.push_back(&r);
    return out;
}

inline std::vector<AttributeRecord> users_with_ages(const std::vector<int>& ages) {
    std::vector<AttributeRecord> out;
    for (std::size_t i = 0; i < ages.size(); ++i) {
        out.push_back(user_with_age("m" + std::to_string(i + 1), ages[i]));
    }
    return out;
}

// Visits every size-l index subset of [0, n); returns false when the visitor
// never returned true.
template <typename Visitor>
bool for_each_subset(std::size_t n, std::size_t l, Visitor&& visit) {
    if (l > n) return false;
    std::vector<std::size_t> idx(l);
    for (std::size_t i = 0; i < l; ++i) idx[i] = i;
    while (true) {
        if (visit(idx)) return true;
        std::size_t i = l;
        bool advanced = false;
        while (i > 0) {
            --i;
            if (idx[i] != i + n - l) {
                ++idx[i];
                for (std::size_t j = i + 1; j < l; ++j) idx[j] = idx[j - 1] + 1;
                advanced = true;
                break;
            }
        }
        if (!advanced) return false;
    }
}

// Independent composite-constraint oracle: exhaustive enumeration of all
// size-l subsets, evaluating each conjunct with plain integer arithmetic over
// decimal units.
inline bool composite_oracle(const CompositeConstraint& constraint, const MemberList& members) {
    const auto l = static_cast<std::size_t>(constraint.min_count);
    if (members.size() < l) return false;
    return for_each_subset(members.size(), l, [&](const std::vector<std::size_t>& idx) {
        for (const auto& conjunct : constraint.conjuncts) {
            if (const auto* vp = std::get_if<ValuePredicate>(&conjunct)) {
                for (std::size_t i : idx) {
                    auto attr = attribute_lookup(*members[i], vp->attribute);
                    if (!attr || !compare(*attr, vp->op, vp->value)) return false;
                }
            } else {
                const auto& ap = std::get<AggregationPredicate>(conjunct);
                std::vector<std::int64_t> units;
                std::size_t defined = 0;
                for (std::size_t i : idx) {
                    auto attr = attribute_lookup(*members[i], ap.attribute);
                    if (!attr) continue;
                    ++defined;
                    if (ap.aggregator != Aggregator::count) {
                        units.push_back(attr->as_number().units());
                    }
                }
                __int128 lhs = 0;
                __int128 rhs = ap.value.units();
                if (ap.aggregator == Aggregator::count) {
                    lhs = static_cast<__int128>(defined) * Decimal::kScale;
                } else {
                    if (units.empty()) return false;
                    switch (ap.aggregator) {
                        case Aggregator::avg: {
                            __int128 sum = 0;
                            for (auto u : units) sum += u;
                            lhs = sum;
                            rhs = rhs * static_cast<__int128>(units.size());
                            break;
                        }
                        case Aggregator::sum: {
                            __int128 sum = 0;
                            for (auto u : units) sum += u;
                            lhs = sum;
                            break;
                        }
                        case Aggregator::min:
                            lhs = *std::min_element(units.begin(), units.end());
                            break;
                        case Aggregator::max:
                            lhs = *std::max_element(units.begin(), units.end());
                            break;
                        case Aggregator::count:
                            break;
                    }
                }
                bool holds = false;
                switch (ap.op) {
                    case CmpOp::eq: holds = lhs == rhs; break;
                    case CmpOp::lt: holds = lhs < rhs; break;
                    case CmpOp::leq: holds = lhs <= rhs; break;
                    case CmpOp::gt: holds = lhs > rhs; break;
                    case CmpOp::geq: holds = lhs >= rhs; break;
                    default: return false;
                }
                if (!holds) return false;
            }
        }
        return true;
    });
}

// Random constraint/group material for the property suites. Members draw a
// numeric "age" (sometimes absent), a numeric "income" and a text "tier", so
// generated predicates hit both present and absent attributes.
class ConstraintGen {
public:
    explicit ConstraintGen(std::uint64_t seed) : rng_(seed) {}

    std::uint64_t below(std::uint64_t n) { return rng_() % n; }

    std::vector<AttributeRecord> members(std::size_t max_size, std::size_t min_size = 1) {
        std::size_t n = min_size + below(max_size - min_size + 1);
        std::vector<AttributeRecord> out;
        for (std::size_t i = 0; i < n; ++i) {
            AttributeRecord r;
            r.entity_id = "g" + std::to_string(i + 1);
            if (below(10) != 0) {  // age absent 10% of the time
                r.attributes.emplace("age", AttributeValue::number(Decimal::from_int(
                                                static_cast<std::int64_t>(below(60)) + 15)));
            }
            r.attributes.emplace("income",
                                 AttributeValue::number(Decimal::from_int(
                                     static_cast<std::int64_t>(below(90)) * 1000 + 10000)));
            r.attributes.emplace(
                "tier", AttributeValue::text(below(2) == 0 ? "silver" : "gold"));
            out.push_back(std::move(r));
        }
        return out;
    }

    ValuePredicate value_pred() {
        switch (below(4)) {
            case 0:
                return {"age", below(2) == 0 ? CmpOp::gt : CmpOp::leq,
                        AttributeValue::number(Decimal::from_int(
                            static_cast<std::int64_t>(below(50)) + 18))};
            case 1:
                return {"tier", below(2) == 0 ? CmpOp::eq : CmpOp::neq,
                        AttributeValue::text(below(2) == 0 ? "silver" : "gold")};
            case 2:
                return {"income", CmpOp::geq,
                        AttributeValue::number(Decimal::from_int(
                            static_cast<std::int64_t>(below(80)) * 1000 + 10000))};
            default:
                return {"age", CmpOp::lt,
                        AttributeValue::number(Decimal::from_int(
                            static_cast<std::int64_t>(below(50)) + 25))};
        }
    }

    AggregationPredicate agg_pred(Aggregator agg, CmpOp op) {
        AggregationPredicate pred;
        pred.aggregator = agg;
        pred.op = op;
        if (agg == Aggregator::count) {
            pred.attribute = below(2) == 0 ? "age" : "tier";
            pred.value = Decimal::from_int(static_cast<std::int64_t>(below(6)));
        } else if (below(4) == 0) {
            pred.attribute = "income";
            pred.value = Decimal::from_int(
                (static_cast<std::int64_t>(below(150)) + 20) * 1000);
        } else {
            pred.attribute = "age";
            // fractional thresholds probe the exact avg comparison
            pred.value = Decimal::from_fraction(
                static_cast<std::int64_t>(below(240)) + 60, 4);  // 15.0 .. 74.75
        }
        return pred;
    }

    AggregationPredicate agg_pred() {
        static constexpr Aggregator kAggs[] = {Aggregator::avg, Aggregator::sum,
                                               Aggregator::min, Aggregator::max,
                                               Aggregator::count};
        static constexpr CmpOp kOps[] = {CmpOp::eq, CmpOp::lt, CmpOp::leq, CmpOp::gt,
                                         CmpOp::geq};
        return agg_pred(kAggs[below(5)], kOps[below(5)]);
    }

    CompositeConstraint composite(int max_count = 5) {
        CompositeConstraint c;
        c.min_count = 1 + static_cast<int>(below(static_cast<std::uint64_t>(max_count)));
        switch (below(3)) {
            case 0:
                c.conjuncts.emplace_back(value_pred());
                break;
            case 1:
                c.conjuncts.emplace_back(agg_pred());
                break;
            default:
                c.conjuncts.emplace_back(value_pred());
                c.conjuncts.emplace_back(below(2) == 0 ? Conjunct(value_pred())
                                                       : Conjunct(agg_pred()));
                break;
        }
        return c;
    }

private:
    std::mt19937_64 rng_;
};

struct NaiveBest {
    std::vector<std::string> group;
    Decimal total;
};

// Independent exact-solver oracle: enumerate all k-subsets of the users the
// item accepts, audit each with check_group, keep the best score with
// lexicographic tie-break.
inline std::optional<NaiveBest> naive_exact(const Dataset& dataset, int k) {
    std::vector<std::string> eligible;
    for (const auto& user : dataset.instance.users) {
        if (eval_user_to_item(profile_for(dataset.instance.profiles, user.entity_id),
                              dataset.instance.item)) {
            eligible.push_back(user.entity_id);
        }
    }
    std::sort(eligible.begin(), eligible.end());
    std::optional<NaiveBest> best;
    for_each_subset(eligible.size(), static_cast<std::size_t>(k),
                    [&](const std::vector<std::size_t>& idx) {
                        std::vector<std::string> ids;
                        for (std::size_t i : idx) ids.push_back(eligible[i]);
                        if (!check_group(dataset, ids).satisfiable) return false;
                        Decimal total;
                        for (const auto& id : ids) {
                            total += dataset.instance.scores.score_of(
                                id, dataset.instance.item.entity_id);
                        }
                        if (!best || total > best->total) best = NaiveBest{ids, total};
                        return false;  // keep enumerating
                    });
    return best;
}

}  // namespace testsupport
