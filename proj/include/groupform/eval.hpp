#pragma once

// Constraint evaluation over items and groups.
//
// Three tiers: a user's item predicates gate eligibility; a user's group
// constraints bind the group they would join; the company's group
// constraints bind the group as a whole. All evaluation is pure and
// deterministic, so anything here may be called concurrently.
//
// Absent attributes make a predicate unsatisfied, never raise. A kind
// mismatch between a present attribute and a constraint literal raises
// EvalError; dataset validation surfaces those before solving.

#include <string>
#include <vector>

#include "groupform/attribute.hpp"
#include "groupform/constraint.hpp"

namespace groupform {

// Groups are evaluated through views into the population's records.
using MemberList = std::vector<const AttributeRecord*>;

struct EvalOptions {
    // When set, a user's value predicates also bind the user themself
    // instead of only the other members.
    bool include_self = false;
};

// True iff every item predicate of the profile is matched by an item
// attribute of the same name whose value satisfies it.
bool eval_user_to_item(const ConstraintProfile& profile, const AttributeRecord& item);

// Single item predicate against one record; shared by the item filter and
// the verdict table.
bool item_predicate_holds(const ItemPredicate& pred, const AttributeRecord& item);

struct ValueEval {
    bool satisfied = false;
    Decimal satisfying_fraction;
};

// Satisfied iff every member defines the attribute and passes the predicate.
// members must be non-empty.
ValueEval eval_value_predicate(const ValuePredicate& pred, const MemberList& members);

// Aggregate over the members that define the attribute, compared against the
// threshold. count counts defining members; the other aggregators require
// numeric values and are unsatisfied when nobody defines the attribute.
bool eval_aggregation_predicate(const AggregationPredicate& pred, const MemberList& members);

struct CompositeEval {
    bool satisfied = false;
    Decimal grade;
};

// Satisfied iff some subgroup of exactly min_count members passes every
// conjunct. Value-only composites grade as qualifying/min_count capped at 1;
// composites with aggregation conjuncts grade 1 or 0.
//
// Single-aggregation composites with a monotone aggregator/operator pair take
// an extremal-subset shortcut; everything else enumerates size-l subsets,
// which is intended for desk-scale groups.
CompositeEval eval_composite(const CompositeConstraint& constraint, const MemberList& members);

// Verdicts for every group constraint of subject's profile. Value predicates
// range over the other members (or the whole group under include_self);
// aggregation and composite constraints always see the whole group. subject
// must be a member of group.
SatisfactionReport eval_user_to_group(const ConstraintProfile& profile,
                                      const std::string& subject, const MemberList& group,
                                      const EvalOptions& opts = {});

// Company-side evaluation: identical semantics with no subject exclusion.
// The company profile must carry no item constraints.
SatisfactionReport eval_group_to_group(const ConstraintProfile& company,
                                       const MemberList& group);

// Resolves ids against the population, rejecting empty groups, duplicates
// and unknown ids.
MemberList resolve_members(const Population& users, const std::vector<std::string>& group);

// Full satisfiability: the item passes every member's item constraints,
// every member's group constraints hold, and the company's hold.
bool is_satisfiable_group(const AttributeRecord& item, const std::vector<std::string>& group,
                          const ProfileMap& profiles, const ConstraintProfile& company,
                          const Population& users, const EvalOptions& opts = {});

struct GroupAudit {
    SatisfactionReport report;
    bool satisfiable = false;
};

// The complete three-tier verdict table for a group, without early exit.
// satisfiable here always agrees with is_satisfiable_group.
GroupAudit evaluate_group_report(const AttributeRecord& item,
                                 const std::vector<std::string>& group,
                                 const ProfileMap& profiles, const ConstraintProfile& company,
                                 const Population& users, const EvalOptions& opts = {});

}  // namespace groupform
