#include "doctest.h"
#include "support.hpp"

using namespace groupform;
using namespace testsupport;

namespace {

AttributeValue num(std::int64_t v) { return AttributeValue::number(Decimal::from_int(v)); }

AttributeRecord gems_item() {
    AttributeRecord item;
    item.entity_id = "gems";
    item.attributes = {
        {"place", AttributeValue::text("Eastern Mediterranean")},
        {"start_date", AttributeValue::date({2012, 7, 16})},
        {"end_date", AttributeValue::date({2012, 7, 24})},
        {"duration", num(8)},
        {"cost", num(900)},
    };
    return item;
}

std::vector<ItemPredicate> alice_item_constraints() {
    return {
        {"place", CmpOp::eq, AttributeValue::text("Eastern Mediterranean")},
        {"start_date", CmpOp::geq, AttributeValue::date({2012, 7, 1})},
        {"end_date", CmpOp::leq, AttributeValue::date({2012, 7, 31})},
        {"duration", CmpOp::lt, num(10)},
        {"cost", CmpOp::leq, num(1000)},
    };
}

AggregationPredicate avg_age_below(std::int64_t limit) {
    return {Aggregator::avg, "age", CmpOp::lt, Decimal::from_int(limit)};
}

}  // namespace

TEST_CASE("item of figure 1 satisfies the constraints of figure 2") {
    ConstraintProfile alice;
    alice.owner = "alice";
    alice.item_constraints = alice_item_constraints();
    CHECK(eval_user_to_item(alice, gems_item()));

    ConstraintProfile unconstrained;
    unconstrained.owner = "nobody";
    CHECK(eval_user_to_item(unconstrained, gems_item()));  // vacuous

    ConstraintProfile strict = alice;
    strict.item_constraints[4] = {"cost", CmpOp::leq, num(800)};
    CHECK_FALSE(eval_user_to_item(strict, gems_item()));

    ConstraintProfile absent;
    absent.owner = "x";
    absent.item_constraints = {{"rating", CmpOp::geq, num(4)}};
    CHECK_FALSE(eval_user_to_item(absent, gems_item()));
}

TEST_CASE("value predicates count satisfying members") {
    ValuePredicate over_thirty{"age", CmpOp::gt, num(30)};

    auto alice_only = users_with_ages({34});
    auto result = eval_value_predicate(over_thirty, view(alice_only));
    CHECK(result.satisfied);
    CHECK(result.satisfying_fraction == kDecimalOne);

    auto alice_scott = users_with_ages({34, 20});
    result = eval_value_predicate(over_thirty, view(alice_scott));
    CHECK_FALSE(result.satisfied);
    CHECK(result.satisfying_fraction == *Decimal::parse("0.5"));

    std::vector<AttributeRecord> ageless(2);
    ageless[0].entity_id = "x1";
    ageless[1].entity_id = "x2";
    result = eval_value_predicate(over_thirty, view(ageless));
    CHECK_FALSE(result.satisfied);
    CHECK(result.satisfying_fraction == kDecimalZero);

    CHECK_THROWS_AS(eval_value_predicate(over_thirty, MemberList{}), ContractError);
}

TEST_CASE("aggregation predicates use exact arithmetic") {
    // independent arithmetic oracle: mean of {34, 20} is 27
    auto pair = users_with_ages({34, 20});
    CHECK((34 + 20) / 2 == 27);
    CHECK_FALSE(eval_aggregation_predicate(avg_age_below(25), view(pair)));

    auto scott = users_with_ages({20});
    CHECK(eval_aggregation_predicate(avg_age_below(25), view(scott)));

    AggregationPredicate count_age{Aggregator::count, "age", CmpOp::geq, Decimal::from_int(1)};
    CHECK(eval_aggregation_predicate(count_age, view(pair)));

    // avg must not flip on representation error: mean of {33, 34} vs 33.5
    auto third = users_with_ages({33, 34});
    AggregationPredicate exactly{Aggregator::avg, "age", CmpOp::eq, *Decimal::parse("33.5")};
    CHECK(eval_aggregation_predicate(exactly, view(third)));
    AggregationPredicate below{Aggregator::avg, "age", CmpOp::lt, *Decimal::parse("33.5")};
    CHECK_FALSE(eval_aggregation_predicate(below, view(third)));

    // nobody defines the attribute -> unsatisfied for value aggregators
    std::vector<AttributeRecord> bare(1);
    bare[0].entity_id = "b";
    CHECK_FALSE(eval_aggregation_predicate(avg_age_below(100), view(bare)));
    // ... but count sees zero defined
    AggregationPredicate count_zero{Aggregator::count, "age", CmpOp::eq, Decimal{}};
    CHECK(eval_aggregation_predicate(count_zero, view(bare)));

    // non-numeric attribute under avg is an evaluation error
    std::vector<AttributeRecord> textual(1);
    textual[0].entity_id = "t";
    textual[0].attributes.emplace("age", AttributeValue::text("thirty"));
    CHECK_THROWS_AS(eval_aggregation_predicate(avg_age_below(100), view(textual)), EvalError);
}

TEST_CASE("composite constraints: witness subgroups and grades") {
    CompositeConstraint ten_over_35;
    ten_over_35.min_count = 10;
    ten_over_35.conjuncts.emplace_back(ValuePredicate{"age", CmpOp::gt, num(35)});

    auto twelve = users_with_ages(std::vector<int>(12, 40));
    auto result = eval_composite(ten_over_35, view(twelve));
    CHECK(result.satisfied);
    CHECK(result.grade == kDecimalOne);

    auto nine = users_with_ages(std::vector<int>(9, 40));
    result = eval_composite(ten_over_35, view(nine));
    CHECK_FALSE(result.satisfied);
    CHECK(result.grade == *Decimal::parse("0.9"));

    CompositeConstraint two_young;
    two_young.min_count = 2;
    two_young.conjuncts.emplace_back(avg_age_below(25));

    // the oracle confirms {20, 28} has mean 24 < 25
    auto trio = users_with_ages({20, 28, 40});
    CHECK(composite_oracle(two_young, view(trio)));
    result = eval_composite(two_young, view(trio));
    CHECK(result.satisfied);
    CHECK(result.grade == kDecimalOne);

    // with ages {20, 30, 40} every pair averages >= 25; oracle says so
    auto stiff = users_with_ages({20, 30, 40});
    CHECK_FALSE(composite_oracle(two_young, view(stiff)));
    CHECK_FALSE(eval_composite(two_young, view(stiff)).satisfied);

    auto loose = users_with_ages({20, 22, 60});
    CHECK(composite_oracle(two_young, view(loose)));
    result = eval_composite(two_young, view(loose));
    CHECK(result.satisfied);
    CHECK(result.grade == kDecimalOne);
}

TEST_CASE("composite smaller than min_count is unsatisfied, not an error") {
    CompositeConstraint c;
    c.min_count = 4;
    c.conjuncts.emplace_back(ValuePredicate{"age", CmpOp::gt, num(0)});
    auto three = users_with_ages({30, 30, 30});
    auto result = eval_composite(c, view(three));
    CHECK_FALSE(result.satisfied);
    CHECK(result.grade == *Decimal::parse("0.75"));  // 3 qualify of the 4 required
}

TEST_CASE("user-to-group evaluation excludes the subject from value predicates") {
    ConstraintProfile scott;
    scott.owner = "scott";
    scott.group_constraints.emplace_back(avg_age_below(25));

    std::vector<AttributeRecord> records;
    records.push_back(user_with_age("scott", 20));
    records.push_back(user_with_age("alice", 34));

    // aggregation runs over the whole group: mean 27, unsatisfied
    auto report = eval_user_to_group(scott, "scott", view(records));
    REQUIRE(report.verdicts.size() == 1);
    CHECK_FALSE(report.verdicts[0].satisfied);
    CHECK(report.verdicts[0].grade == kDecimalZero);

    // a lone member's value predicate is vacuously satisfied
    ConstraintProfile alice;
    alice.owner = "alice";
    alice.group_constraints.emplace_back(ValuePredicate{"age", CmpOp::gt, num(30)});
    std::vector<AttributeRecord> solo;
    solo.push_back(user_with_age("alice", 34));
    report = eval_user_to_group(alice, "alice", view(solo));
    REQUIRE(report.verdicts.size() == 1);
    CHECK(report.verdicts[0].satisfied);
    CHECK(report.verdicts[0].grade == kDecimalOne);

    // empty constraint list -> empty report
    ConstraintProfile silent;
    silent.owner = "scott";
    report = eval_user_to_group(silent, "scott", view(records));
    CHECK(report.verdicts.empty());
    CHECK(report.satisfied_count() == 0);
    CHECK(report.graded_total() == kDecimalZero);

    CHECK_THROWS_AS(eval_user_to_group(scott, "ghost", view(records)), ContractError);
}

TEST_CASE("include_self flips value predicates onto the subject") {
    ConstraintProfile young;
    young.owner = "elder";
    young.group_constraints.emplace_back(ValuePredicate{"age", CmpOp::lt, num(30)});

    std::vector<AttributeRecord> records;
    records.push_back(user_with_age("elder", 60));
    records.push_back(user_with_age("kid", 20));

    auto excluding = eval_user_to_group(young, "elder", view(records));
    CHECK(excluding.verdicts[0].satisfied);  // only the kid is bound

    EvalOptions opts;
    opts.include_self = true;
    auto including = eval_user_to_group(young, "elder", view(records), opts);
    CHECK_FALSE(including.verdicts[0].satisfied);  // the elder now binds too
    CHECK(including.verdicts[0].grade == *Decimal::parse("0.5"));
}

TEST_CASE("group-to-group evaluation covers the company examples") {
    ConstraintProfile company;
    company.owner = "company";

    CompositeConstraint senior;
    senior.min_count = 30;
    senior.conjuncts.emplace_back(
        AggregationPredicate{Aggregator::avg, "age", CmpOp::gt, Decimal::from_int(40)});
    company.group_constraints.emplace_back(senior);

    auto thirty_five = users_with_ages(std::vector<int>(35, 45));
    auto report = eval_group_to_group(company, view(thirty_five));
    REQUIRE(report.verdicts.size() == 1);
    CHECK(report.verdicts[0].satisfied);

    // graduates composite
    ConstraintProfile grads;
    grads.owner = "company";
    CompositeConstraint twenty_grads;
    twenty_grads.min_count = 20;
    twenty_grads.conjuncts.emplace_back(
        ValuePredicate{"education", CmpOp::eq, AttributeValue::text("college graduate")});
    grads.group_constraints.emplace_back(twenty_grads);

    auto make_grads = [](int n) {
        std::vector<AttributeRecord> out;
        for (int i = 0; i < n; ++i) {
            AttributeRecord r;
            r.entity_id = "grad" + std::to_string(i + 1);
            r.attributes.emplace("education", AttributeValue::text("college graduate"));
            out.push_back(std::move(r));
        }
        return out;
    };

    auto twenty_five = make_grads(25);
    report = eval_group_to_group(grads, view(twenty_five));
    CHECK(report.verdicts[0].satisfied);

    auto nineteen = make_grads(19);
    report = eval_group_to_group(grads, view(nineteen));
    CHECK_FALSE(report.verdicts[0].satisfied);
    CHECK(report.verdicts[0].grade == *Decimal::parse("0.95"));

    // company profiles cannot carry item constraints
    ConstraintProfile bad;
    bad.owner = "company";
    bad.item_constraints.push_back({"cost", CmpOp::leq, num(100)});
    CHECK_THROWS_AS(eval_group_to_group(bad, view(twenty_five)), ContractError);
}

namespace {

// Small fixed instance: item, four users, profiles and a company composite.
ProblemInstance small_instance() {
    ProblemInstance instance;
    instance.item = gems_item();
    for (int i = 0; i < 4; ++i) {
        AttributeRecord r = user_with_age("s" + std::to_string(i + 1), 25 + 5 * i);
        r.attributes.emplace("education", AttributeValue::text(
                                              i % 2 == 0 ? "college graduate" : "high school"));
        instance.users.add(std::move(r));
    }
    instance.company.owner = "company";
    instance.scores.set_default(Decimal{});
    return instance;
}

}  // namespace

TEST_CASE("satisfiable group clauses: vacuous, item-reject and company composite") {
    ProblemInstance unconstrained = small_instance();
    CHECK(is_satisfiable_group(unconstrained.item, {"s1", "s2", "s3"},
                               unconstrained.profiles, unconstrained.company,
                               unconstrained.users));

    // one member whose item constraints reject the item
    ProblemInstance rejecting = small_instance();
    ConstraintProfile strict;
    strict.owner = "s2";
    strict.item_constraints.push_back({"cost", CmpOp::leq, num(800)});
    rejecting.profiles.emplace("s2", strict);
    CHECK_FALSE(is_satisfiable_group(rejecting.item, {"s1", "s2", "s3"}, rejecting.profiles,
                                     rejecting.company, rejecting.users));

    // clauses (i) and (ii) hold but the company needs a 4-member witness
    ProblemInstance company_bound = small_instance();
    CompositeConstraint four_adults;
    four_adults.min_count = 4;
    four_adults.conjuncts.emplace_back(ValuePredicate{"age", CmpOp::gt, num(0)});
    company_bound.company.group_constraints.emplace_back(four_adults);
    std::vector<std::string> trio{"s1", "s2", "s3"};
    // independent clause-by-clause check
    {
        MemberList members = resolve_members(company_bound.users, trio);
        bool clause_i = true;
        bool clause_ii = true;
        for (const auto& id : trio) {
            clause_i = clause_i &&
                       eval_user_to_item(profile_for(company_bound.profiles, id),
                                         company_bound.item);
            clause_ii = clause_ii && eval_user_to_group(profile_for(company_bound.profiles, id),
                                                        id, members)
                                         .all_satisfied();
        }
        bool clause_iii =
            eval_group_to_group(company_bound.company, members).all_satisfied();
        CHECK(clause_i);
        CHECK(clause_ii);
        CHECK_FALSE(clause_iii);
    }
    CHECK_FALSE(is_satisfiable_group(company_bound.item, trio, company_bound.profiles,
                                     company_bound.company, company_bound.users));

    CHECK_THROWS_AS(is_satisfiable_group(unconstrained.item, {"ghost"},
                                         unconstrained.profiles, unconstrained.company,
                                         unconstrained.users),
                    ContractError);
    CHECK_THROWS_AS(is_satisfiable_group(unconstrained.item, {"s1", "s1"},
                                         unconstrained.profiles, unconstrained.company,
                                         unconstrained.users),
                    ContractError);
    CHECK_THROWS_AS(is_satisfiable_group(unconstrained.item, {}, unconstrained.profiles,
                                         unconstrained.company, unconstrained.users),
                    ContractError);
}

TEST_CASE("decomposition exactness: is_satisfiable_group equals the audited report") {
    ConstraintGen gen(101);
    for (int trial = 0; trial < 200; ++trial) {
        auto records = gen.members(6, 2);
        ProblemInstance instance;
        instance.item = gems_item();
        for (auto& r : records) instance.users.add(r);
        instance.company.owner = "company";
        if (gen.below(2) == 0) {
            instance.company.group_constraints.emplace_back(gen.composite(4));
        }
        std::vector<std::string> ids;
        for (const auto& r : records) {
            ConstraintProfile p;
            p.owner = r.entity_id;
            if (gen.below(2) == 0) p.group_constraints.emplace_back(gen.value_pred());
            if (gen.below(3) == 0) p.group_constraints.emplace_back(gen.agg_pred());
            if (!p.group_constraints.empty()) instance.profiles.emplace(p.owner, p);
            ids.push_back(r.entity_id);
        }
        instance.scores.set_default(Decimal{});

        bool direct = is_satisfiable_group(instance.item, ids, instance.profiles,
                                           instance.company, instance.users);
        GroupAudit audit = evaluate_group_report(instance.item, ids, instance.profiles,
                                                 instance.company, instance.users);
        CHECK(direct == audit.satisfiable);
        CHECK(audit.satisfiable == audit.report.all_satisfied());

        // determinism: identical inputs, identical reports
        GroupAudit again = evaluate_group_report(instance.item, ids, instance.profiles,
                                                 instance.company, instance.users);
        REQUIRE(again.report.verdicts.size() == audit.report.verdicts.size());
        for (std::size_t i = 0; i < again.report.verdicts.size(); ++i) {
            CHECK(again.report.verdicts[i].satisfied == audit.report.verdicts[i].satisfied);
            CHECK(again.report.verdicts[i].grade == audit.report.verdicts[i].grade);
            CHECK(again.report.verdicts[i].constraint == audit.report.verdicts[i].constraint);
        }
    }
}

TEST_CASE("composite agrees with exhaustive subset enumeration") {
    ConstraintGen gen(202);
    int fast_path_hits = 0;
    for (int trial = 0; trial < 600; ++trial) {
        auto records = gen.members(9, 1);
        CompositeConstraint c = gen.composite(5);
        MemberList members = view(records);
        bool oracle = composite_oracle(c, members);
        CompositeEval impl = eval_composite(c, members);
        CHECK(impl.satisfied == oracle);
        CHECK((impl.grade == kDecimalOne) == impl.satisfied);
        if (c.conjuncts.size() == 1 &&
            std::holds_alternative<AggregationPredicate>(c.conjuncts[0])) {
            ++fast_path_hits;
        }
    }
    CHECK(fast_path_hits > 50);  // the shortcut side actually got exercised
}

TEST_CASE("composite superset monotonicity and value anti-monotonicity") {
    ConstraintGen gen(303);
    for (int trial = 0; trial < 1000; ++trial) {
        auto records = gen.members(8, 2);
        MemberList all = view(records);
        // A: random non-empty strict-or-equal subset of B
        MemberList sub;
        for (const auto* m : all) {
            if (gen.below(2) == 0) sub.push_back(m);
        }
        if (sub.empty()) sub.push_back(all.front());

        CompositeConstraint c = gen.composite(4);
        if (eval_composite(c, sub).satisfied) {
            CHECK(eval_composite(c, all).satisfied);
        }

        ValuePredicate p = gen.value_pred();
        if (eval_value_predicate(p, all).satisfied) {
            CHECK(eval_value_predicate(p, sub).satisfied);
        }
    }
}

TEST_CASE("grade and verdict stay coupled across random reports") {
    ConstraintGen gen(404);
    for (int trial = 0; trial < 300; ++trial) {
        auto records = gen.members(6, 1);
        ConstraintProfile profile;
        profile.owner = records.front().entity_id;
        profile.group_constraints.emplace_back(gen.value_pred());
        profile.group_constraints.emplace_back(gen.agg_pred());
        profile.group_constraints.emplace_back(gen.composite(4));
        auto report =
            eval_user_to_group(profile, profile.owner, view(records));
        for (const auto& v : report.verdicts) {
            CHECK(v.satisfied == (v.grade == kDecimalOne));
            CHECK(v.grade >= kDecimalZero);
            CHECK(v.grade <= kDecimalOne);
        }
    }
}

TEST_CASE("kind mismatch during evaluation names the constraint") {
    std::vector<AttributeRecord> records(1);
    records[0].entity_id = "odd";
    records[0].attributes.emplace("age", AttributeValue::text("thirty"));
    ValuePredicate pred{"age", CmpOp::gt, num(30)};
    try {
        eval_value_predicate(pred, view(records));
        FAIL("expected EvalError");
    } catch (const EvalError& e) {
        std::string msg = e.what();
        CHECK(msg.find("age") != std::string::npos);
        CHECK(msg.find("odd") != std::string::npos);
        CHECK(msg.find("kind mismatch") != std::string::npos);
    }
}
