#include "groupform/generator.hpp"

#include <random>
#include <set>
#include <string>

#include "groupform/errors.hpp"

namespace groupform {

namespace {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t below(std::uint64_t n) { return engine_() % n; }

    std::int64_t range(std::int64_t lo, std::int64_t hi) {  // inclusive
        return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    bool chance(double p) {
        return static_cast<double>(engine_() >> 11) / 9007199254740992.0 < p;  // 53-bit
    }

    template <typename T>
    const T& pick(const std::vector<T>& pool) {
        return pool[below(pool.size())];
    }

private:
    std::mt19937_64 engine_;
};

const std::vector<std::string> kEducation = {"high school", "college graduate", "masters",
                                             "phd"};
const std::vector<std::string> kGender = {"female", "male", "nonbinary"};
const std::vector<std::string> kCategory = {"cruise", "tour", "retreat", "expedition"};
const std::vector<std::string> kFirstNames = {"alex",  "bella", "carol", "dan",  "elena",
                                              "felix", "gail",  "henry", "iris", "jonas"};

std::string user_id(std::size_t index, std::size_t total) {
    std::string digits = std::to_string(index + 1);
    std::size_t width = std::to_string(total).size();
    return "u" + std::string(width - std::min(width, digits.size()), '0') + digits;
}

AttributeValue number_value(std::int64_t v) {
    return AttributeValue::number(Decimal::from_int(v));
}

ValuePredicate value_template(Rng& rng) {
    ValuePredicate pred;
    switch (rng.below(5)) {
        case 0:
            pred = {"age", CmpOp::geq, number_value(rng.range(18, 30))};
            break;
        case 1:
            pred = {"age", CmpOp::lt, number_value(rng.range(45, 76))};
            break;
        case 2:
            pred = {"education", CmpOp::neq, AttributeValue::text(rng.pick(kEducation))};
            break;
        case 3:
            pred = {"education", CmpOp::eq, AttributeValue::text("college graduate")};
            break;
        default:
            pred = {"gender", CmpOp::neq, AttributeValue::text(rng.pick(kGender))};
            break;
    }
    return pred;
}

AggregationPredicate aggregation_template(Rng& rng) {
    AggregationPredicate pred;
    switch (rng.below(5)) {
        case 0:
            pred = {Aggregator::avg, "age", CmpOp::lt, Decimal::from_int(rng.range(30, 60))};
            break;
        case 1:
            pred = {Aggregator::avg, "age", CmpOp::gt, Decimal::from_int(rng.range(20, 40))};
            break;
        case 2:
            pred = {Aggregator::min, "age", CmpOp::geq, Decimal::from_int(rng.range(18, 25))};
            break;
        case 3:
            pred = {Aggregator::max, "age", CmpOp::leq, Decimal::from_int(rng.range(55, 75))};
            break;
        default:
            pred = {Aggregator::count, "age", CmpOp::geq, Decimal::from_int(rng.range(1, 3))};
            break;
    }
    return pred;
}

GroupConstraint composite_template(Rng& rng, const GenSpec& spec) {
    CompositeConstraint composite;
    composite.min_count = static_cast<int>(rng.range(1, spec.max_composite_count));
    if (rng.chance(0.35)) {
        // pure aggregation witness, monotone operators only
        composite.conjuncts.emplace_back(aggregation_template(rng));
    } else {
        composite.conjuncts.emplace_back(value_template(rng));
        if (spec.max_composite_conjuncts >= 2 && rng.chance(0.3)) {
            if (rng.chance(0.5)) {
                composite.conjuncts.emplace_back(value_template(rng));
            } else {
                composite.conjuncts.emplace_back(aggregation_template(rng));
            }
        }
    }
    return composite;
}

GroupConstraint group_constraint_template(Rng& rng, const GenSpec& spec) {
    switch (rng.below(3)) {
        case 0: return value_template(rng);
        case 1: return aggregation_template(rng);
        default: return composite_template(rng, spec);
    }
}

}  // namespace

Dataset generate_synthetic(const GenSpec& spec) {
    if (spec.n_users < 1) throw ContractError("generator needs at least one user");
    if (spec.score_decimals < 1 || spec.score_decimals > 6) {
        throw ContractError("score_decimals must lie in [1, 6]");
    }
    Rng rng(spec.seed);
    Dataset dataset;

    // item
    const std::int64_t item_cost = rng.range(400, 2000);
    const std::int64_t item_duration = rng.range(3, 21);
    const std::string item_category = rng.pick(kCategory);
    const Date item_start{2026, static_cast<int>(rng.range(3, 10)),
                          static_cast<int>(rng.range(1, 28))};
    dataset.instance.item.entity_id = "item-1";
    dataset.instance.item.attributes = {
        {"category", AttributeValue::text(item_category)},
        {"cost", number_value(item_cost)},
        {"duration", number_value(item_duration)},
        {"rating", AttributeValue::number(Decimal::from_fraction(rng.range(35, 50), 10))},
        {"start_date", AttributeValue::date(item_start)},
    };

    // users
    for (std::size_t i = 0; i < spec.n_users; ++i) {
        AttributeRecord user;
        user.entity_id = user_id(i, spec.n_users);
        user.attributes = {
            {"age", number_value(rng.range(18, 75))},
            {"education", AttributeValue::text(rng.pick(kEducation))},
            {"gender", AttributeValue::text(rng.pick(kGender))},
            {"income", number_value(rng.range(15, 120) * 1000)},
            {"membership_since",
             AttributeValue::date(Date{static_cast<int>(rng.range(2015, 2025)),
                                       static_cast<int>(rng.range(1, 12)),
                                       static_cast<int>(rng.range(1, 28))})},
            {"name", AttributeValue::text(rng.pick(kFirstNames) + " " +
                                          std::to_string(rng.range(1, 99)))},
        };
        dataset.instance.users.add(std::move(user));
    }

    // profiles
    for (const auto& user : dataset.instance.users) {
        ConstraintProfile profile;
        profile.owner = user.entity_id;
        if (rng.chance(spec.density)) {
            std::int64_t n_item = rng.range(1, 2);
            for (std::int64_t c = 0; c < n_item; ++c) {
                if (rng.chance(spec.item_reject_prob)) {
                    profile.item_constraints.push_back(
                        {"cost", CmpOp::leq, number_value(item_cost - rng.range(1, 200))});
                    continue;
                }
                switch (rng.below(4)) {
                    case 0:
                        profile.item_constraints.push_back(
                            {"cost", CmpOp::leq, number_value(item_cost + rng.range(0, 400))});
                        break;
                    case 1:
                        profile.item_constraints.push_back(
                            {"duration", CmpOp::lt,
                             number_value(item_duration + rng.range(1, 5))});
                        break;
                    case 2:
                        profile.item_constraints.push_back(
                            {"category", CmpOp::eq, AttributeValue::text(item_category)});
                        break;
                    default:
                        profile.item_constraints.push_back(
                            {"start_date", CmpOp::geq,
                             AttributeValue::date(Date{2026, 1, 1})});
                        break;
                }
            }
        }
        if (rng.chance(spec.density)) {
            std::int64_t n_group = rng.range(1, 2);
            for (std::int64_t c = 0; c < n_group; ++c) {
                profile.group_constraints.push_back(group_constraint_template(rng, spec));
            }
        }
        if (!profile.empty()) {
            dataset.instance.profiles.emplace(profile.owner, std::move(profile));
        }
    }

    // company
    dataset.instance.company.owner = std::string(kCompanyOwner);
    if (rng.chance(spec.density)) {
        dataset.instance.company.group_constraints.push_back(
            group_constraint_template(rng, spec));
    }

    // scores: distinct draws on the requested grid
    std::int64_t grid = 1;
    for (int d = 0; d < spec.score_decimals; ++d) grid *= 10;
    std::set<std::int64_t> used;
    for (const auto& user : dataset.instance.users) {
        std::int64_t raw = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(grid)));
        if (spec.distinct_scores) {
            if (used.size() >= static_cast<std::size_t>(grid)) {
                throw ContractError("score grid too small for distinct scores");
            }
            while (used.count(raw) != 0) raw = (raw + 1) % grid;
            used.insert(raw);
        }
        dataset.instance.scores.set(user.entity_id, dataset.instance.item.entity_id,
                                    Decimal::from_units(raw * (Decimal::kScale / grid)));
    }
    dataset.instance.scores.set_default(Decimal{});
    return dataset;
}

}  // namespace groupform
