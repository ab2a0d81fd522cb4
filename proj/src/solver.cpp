#include "groupform/solver.hpp"

#include <algorithm>
#include <iostream>
#include <random>
#include <set>

namespace groupform {

namespace {

// Score lookup for every listed user, keyed for repeated use.
std::vector<std::pair<std::string, Decimal>> scored(const std::vector<std::string>& ids,
                                                    const ProblemInstance& instance) {
    std::vector<std::pair<std::string, Decimal>> out;
    out.reserve(ids.size());
    for (const auto& id : ids) {
        out.emplace_back(id, instance.scores.score_of(id, instance.item.entity_id));
    }
    return out;
}

// Ids whose score is maximal (or within epsilon of maximal), ascending.
std::vector<std::string> top_scorers(const std::vector<std::pair<std::string, Decimal>>& pool,
                                     const std::optional<Decimal>& epsilon) {
    std::vector<std::string> out;
    if (pool.empty()) return out;
    Decimal best = pool.front().second;
    for (const auto& [id, score] : pool) {
        if (score > best) best = score;
    }
    Decimal cutoff = epsilon ? best - *epsilon : best;
    for (const auto& [id, score] : pool) {
        if (score >= cutoff) out.push_back(id);
    }
    std::sort(out.begin(), out.end());
    return out;
}

void emit_warning(const SolverOptions& options, const std::string& message) {
    if (options.warn) {
        options.warn(message);
    } else {
        std::cerr << "warning: " << message << '\n';
    }
}

}  // namespace

bool Group::contains(const std::string& id) const {
    return std::find(members.begin(), members.end(), id) != members.end();
}

std::string_view policy_name(CountingPolicy policy) {
    return policy == CountingPolicy::binary ? "binary" : "graded";
}

std::vector<std::string> eligible_users(const ProblemInstance& instance) {
    std::vector<std::string> out;
    for (const auto& user : instance.users) {
        try {
            if (eval_user_to_item(profile_for(instance.profiles, user.entity_id),
                                  instance.item)) {
                out.push_back(user.entity_id);
            }
        } catch (const EvalError& e) {
            throw EvalError("while filtering user '" + user.entity_id + "': " + e.what());
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

Decimal group_score(const Group& group, const ProblemInstance& instance) {
    Decimal total;
    for (const auto& id : group.members) {
        total += instance.scores.score_of(id, instance.item.entity_id);
    }
    return total;
}

Decimal policy_total(const std::vector<std::string>& group, const ProblemInstance& instance,
                     CountingPolicy policy, const EvalOptions& opts) {
    if (group.empty()) throw ContractError("policy total over an empty group");
    MemberList members = resolve_members(instance.users, group);
    Decimal total;
    for (const auto& id : group) {
        SatisfactionReport report =
            eval_user_to_group(profile_for(instance.profiles, id), id, members, opts);
        total += policy == CountingPolicy::binary ? Decimal::from_int(report.satisfied_count())
                                                  : report.graded_total();
    }
    SatisfactionReport company = eval_group_to_group(instance.company, members);
    total += policy == CountingPolicy::binary ? Decimal::from_int(company.satisfied_count())
                                              : company.graded_total();
    return total;
}

SolverResult greedy_construct(const ProblemInstance& instance, int k,
                              const SolverOptions& options) {
    if (k < 1) throw ContractError("group size k must be >= 1");
    std::vector<std::string> eligible = eligible_users(instance);
    if (eligible.size() < static_cast<std::size_t>(k)) {
        throw InfeasibleError(eligible.size(), static_cast<std::size_t>(k));
    }

    auto pool = scored(eligible, instance);
    EvalOptions eval_opts{options.include_self};

    SolverResult result;
    std::set<std::string> picked;

    // Seed member: uniformly random among the exact top scorers.
    std::vector<std::string> best_set = top_scorers(pool, std::nullopt);
    std::mt19937_64 engine(options.seed);
    const std::string seed_member = best_set[engine() % best_set.size()];
    result.group.members.push_back(seed_member);
    picked.insert(seed_member);
    result.trace.push_back({0, seed_member, best_set.size(), true, {}});

    while (result.group.size() < static_cast<std::size_t>(k)) {
        std::vector<std::pair<std::string, Decimal>> remaining;
        remaining.reserve(pool.size());
        for (const auto& entry : pool) {
            if (picked.count(entry.first) == 0) remaining.push_back(entry);
        }
        std::vector<std::string> candidates = top_scorers(remaining, options.epsilon);

        TraceStep step;
        step.step = static_cast<int>(result.group.size());
        step.candidate_count = candidates.size();
        step.totals.reserve(candidates.size());

        std::string chosen;
        Decimal chosen_total;
        std::vector<std::string> trial = result.group.members;
        trial.emplace_back();
        for (const auto& candidate : candidates) {
            trial.back() = candidate;
            Decimal total = policy_total(trial, instance, options.policy, eval_opts);
            step.totals.emplace_back(candidate, total);
            // strictly-greater keeps the smallest id on ties (candidates ascend)
            if (chosen.empty() || total > chosen_total) {
                chosen = candidate;
                chosen_total = total;
            }
        }
        step.chosen = chosen;
        result.group.members.push_back(chosen);
        picked.insert(chosen);
        result.trace.push_back(std::move(step));
    }

    GroupAudit audit = evaluate_group_report(instance.item, result.group.members,
                                             instance.profiles, instance.company,
                                             instance.users, eval_opts);
    result.report = std::move(audit.report);
    result.satisfiable = audit.satisfiable;
    result.total_score = group_score(result.group, instance);
    return result;
}

namespace {

// Anti-monotone partial check: whether candidate can join the partial group
// without breaking any value predicate that is already decidable. Only value
// predicates are final on partial groups; aggregation and composite
// constraints wait for the complete subset.
class ValuePredicateFilter {
public:
    ValuePredicateFilter(const ProblemInstance& instance, bool include_self)
        : instance_(instance), include_self_(include_self) {
        for (const auto& gc : instance.company.group_constraints) {
            if (const auto* v = std::get_if<ValuePredicate>(&gc)) company_preds_.push_back(v);
        }
    }

    bool admits(const std::vector<const AttributeRecord*>& partial,
                const std::vector<const std::vector<const ValuePredicate*>*>& partial_preds,
                const AttributeRecord* candidate,
                const std::vector<const ValuePredicate*>& candidate_preds) const {
        for (const auto* pred : company_preds_) {
            if (!holds(*pred, *candidate)) return false;
        }
        if (include_self_) {
            for (const auto* pred : candidate_preds) {
                if (!holds(*pred, *candidate)) return false;
            }
        }
        for (std::size_t i = 0; i < partial.size(); ++i) {
            for (const auto* pred : *partial_preds[i]) {
                if (!holds(*pred, *candidate)) return false;
            }
            for (const auto* pred : candidate_preds) {
                if (!holds(*pred, *partial[i])) return false;
            }
        }
        return true;
    }

    static bool holds(const ValuePredicate& pred, const AttributeRecord& record) {
        auto it = record.attributes.find(pred.attribute);
        if (it == record.attributes.end()) return false;
        return compare(it->second, pred.op, pred.value);
    }

private:
    const ProblemInstance& instance_;
    bool include_self_;
    std::vector<const ValuePredicate*> company_preds_;
};

}  // namespace

std::optional<SolverResult> exact_construct(const ProblemInstance& instance, int k,
                                            const SolverOptions& options) {
    if (k < 1) throw ContractError("group size k must be >= 1");
    std::vector<std::string> eligible = eligible_users(instance);
    const auto kk = static_cast<std::size_t>(k);
    if (eligible.size() < kk) return std::nullopt;

    EvalOptions eval_opts{options.include_self};
    ValuePredicateFilter filter(instance, options.include_self);

    // Per-user records and value predicates, aligned with `eligible`.
    std::vector<const AttributeRecord*> records;
    std::vector<std::vector<const ValuePredicate*>> value_preds;
    std::vector<ConstraintProfile> profiles;
    records.reserve(eligible.size());
    profiles.reserve(eligible.size());
    for (const auto& id : eligible) {
        records.push_back(instance.users.find(id));
        profiles.push_back(profile_for(instance.profiles, id));
    }
    value_preds.resize(eligible.size());
    for (std::size_t i = 0; i < profiles.size(); ++i) {
        for (const auto& gc : profiles[i].group_constraints) {
            if (const auto* v = std::get_if<ValuePredicate>(&gc)) value_preds[i].push_back(v);
        }
    }

    std::optional<std::vector<std::string>> best;
    Decimal best_score;
    std::size_t examined = 0;
    bool warned = false;

    std::vector<std::size_t> chosen;
    std::vector<const AttributeRecord*> partial;
    std::vector<const std::vector<const ValuePredicate*>*> partial_preds;
    chosen.reserve(kk);

    // Depth-first lexicographic enumeration; the first strict improvement
    // wins, so equal scores keep the lexicographically smallest member list.
    auto visit = [&](auto&& self, std::size_t start) -> void {
        if (chosen.size() == kk) {
            ++examined;
            if (!warned && examined > options.enumeration_budget) {
                warned = true;
                emit_warning(options, "exact enumeration exceeded budget of " +
                                          std::to_string(options.enumeration_budget) +
                                          " subsets");
            }
            std::vector<std::string> ids;
            ids.reserve(kk);
            for (std::size_t i : chosen) ids.push_back(eligible[i]);
            if (is_satisfiable_group(instance.item, ids, instance.profiles, instance.company,
                                     instance.users, eval_opts)) {
                Group g{ids};
                Decimal score = group_score(g, instance);
                if (!best || score > best_score) {
                    best = std::move(ids);
                    best_score = score;
                }
            }
            return;
        }
        std::size_t remaining_needed = kk - chosen.size();
        for (std::size_t i = start; i + remaining_needed <= eligible.size(); ++i) {
            if (!filter.admits(partial, partial_preds, records[i], value_preds[i])) continue;
            chosen.push_back(i);
            partial.push_back(records[i]);
            partial_preds.push_back(&value_preds[i]);
            self(self, i + 1);
            chosen.pop_back();
            partial.pop_back();
            partial_preds.pop_back();
        }
    };
    visit(visit, 0);

    if (!best) return std::nullopt;

    SolverResult result;
    result.group.members = *best;
    result.total_score = best_score;
    GroupAudit audit = evaluate_group_report(instance.item, result.group.members,
                                             instance.profiles, instance.company,
                                             instance.users, eval_opts);
    result.report = std::move(audit.report);
    result.satisfiable = audit.satisfiable;
    return result;
}

}  // namespace groupform
