#pragma once

// Group construction: the greedy heuristic and the exhaustive exact solver.
//
// Greedy seeds the group with a seeded-random pick among the top-scoring
// eligible users, then repeatedly adds, among the current top scorers, the
// candidate whose joined group satisfies the most constraints under the
// configured counting policy. The exact solver enumerates every k-subset of
// the eligible users and returns the best satisfiable one; it is meant for
// desk-scale instances (roughly |eligible| <= 20).

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "groupform/constraint.hpp"
#include "groupform/eval.hpp"
#include "groupform/score_table.hpp"

namespace groupform {

// One problem instance: the item, the scored population and all constraint
// profiles. The company profile owns the group-to-group constraints.
struct ProblemInstance {
    AttributeRecord item;
    Population users;
    ProfileMap profiles;
    ConstraintProfile company;
    ScoreTable scores;
};

struct Group {
    std::vector<std::string> members;  // distinct, insertion order preserved

    bool contains(const std::string& id) const;
    std::size_t size() const { return members.size(); }
};

enum class CountingPolicy { binary, graded };

std::string_view policy_name(CountingPolicy policy);

struct TraceStep {
    int step = 0;
    std::string chosen;
    std::size_t candidate_count = 0;
    bool random_pick = false;  // true only for the seed member
    // policy total per candidate, ascending by id; empty for the seed step
    std::vector<std::pair<std::string, Decimal>> totals;
};

struct SolverResult {
    Group group;
    Decimal total_score;
    bool satisfiable = false;
    SatisfactionReport report;
    std::vector<TraceStep> trace;
};

struct SolverOptions {
    CountingPolicy policy = CountingPolicy::graded;
    std::uint64_t seed = 0;
    // Widens the max-score candidate set C to scores within epsilon of the
    // maximum. The seed pick stays an exact argmax.
    std::optional<Decimal> epsilon;
    bool include_self = false;
    // exact_construct warns through this sink once the number of complete
    // subsets examined exceeds the budget.
    std::size_t enumeration_budget = 2'000'000;
    std::function<void(const std::string&)> warn;  // default: stderr
};

// Users whose item constraints the item satisfies, ascending by id.
// Evaluation errors carry the offending user id.
std::vector<std::string> eligible_users(const ProblemInstance& instance);

// Exact decimal sum of member scores; empty groups sum to zero.
Decimal group_score(const Group& group, const ProblemInstance& instance);

// Policy value of a group: satisfied-constraint count (binary) or grade sum
// (graded) across every member's user-to-group report plus the company
// report. group must be non-empty.
Decimal policy_total(const std::vector<std::string>& group, const ProblemInstance& instance,
                     CountingPolicy policy, const EvalOptions& opts = {});

// Greedy group construction. Throws InfeasibleError when fewer than k users
// are eligible. The result may be unsatisfiable; the report says which
// constraints failed. Deterministic for fixed inputs and seed.
SolverResult greedy_construct(const ProblemInstance& instance, int k,
                              const SolverOptions& options = {});

// Exhaustive optimum over satisfiable k-subsets of the eligible users, ties
// broken by lexicographically smallest member list; absent when no
// satisfiable k-subset exists.
std::optional<SolverResult> exact_construct(const ProblemInstance& instance, int k,
                                            const SolverOptions& options = {});

}  // namespace groupform
