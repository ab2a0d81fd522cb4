#pragma once

// Seeded synthetic dataset generator for desk-scale experiments.
//
// Emits one item, n users that all carry the full attribute catalog
// (age, income, education, gender, membership_since, name), constraint
// profiles drawn from templates with the given density, and distinct
// interest scores. Identical spec -> byte-identical dataset JSON.

#include <cstdint>

#include "groupform/dataset.hpp"

namespace groupform {

struct GenSpec {
    std::size_t n_users = 10;
    // Probability that a user expresses item constraints, that a user
    // expresses group constraints, and that the company does.
    double density = 0.5;
    std::uint64_t seed = 0;

    // Scores are drawn on a 10^-score_decimals grid in [0, 1).
    int score_decimals = 6;
    bool distinct_scores = true;

    // Probability that a generated item constraint rejects the item.
    double item_reject_prob = 0.15;
    // 1 keeps composites to a single conjunct (no mixed value+aggregation
    // conjunctions, whose evaluation enumerates subsets).
    int max_composite_conjuncts = 2;
    // Largest composite min_count to generate.
    int max_composite_count = 3;
};

Dataset generate_synthetic(const GenSpec& spec);

}  // namespace groupform
