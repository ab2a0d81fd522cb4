#pragma once

// Dataset ingestion and validation.
//
// Datasets are JSON documents: one item, a user population, per-user
// constraint profiles with constraints written in the DSL, one company
// profile, and an interest score table. Attribute values map as: JSON
// number -> number kind; string shaped YYYY-MM-DD -> date; other strings
// -> text.

#include <optional>
#include <string>
#include <vector>

#include "groupform/solver.hpp"

namespace groupform {

struct Dataset {
    ProblemInstance instance;
};

struct ValidationIssue {
    std::string where;    // JSON-path-ish location, e.g. "profiles[2].group_constraints[0]"
    std::string message;
};

struct LoadResult {
    std::optional<Dataset> dataset;
    std::vector<ValidationIssue> issues;

    bool ok() const { return dataset.has_value(); }
};

// Parses and validates dataset text. Validation collects every problem it
// can find (unknown ids, DSL errors, kind mismatches between constraints and
// observed attribute kinds, duplicate keys, missing scores) instead of
// stopping at the first.
LoadResult load_dataset_text(const std::string& text);

LoadResult load_dataset(const std::string& path);

// Canonical JSON serialization; load_dataset_text(dataset_to_json(d)) yields
// an equivalent dataset.
std::string dataset_to_json(const Dataset& dataset);

void save_dataset(const Dataset& dataset, const std::string& path);

}  // namespace groupform
