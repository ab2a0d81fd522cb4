#pragma once

// Solver invocation and machine-readable reporting.
//
// Reports are deterministic: identical dataset bytes and config produce
// byte-identical JSON, member order included. Decimals are serialized as
// canonical strings to keep them exact.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "groupform/dataset.hpp"

namespace groupform {

enum class SolverChoice { greedy, exact, both };

struct RunConfig {
    int k = 1;
    SolverChoice solver = SolverChoice::greedy;
    CountingPolicy policy = CountingPolicy::graded;
    std::uint64_t seed = 0;
    std::optional<Decimal> epsilon;  // >= 0 when present
    bool include_self = false;
};

// Exit statuses shared by run() and the CLI.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUnsatisfiable = 2;
inline constexpr int kExitInfeasible = 3;
inline constexpr int kExitInvalid = 4;

struct RunOutcome {
    nlohmann::ordered_json report;
    int exit_status = kExitOk;
};

RunOutcome run(const RunConfig& config, const Dataset& dataset);

// Satisfiability audit of an externally supplied group; the cross-check
// oracle for both solvers. Throws ContractError on unknown or duplicate ids
// and empty groups.
GroupAudit check_group(const Dataset& dataset, const std::vector<std::string>& members,
                       const EvalOptions& opts = {});

nlohmann::ordered_json verdicts_to_json(const SatisfactionReport& report);

}  // namespace groupform
