#include "groupform/runner.hpp"

namespace groupform {

namespace {

using nlohmann::ordered_json;

std::string_view solver_name(SolverChoice choice) {
    switch (choice) {
        case SolverChoice::greedy: return "greedy";
        case SolverChoice::exact: return "exact";
        case SolverChoice::both: return "both";
    }
    return "?";
}

ordered_json config_to_json(const RunConfig& config) {
    ordered_json out;
    out["k"] = config.k;
    out["solver"] = std::string(solver_name(config.solver));
    out["policy"] = std::string(policy_name(config.policy));
    out["seed"] = config.seed;
    out["epsilon"] = config.epsilon ? ordered_json(config.epsilon->str()) : ordered_json(nullptr);
    out["include_self"] = config.include_self;
    return out;
}

ordered_json trace_to_json(const std::vector<TraceStep>& trace) {
    ordered_json out = ordered_json::array();
    for (const auto& step : trace) {
        ordered_json s;
        s["step"] = step.step;
        s["chosen"] = step.chosen;
        s["candidates"] = step.candidate_count;
        s["random"] = step.random_pick;
        ordered_json totals = ordered_json::object();
        for (const auto& [id, total] : step.totals) totals[id] = total.str();
        s["totals"] = std::move(totals);
        out.push_back(std::move(s));
    }
    return out;
}

ordered_json result_to_json(const std::string& solver, const SolverResult& result) {
    ordered_json out;
    out["solver"] = solver;
    out["group"] = result.group.members;
    out["total_score"] = result.total_score.str();
    out["satisfiable"] = result.satisfiable;
    out["satisfied_count"] = result.report.satisfied_count();
    out["verdict_count"] = result.report.verdicts.size();
    out["graded_total"] = result.report.graded_total().str();
    out["verdicts"] = verdicts_to_json(result.report);
    out["trace"] = trace_to_json(result.trace);
    return out;
}

}  // namespace

ordered_json verdicts_to_json(const SatisfactionReport& report) {
    ordered_json out = ordered_json::array();
    for (const auto& v : report.verdicts) {
        ordered_json entry;
        entry["tier"] = std::string(tier_name(v.tier));
        entry["owner"] = v.owner;
        entry["constraint"] = v.constraint;
        entry["satisfied"] = v.satisfied;
        entry["grade"] = v.grade.str();
        out.push_back(std::move(entry));
    }
    return out;
}

RunOutcome run(const RunConfig& config, const Dataset& dataset) {
    RunOutcome outcome;
    ordered_json& report = outcome.report;
    report["status"] = "ok";
    report["config"] = config_to_json(config);
    report["item"] = dataset.instance.item.entity_id;
    report["population"] = dataset.instance.users.size();

    if (config.k < 1) {
        report["status"] = "invalid";
        report["error"] = {{"type", "config"}, {"message", "k must be >= 1"}};
        outcome.exit_status = kExitInvalid;
        return outcome;
    }

    SolverOptions options;
    options.policy = config.policy;
    options.seed = config.seed;
    options.epsilon = config.epsilon;
    options.include_self = config.include_self;

    try {
        std::vector<std::string> eligible = eligible_users(dataset.instance);
        report["eligible"] = eligible.size();
        if (eligible.size() < static_cast<std::size_t>(config.k)) {
            report["status"] = "infeasible";
            report["error"] = {{"type", "insufficient_eligible"},
                               {"eligible", eligible.size()},
                               {"k", config.k},
                               {"message", "only " + std::to_string(eligible.size()) +
                                               " eligible user(s) for k = " +
                                               std::to_string(config.k)}};
            outcome.exit_status = kExitInfeasible;
            return outcome;
        }

        report["results"] = ordered_json::array();
        std::optional<Decimal> greedy_total;
        std::optional<Decimal> exact_total;
        bool all_satisfiable = true;

        if (config.solver == SolverChoice::greedy || config.solver == SolverChoice::both) {
            SolverResult greedy = greedy_construct(dataset.instance, config.k, options);
            greedy_total = greedy.total_score;
            all_satisfiable = all_satisfiable && greedy.satisfiable;
            report["results"].push_back(result_to_json("greedy", greedy));
        }
        if (config.solver == SolverChoice::exact || config.solver == SolverChoice::both) {
            std::optional<SolverResult> exact =
                exact_construct(dataset.instance, config.k, options);
            if (!exact) {
                report["status"] = "infeasible";
                report["error"] = {{"type", "no_satisfiable_group"},
                                   {"message", "no satisfiable group of size " +
                                                   std::to_string(config.k) + " exists"}};
                outcome.exit_status = kExitInfeasible;
                return outcome;
            }
            exact_total = exact->total_score;
            report["results"].push_back(result_to_json("exact", *exact));
        }

        if (config.solver == SolverChoice::both) {
            if (exact_total && !exact_total->is_zero()) {
                report["ratio"] =
                    Decimal::from_fraction(greedy_total->units(), exact_total->units()).str();
            } else {
                report["ratio"] = nullptr;
            }
        }

        if (!all_satisfiable) {
            report["status"] = "unsatisfiable";
            outcome.exit_status = kExitUnsatisfiable;
        }
    } catch (const InfeasibleError& e) {
        report["status"] = "infeasible";
        report["error"] = {{"type", "insufficient_eligible"},
                           {"eligible", e.eligible_count()},
                           {"k", e.requested_k()},
                           {"message", e.what()}};
        outcome.exit_status = kExitInfeasible;
    } catch (const Error& e) {
        report["status"] = "error";
        report["error"] = {{"type", "evaluation"}, {"message", e.what()}};
        outcome.exit_status = kExitInvalid;
    }
    return outcome;
}

GroupAudit check_group(const Dataset& dataset, const std::vector<std::string>& members,
                       const EvalOptions& opts) {
    return evaluate_group_report(dataset.instance.item, members, dataset.instance.profiles,
                                 dataset.instance.company, dataset.instance.users, opts);
}

}  // namespace groupform
