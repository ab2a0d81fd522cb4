// groupform: construct, check and generate constrained recommendation groups.
//
// Exit statuses: 0 success, 2 group found but unsatisfiable, 3 infeasible,
// 4 validation/usage error.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include <nlohmann/json.hpp>

#include "groupform/generator.hpp"
#include "groupform/runner.hpp"

namespace {

using groupform::Dataset;
using nlohmann::ordered_json;

void print_report(const ordered_json& report) { std::cout << report.dump(2) << std::endl; }

ordered_json issues_to_json(const std::vector<groupform::ValidationIssue>& issues) {
    ordered_json out = ordered_json::array();
    for (const auto& issue : issues) {
        out.push_back({{"where", issue.where}, {"message", issue.message}});
    }
    return out;
}

int report_invalid(const std::vector<groupform::ValidationIssue>& issues) {
    ordered_json report;
    report["status"] = "invalid";
    report["diagnostics"] = issues_to_json(issues);
    print_report(report);
    return groupform::kExitInvalid;
}

std::optional<Dataset> load_or_report(const std::string& path, int& status) {
    groupform::LoadResult loaded = groupform::load_dataset(path);
    if (!loaded.ok()) {
        status = report_invalid(loaded.issues);
        return std::nullopt;
    }
    status = groupform::kExitOk;
    return std::move(loaded.dataset);
}

std::vector<std::string> split_ids(const std::string& csv) {
    std::vector<std::string> out;
    std::string current;
    for (char c : csv) {
        if (c == ',') {
            out.push_back(current);
            current.clear();
        } else {
            current += c;
        }
    }
    out.push_back(current);
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"constrained group formation toolkit"};
    app.require_subcommand(1);

    // form
    auto* form = app.add_subcommand("form", "construct a group for the dataset's item");
    std::string form_dataset;
    int k = 1;
    std::string solver = "greedy";
    std::string policy = "graded";
    std::uint64_t seed = 0;
    double epsilon = -1.0;
    bool include_self = false;
    form->add_option("--dataset", form_dataset, "dataset JSON path")->required();
    form->add_option("--k", k, "group size")->required()->check(CLI::PositiveNumber);
    form->add_option("--solver", solver, "greedy | exact | both")
        ->check(CLI::IsMember({"greedy", "exact", "both"}));
    form->add_option("--policy", policy, "binary | graded")
        ->check(CLI::IsMember({"binary", "graded"}));
    form->add_option("--seed", seed, "seed for the random top-score pick");
    form->add_option("--epsilon", epsilon, "widen the candidate set to scores within epsilon")
        ->check(CLI::NonNegativeNumber);
    form->add_flag("--include-self", include_self,
                   "value predicates also bind their owner");

    // gen
    auto* gen = app.add_subcommand("gen", "generate a synthetic dataset");
    std::size_t n_users = 10;
    std::uint64_t gen_seed = 0;
    double density = 0.5;
    std::string out_path;
    gen->add_option("--users", n_users, "population size")->required()
        ->check(CLI::PositiveNumber);
    gen->add_option("--seed", gen_seed, "generator seed");
    gen->add_option("--density", density, "constraint density in [0, 1]")
        ->check(CLI::Range(0.0, 1.0));
    gen->add_option("--out", out_path, "output path")->required();

    // check
    auto* check = app.add_subcommand("check", "audit an externally supplied group");
    std::string check_dataset;
    std::string members_csv;
    check->add_option("--dataset", check_dataset, "dataset JSON path")->required();
    check->add_option("--members", members_csv, "comma-separated member ids")->required();

    // validate
    auto* validate = app.add_subcommand("validate", "validate a dataset file");
    std::string validate_dataset;
    validate->add_option("--dataset", validate_dataset, "dataset JSON path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return groupform::kExitInvalid;
    }

    try {
        if (form->parsed()) {
            int status = 0;
            auto dataset = load_or_report(form_dataset, status);
            if (!dataset) return status;
            groupform::RunConfig config;
            config.k = k;
            config.solver = solver == "greedy"  ? groupform::SolverChoice::greedy
                            : solver == "exact" ? groupform::SolverChoice::exact
                                                : groupform::SolverChoice::both;
            config.policy = policy == "binary" ? groupform::CountingPolicy::binary
                                               : groupform::CountingPolicy::graded;
            config.seed = seed;
            if (epsilon >= 0.0) config.epsilon = groupform::Decimal::from_double(epsilon);
            config.include_self = include_self;
            groupform::RunOutcome outcome = groupform::run(config, *dataset);
            print_report(outcome.report);
            return outcome.exit_status;
        }

        if (gen->parsed()) {
            groupform::GenSpec spec;
            spec.n_users = n_users;
            spec.seed = gen_seed;
            spec.density = density;
            Dataset dataset = groupform::generate_synthetic(spec);
            groupform::save_dataset(dataset, out_path);
            std::cout << "wrote " << out_path << " (" << n_users << " users, seed " << gen_seed
                      << ", density " << density << ")" << std::endl;
            return groupform::kExitOk;
        }

        if (check->parsed()) {
            int status = 0;
            auto dataset = load_or_report(check_dataset, status);
            if (!dataset) return status;
            groupform::GroupAudit audit;
            try {
                audit = groupform::check_group(*dataset, split_ids(members_csv));
            } catch (const groupform::ContractError& e) {
                ordered_json report;
                report["status"] = "invalid";
                report["error"] = {{"type", "contract"}, {"message", e.what()}};
                print_report(report);
                return groupform::kExitInvalid;
            }
            ordered_json report;
            report["status"] = audit.satisfiable ? "ok" : "unsatisfiable";
            report["satisfiable"] = audit.satisfiable;
            report["satisfied_count"] = audit.report.satisfied_count();
            report["verdict_count"] = audit.report.verdicts.size();
            report["graded_total"] = audit.report.graded_total().str();
            report["verdicts"] = groupform::verdicts_to_json(audit.report);
            print_report(report);
            return audit.satisfiable ? groupform::kExitOk : groupform::kExitUnsatisfiable;
        }

        if (validate->parsed()) {
            groupform::LoadResult loaded = groupform::load_dataset(validate_dataset);
            if (!loaded.ok()) return report_invalid(loaded.issues);
            ordered_json report;
            report["status"] = "ok";
            report["users"] = loaded.dataset->instance.users.size();
            print_report(report);
            return groupform::kExitOk;
        }
    } catch (const groupform::Error& e) {
        ordered_json report;
        report["status"] = "error";
        report["error"] = {{"type", "runtime"}, {"message", e.what()}};
        print_report(report);
        return groupform::kExitInvalid;
    }
    return groupform::kExitOk;
}
