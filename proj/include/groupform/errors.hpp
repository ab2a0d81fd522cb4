#pragma once

#include <stdexcept>
#include <string>

namespace groupform {

// Base class for all toolkit errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Raised when a predicate is evaluated against operands it cannot apply to:
// mismatched value kinds or an operator that is undefined for the kind.
class EvalError : public Error {
public:
    explicit EvalError(const std::string& msg) : Error(msg) {}
};

// Raised when a score lookup fails and no default is configured.
class MissingScoreError : public Error {
public:
    MissingScoreError(const std::string& user, const std::string& item)
        : Error("no score for pair (" + user + ", " + item + ") and no default configured"),
          user_(user), item_(item) {}

    const std::string& user() const { return user_; }
    const std::string& item() const { return item_; }

private:
    std::string user_;
    std::string item_;
};

// Raised by the greedy solver when fewer than k users pass the item filter.
class InfeasibleError : public Error {
public:
    InfeasibleError(std::size_t eligible, std::size_t k)
        : Error("infeasible: only " + std::to_string(eligible) +
                " eligible user(s) for requested group size " + std::to_string(k)),
          eligible_(eligible), k_(k) {}

    std::size_t eligible_count() const { return eligible_; }
    std::size_t requested_k() const { return k_; }

private:
    std::size_t eligible_;
    std::size_t k_;
};

// Raised when a caller violates an operation precondition (empty group,
// duplicate member, unknown id, subject not in group, ...).
class ContractError : public Error {
public:
    explicit ContractError(const std::string& msg) : Error(msg) {}
};

}  // namespace groupform
