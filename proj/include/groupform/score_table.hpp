#pragma once

// Interest scores: (user, item) -> decimal, with an optional default for
// absent pairs.

#include <map>
#include <optional>
#include <string>
#include <utility>

#include "groupform/decimal.hpp"

namespace groupform {

class ScoreTable {
public:
    void set(std::string user, std::string item, Decimal score) {
        entries_[{std::move(user), std::move(item)}] = score;
    }

    void set_default(Decimal score) { default_ = score; }
    const std::optional<Decimal>& default_score() const { return default_; }

    bool has(const std::string& user, const std::string& item) const {
        return entries_.count({user, item}) != 0;
    }

    // Stored score, else the default; MissingScoreError when neither exists.
    Decimal score_of(const std::string& user, const std::string& item) const;

    const std::map<std::pair<std::string, std::string>, Decimal>& entries() const {
        return entries_;
    }

private:
    std::map<std::pair<std::string, std::string>, Decimal> entries_;
    std::optional<Decimal> default_;
};

}  // namespace groupform
