#include "groupform/score_table.hpp"

#include "groupform/errors.hpp"

namespace groupform {

Decimal ScoreTable::score_of(const std::string& user, const std::string& item) const {
    auto it = entries_.find({user, item});
    if (it != entries_.end()) return it->second;
    if (default_) return *default_;
    throw MissingScoreError(user, item);
}

}  // namespace groupform
