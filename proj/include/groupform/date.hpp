#pragma once

// Calendar date at day precision. Ordering is chronological; input and
// output form is ISO-8601 YYYY-MM-DD.

#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace groupform {

struct Date {
    int year = 1970;
    int month = 1;
    int day = 1;

    // Strict YYYY-MM-DD with calendar validation (leap years included).
    static std::optional<Date> parse(std::string_view text);

    // True when text has the YYYY-MM-DD shape, whether or not it is a
    // valid calendar date.
    static bool looks_like_date(std::string_view text);

    static bool valid(int year, int month, int day);

    std::string str() const;

    friend auto operator<=>(const Date&, const Date&) = default;
};

}  // namespace groupform
