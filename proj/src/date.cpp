#include "groupform/date.hpp"

#include <array>
#include <cctype>
#include <cstdio>

namespace groupform {

namespace {

bool all_digits(std::string_view s) {
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return !s.empty();
}

bool leap(int year) { return (year % 4 == 0 && year % 100 != 0) || year % 400 == 0; }

}  // namespace

bool Date::looks_like_date(std::string_view text) {
    return text.size() == 10 && text[4] == '-' && text[7] == '-' &&
           all_digits(text.substr(0, 4)) && all_digits(text.substr(5, 2)) &&
           all_digits(text.substr(8, 2));
}

bool Date::valid(int year, int month, int day) {
    static constexpr std::array<int, 12> days{31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (month < 1 || month > 12 || day < 1) return false;
    int limit = days[month - 1];
    if (month == 2 && leap(year)) limit = 29;
    return day <= limit;
}

std::optional<Date> Date::parse(std::string_view text) {
    if (!looks_like_date(text)) return std::nullopt;
    auto num = [&](std::size_t off, std::size_t len) {
        int v = 0;
        for (std::size_t i = off; i < off + len; ++i) v = v * 10 + (text[i] - '0');
        return v;
    };
    Date d{num(0, 4), num(5, 2), num(8, 2)};
    if (!valid(d.year, d.month, d.day)) return std::nullopt;
    return d;
}

std::string Date::str() const {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, month, day);
    return buf;
}

}  // namespace groupform
