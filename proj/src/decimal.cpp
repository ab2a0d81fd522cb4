#include "groupform/decimal.hpp"

#include <cmath>
#include <cstdlib>

#include "groupform/errors.hpp"

namespace groupform {

namespace {

using int128 = __int128;

std::optional<Decimal> parse_impl(std::string_view text, bool allow_rounding, bool* rounded) {
    if (rounded) *rounded = false;
    if (text.empty()) return std::nullopt;

    std::size_t pos = 0;
    bool negative = false;
    if (text[0] == '-' || text[0] == '+') {
        negative = (text[0] == '-');
        pos = 1;
    }
    if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos]))) {
        return std::nullopt;
    }

    int128 integral = 0;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
        integral = integral * 10 + (text[pos] - '0');
        if (integral > static_cast<int128>(1) << 90) return std::nullopt;  // absurdly large
        ++pos;
    }

    int128 frac_units = 0;
    if (pos < text.size() && text[pos] == '.') {
        ++pos;
        if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos]))) {
            return std::nullopt;
        }
        int digits = 0;
        int128 scale = Decimal::kScale;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            int d = text[pos] - '0';
            if (digits < 6) {
                scale /= 10;
                frac_units += scale * d;
            } else if (digits == 6) {
                if (!allow_rounding) return std::nullopt;
                if (rounded) *rounded = true;
                if (d >= 5) frac_units += 1;  // half away from zero
            } else {
                if (!allow_rounding) return std::nullopt;
                if (d != 0 && rounded) *rounded = true;
            }
            ++digits;
            ++pos;
        }
    }

    if (pos != text.size()) return std::nullopt;

    int128 units = integral * Decimal::kScale + frac_units;
    if (negative) units = -units;
    if (units > INT64_MAX || units < INT64_MIN) return std::nullopt;
    return Decimal::from_units(static_cast<std::int64_t>(units));
}

}  // namespace

std::optional<Decimal> Decimal::parse(std::string_view text) {
    return parse_impl(text, false, nullptr);
}

std::optional<Decimal> Decimal::parse_rounded(std::string_view text, bool* rounded) {
    return parse_impl(text, true, rounded);
}

Decimal Decimal::from_double(double value) {
    if (!std::isfinite(value)) throw Error("non-finite number cannot become a decimal");
    long double scaled = static_cast<long double>(value) * kScale;
    if (scaled >= static_cast<long double>(INT64_MAX) ||
        scaled <= static_cast<long double>(INT64_MIN)) {
        throw Error("number out of decimal range");
    }
    return from_units(static_cast<std::int64_t>(llroundl(scaled)));
}

Decimal Decimal::from_fraction(std::int64_t num, std::int64_t den) {
    if (den == 0) throw Error("decimal fraction with zero denominator");
    int128 scaled = static_cast<int128>(num) * kScale / den;  // truncates toward zero
    if (scaled > INT64_MAX || scaled < INT64_MIN) throw Error("decimal fraction out of range");
    return from_units(static_cast<std::int64_t>(scaled));
}

std::string Decimal::str() const {
    std::uint64_t u;
    std::string sign;
    if (units_ < 0) {
        sign = "-";
        u = ~static_cast<std::uint64_t>(units_) + 1;
    } else {
        u = static_cast<std::uint64_t>(units_);
    }
    std::uint64_t whole = u / kScale;
    std::uint64_t frac = u % kScale;
    std::string out = sign + std::to_string(whole);
    if (frac != 0) {
        std::string f = std::to_string(frac);
        f.insert(f.begin(), 6 - f.size(), '0');
        while (f.back() == '0') f.pop_back();
        out += "." + f;
    }
    return out;
}

Decimal Decimal::operator+(Decimal rhs) const {
    std::int64_t out;
    if (__builtin_add_overflow(units_, rhs.units_, &out)) throw Error("decimal overflow in addition");
    return from_units(out);
}

Decimal Decimal::operator-(Decimal rhs) const {
    std::int64_t out;
    if (__builtin_sub_overflow(units_, rhs.units_, &out)) throw Error("decimal overflow in subtraction");
    return from_units(out);
}

}  // namespace groupform
