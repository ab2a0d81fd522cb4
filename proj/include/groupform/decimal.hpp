#pragma once

// Fixed-point decimal with six fractional digits.
//
// Scores, numeric attribute values and constraint thresholds are compared
// and summed exactly; aggregate thresholds must not flip on binary float
// representation error. All arithmetic is over scaled 64-bit integers.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace groupform {

class Decimal {
public:
    static constexpr std::int64_t kScale = 1'000'000;  // 10^6, six fractional digits

    constexpr Decimal() = default;

    static constexpr Decimal from_units(std::int64_t units) {
        Decimal d;
        d.units_ = units;
        return d;
    }

    static constexpr Decimal from_int(std::int64_t value) { return from_units(value * kScale); }

    // Exact parse of [-]digits[.digits]; rejects anything else or more than
    // six fractional digits (callers that want rounding use parse_rounded).
    static std::optional<Decimal> parse(std::string_view text);

    // Like parse but rounds excess fractional digits half away from zero;
    // *rounded reports whether precision was dropped.
    static std::optional<Decimal> parse_rounded(std::string_view text, bool* rounded = nullptr);

    // Nearest representable value. Used for JSON interchange, where numbers
    // arrive as doubles.
    static Decimal from_double(double value);

    // num/den scaled to six digits, truncated toward zero. den must be nonzero.
    static Decimal from_fraction(std::int64_t num, std::int64_t den);

    std::int64_t units() const { return units_; }
    double to_double() const { return static_cast<double>(units_) / kScale; }

    // Canonical form: no trailing fractional zeros, no exponent. parse(str()) == *this.
    std::string str() const;

    bool is_zero() const { return units_ == 0; }

    Decimal operator+(Decimal rhs) const;
    Decimal operator-(Decimal rhs) const;
    Decimal operator-() const { return from_units(-units_); }
    Decimal& operator+=(Decimal rhs) { return *this = *this + rhs; }

    friend bool operator==(Decimal a, Decimal b) { return a.units_ == b.units_; }
    friend bool operator!=(Decimal a, Decimal b) { return a.units_ != b.units_; }
    friend bool operator<(Decimal a, Decimal b) { return a.units_ < b.units_; }
    friend bool operator<=(Decimal a, Decimal b) { return a.units_ <= b.units_; }
    friend bool operator>(Decimal a, Decimal b) { return a.units_ > b.units_; }
    friend bool operator>=(Decimal a, Decimal b) { return a.units_ >= b.units_; }

private:
    std::int64_t units_ = 0;
};

constexpr Decimal kDecimalOne = Decimal::from_units(Decimal::kScale);
constexpr Decimal kDecimalZero = Decimal::from_units(0);

}  // namespace groupform
