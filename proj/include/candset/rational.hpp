#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace candset {

/**
 * Exact rational number on 64-bit numerator/denominator.
 *
 * Answers and arithmetic-step results compare as exact rationals, never as
 * binary floating point ("18" == "18.0", "1/3" != 0.33). Intermediate
 * products run through 128-bit arithmetic; anything that would not fit back
 * into 64 bits throws std::overflow_error.
 *
 * Invariants: den > 0, gcd(|num|, den) == 1, zero is 0/1.
 */
class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(std::int64_t value) : num_(value), den_(1) {}  // NOLINT: implicit by design
    Rational(std::int64_t num, std::int64_t den);

    /// Parses a plain decimal literal: optional sign, digits, optional
    /// fractional part ("-12", "3.50"). No exponent, no separators; returns
    /// nullopt on anything else or on overflow.
    static std::optional<Rational> parse_decimal(std::string_view text);

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    bool is_integer() const { return den_ == 1; }
    bool is_zero() const { return num_ == 0; }
    bool is_negative() const { return num_ < 0; }

    Rational operator-() const;
    Rational operator+(const Rational& rhs) const;
    Rational operator-(const Rational& rhs) const;
    Rational operator*(const Rational& rhs) const;
    /// Throws std::domain_error on division by zero.
    Rational operator/(const Rational& rhs) const;

    /// Integer power, negative exponents allowed (0 to a negative power
    /// throws std::domain_error).
    Rational pow_int(std::int64_t exponent) const;

    bool operator==(const Rational& rhs) const {
        return num_ == rhs.num_ && den_ == rhs.den_;
    }
    bool operator!=(const Rational& rhs) const { return !(*this == rhs); }
    bool operator<(const Rational& rhs) const;
    bool operator<=(const Rational& rhs) const { return *this < rhs || *this == rhs; }
    bool operator>(const Rational& rhs) const { return rhs < *this; }
    bool operator>=(const Rational& rhs) const { return rhs <= *this; }

    Rational abs() const;

    /// "n" for integers, "n/d" otherwise.
    std::string to_string() const;
    double to_double() const;

private:
    std::int64_t num_;
    std::int64_t den_;

    static Rational make_normalized(__int128 num, __int128 den);
};

}  // namespace candset
