#include "candset/rational.hpp"

#include <cctype>
#include <cstdlib>
#include <limits>
#include <numeric>

namespace candset {

namespace {

__int128 gcd128(__int128 a, __int128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        __int128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

std::int64_t narrow_checked(__int128 v) {
    if (v > std::numeric_limits<std::int64_t>::max() ||
        v < std::numeric_limits<std::int64_t>::min()) {
        throw std::overflow_error("rational arithmetic overflow");
    }
    return static_cast<std::int64_t>(v);
}

}  // namespace

Rational Rational::make_normalized(__int128 num, __int128 den) {
    if (den == 0) throw std::domain_error("rational division by zero");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    if (num == 0) return Rational();
    __int128 g = gcd128(num, den);
    Rational r;
    r.num_ = narrow_checked(num / g);
    r.den_ = narrow_checked(den / g);
    return r;
}

Rational::Rational(std::int64_t num, std::int64_t den) {
    *this = make_normalized(num, den);
}

Rational Rational::operator-() const {
    Rational r;
    r.num_ = narrow_checked(-static_cast<__int128>(num_));
    r.den_ = den_;
    return r;
}

Rational Rational::operator+(const Rational& rhs) const {
    __int128 n = static_cast<__int128>(num_) * rhs.den_ +
                 static_cast<__int128>(rhs.num_) * den_;
    __int128 d = static_cast<__int128>(den_) * rhs.den_;
    return make_normalized(n, d);
}

Rational Rational::operator-(const Rational& rhs) const {
    __int128 n = static_cast<__int128>(num_) * rhs.den_ -
                 static_cast<__int128>(rhs.num_) * den_;
    __int128 d = static_cast<__int128>(den_) * rhs.den_;
    return make_normalized(n, d);
}

Rational Rational::operator*(const Rational& rhs) const {
    __int128 n = static_cast<__int128>(num_) * rhs.num_;
    __int128 d = static_cast<__int128>(den_) * rhs.den_;
    return make_normalized(n, d);
}

Rational Rational::operator/(const Rational& rhs) const {
    if (rhs.num_ == 0) throw std::domain_error("rational division by zero");
    __int128 n = static_cast<__int128>(num_) * rhs.den_;
    __int128 d = static_cast<__int128>(den_) * rhs.num_;
    return make_normalized(n, d);
}

Rational Rational::pow_int(std::int64_t exponent) const {
    if (exponent < 0) {
        if (num_ == 0) throw std::domain_error("zero to a negative power");
        Rational inv;
        inv.num_ = den_;
        inv.den_ = num_;
        if (inv.den_ < 0) {
            inv.num_ = -inv.num_;
            inv.den_ = -inv.den_;
        }
        return inv.pow_int(-exponent);
    }
    Rational result(1);
    Rational base = *this;
    std::int64_t e = exponent;
    while (e > 0) {
        if (e & 1) result = result * base;
        base = (e > 1) ? base * base : base;
        e >>= 1;
    }
    return result;
}

bool Rational::operator<(const Rational& rhs) const {
    return static_cast<__int128>(num_) * rhs.den_ <
           static_cast<__int128>(rhs.num_) * den_;
}

Rational Rational::abs() const {
    return num_ < 0 ? -*this : *this;
}

std::string Rational::to_string() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

double Rational::to_double() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
}

std::optional<Rational> Rational::parse_decimal(std::string_view text) {
    if (text.empty()) return std::nullopt;
    std::size_t i = 0;
    bool negative = false;
    if (text[i] == '+' || text[i] == '-') {
        negative = (text[i] == '-');
        ++i;
    }
    __int128 mantissa = 0;
    std::size_t int_digits = 0;
    const __int128 limit = std::numeric_limits<std::int64_t>::max();
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
        mantissa = mantissa * 10 + (text[i] - '0');
        if (mantissa > limit) return std::nullopt;
        ++int_digits;
        ++i;
    }
    if (int_digits == 0) return std::nullopt;
    __int128 den = 1;
    if (i < text.size() && text[i] == '.') {
        ++i;
        std::size_t frac_digits = 0;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
            mantissa = mantissa * 10 + (text[i] - '0');
            den *= 10;
            if (mantissa > limit || den > limit) return std::nullopt;
            ++frac_digits;
            ++i;
        }
        if (frac_digits == 0) return std::nullopt;
    }
    if (i != text.size()) return std::nullopt;
    if (negative) mantissa = -mantissa;
    try {
        return make_normalized(mantissa, den);
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

}  // namespace candset
