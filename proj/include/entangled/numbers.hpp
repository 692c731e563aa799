#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <type_traits>
#include <utility>

#include "entangled/errors.hpp"

namespace entangled {

using BigInt = boost::multiprecision::cpp_int;

// Exact rational number in canonical form: denominator > 0 and
// gcd(|numerator|, denominator) = 1; zero is 0/1.
class Rational {
public:
    Rational() : num_(0), den_(1) {}
    template <typename I, std::enable_if_t<std::is_integral_v<I>>* = nullptr>
    Rational(I value) : num_(value), den_(1) {}
    Rational(BigInt value) : num_(std::move(value)), den_(1) {}
    Rational(BigInt num, BigInt den);
    template <typename I, typename J, std::enable_if_t<std::is_integral_v<I>>* = nullptr,
              std::enable_if_t<std::is_integral_v<J>>* = nullptr>
    Rational(I num, J den) : Rational(BigInt(num), BigInt(den)) {}

    const BigInt& numerator() const { return num_; }
    const BigInt& denominator() const { return den_; }
    bool is_zero() const { return num_ == 0; }
    int sign() const { return num_ == 0 ? 0 : (num_ < 0 ? -1 : 1); }

    Rational operator-() const;
    Rational& operator+=(const Rational& o);
    Rational& operator-=(const Rational& o);
    Rational& operator*=(const Rational& o);
    Rational& operator/=(const Rational& o);

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        return a.num_ * b.den_ < b.num_ * a.den_;
    }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

private:
    void normalize();

    BigInt num_;
    BigInt den_;
};

std::ostream& operator<<(std::ostream& os, const Rational& q);

inline const BigInt& numerator_of(const Rational& q) { return q.numerator(); }
inline const BigInt& denominator_of(const Rational& q) { return q.denominator(); }

// 2^e as an exact rational, e of either sign.
Rational pow2(std::int64_t e);

// q^e for integer e; q must be nonzero when e < 0.
Rational rational_pow(const Rational& q, std::int64_t e);

Rational rational_abs(const Rational& q);

// Canonical "num/den" rendering (always with the slash, denominator >= 1).
std::string to_fraction_string(const Rational& q);

// Display-only decimal rendering with `digits` digits after the point,
// truncated toward zero. Never used in comparisons.
std::string to_decimal_string(const Rational& q, unsigned digits);

// Parses "num/den" or a bare integer. Throws Error on malformed input or
// zero denominator.
Rational parse_rational(const std::string& token);

// Floor division by a power of two, correct for negative values.
inline std::int64_t floor_shift(std::int64_t v, std::int64_t bits) {
    return bits <= 0 ? v : (v >> bits);
}

// A dyadic rational mantissa * 2^exponent in canonical form: the mantissa is
// odd or zero, and zero carries exponent 0. Closed under +, -, *; division is
// provided for powers of two only. Everything else promotes to Rational.
class DyadicRational {
public:
    DyadicRational() : mantissa_(0), exponent_(0) {}
    DyadicRational(BigInt mantissa, std::int64_t exponent);
    explicit DyadicRational(const BigInt& integer) : DyadicRational(integer, 0) {}
    explicit DyadicRational(std::int64_t integer) : DyadicRational(BigInt(integer), 0) {}

    static DyadicRational power_of_two(std::int64_t e) { return DyadicRational(BigInt(1), e); }

    const BigInt& mantissa() const { return mantissa_; }
    std::int64_t exponent() const { return exponent_; }
    bool is_zero() const { return mantissa_ == 0; }

    Rational to_rational() const;

    DyadicRational operator-() const;
    DyadicRational& operator+=(const DyadicRational& o);
    DyadicRational& operator-=(const DyadicRational& o);
    DyadicRational& operator*=(const DyadicRational& o);

    friend DyadicRational operator+(DyadicRational a, const DyadicRational& b) { return a += b; }
    friend DyadicRational operator-(DyadicRational a, const DyadicRational& b) { return a -= b; }
    friend DyadicRational operator*(DyadicRational a, const DyadicRational& b) { return a *= b; }

    // Exact division by 2^e.
    DyadicRational div_pow2(std::int64_t e) const { return DyadicRational(mantissa_, exponent_ - e); }

    friend bool operator==(const DyadicRational& a, const DyadicRational& b) {
        return a.mantissa_ == b.mantissa_ && a.exponent_ == b.exponent_;
    }
    friend bool operator!=(const DyadicRational& a, const DyadicRational& b) { return !(a == b); }
    friend bool operator<(const DyadicRational& a, const DyadicRational& b);

private:
    BigInt mantissa_;
    std::int64_t exponent_;
};

std::ostream& operator<<(std::ostream& os, const DyadicRational& d);

}  // namespace entangled
