#include "entangled/numbers.hpp"

#include <ostream>
#include <sstream>

namespace entangled {

Rational::Rational(BigInt num, BigInt den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_ == 0) throw Error("Rational: zero denominator");
    normalize();
}

void Rational::normalize() {
    if (den_ < 0) {
        num_ = -num_;
        den_ = -den_;
    }
    if (num_ == 0) {
        den_ = 1;
        return;
    }
    BigInt g = boost::multiprecision::gcd(num_, den_);
    if (g > 1) {
        num_ /= g;
        den_ /= g;
    }
}

Rational Rational::operator-() const {
    Rational out;
    out.num_ = -num_;
    out.den_ = den_;
    return out;
}

Rational& Rational::operator+=(const Rational& o) {
    num_ = num_ * o.den_ + o.num_ * den_;
    den_ *= o.den_;
    normalize();
    return *this;
}

Rational& Rational::operator-=(const Rational& o) {
    num_ = num_ * o.den_ - o.num_ * den_;
    den_ *= o.den_;
    normalize();
    return *this;
}

Rational& Rational::operator*=(const Rational& o) {
    // Cross-reduce first to keep intermediates small.
    BigInt g1 = boost::multiprecision::gcd(num_, o.den_);
    BigInt g2 = boost::multiprecision::gcd(o.num_, den_);
    num_ = (num_ / g1) * (o.num_ / g2);
    den_ = (den_ / g2) * (o.den_ / g1);
    if (num_ == 0) den_ = 1;
    return *this;
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.num_ == 0) throw Error("Rational: division by zero");
    Rational inv;
    inv.num_ = o.num_ < 0 ? -o.den_ : o.den_;
    inv.den_ = boost::multiprecision::abs(o.num_);
    return *this *= inv;
}

std::ostream& operator<<(std::ostream& os, const Rational& q) {
    return os << q.numerator() << "/" << q.denominator();
}

Rational pow2(std::int64_t e) {
    BigInt p = BigInt(1) << static_cast<unsigned>(e < 0 ? -e : e);
    return e >= 0 ? Rational(p) : Rational(BigInt(1), p);
}

Rational rational_pow(const Rational& q, std::int64_t e) {
    if (e == 0) return Rational(1);
    if (e < 0) {
        if (q == 0) throw Error("rational_pow: zero base with negative exponent");
        return rational_pow(Rational(denominator_of(q), numerator_of(q)), -e);
    }
    Rational acc(1), base = q;
    std::int64_t k = e;
    while (k > 0) {
        if (k & 1) acc *= base;
        base *= base;
        k >>= 1;
    }
    return acc;
}

Rational rational_abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

std::string to_fraction_string(const Rational& q) {
    std::ostringstream os;
    os << numerator_of(q) << "/" << denominator_of(q);
    return os.str();
}

std::string to_decimal_string(const Rational& q, unsigned digits) {
    BigInt num = numerator_of(q), den = denominator_of(q);
    bool neg = num < 0;
    if (neg) num = -num;
    BigInt scale = 1;
    for (unsigned i = 0; i < digits; ++i) scale *= 10;
    BigInt whole = num / den;
    BigInt frac = ((num - whole * den) * scale) / den;
    std::ostringstream os;
    if (neg && (whole != 0 || frac != 0)) os << '-';
    os << whole;
    if (digits > 0) {
        std::string f = frac.str();
        os << '.' << std::string(digits - f.size(), '0') << f;
    }
    return os.str();
}

Rational parse_rational(const std::string& token) {
    auto slash = token.find('/');
    try {
        if (slash == std::string::npos) return Rational(BigInt(token));
        BigInt num(token.substr(0, slash));
        BigInt den(token.substr(slash + 1));
        if (den == 0) throw Error("zero denominator in '" + token + "'");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        return Rational(num, den);
    } catch (const std::runtime_error& e) {
        throw Error("bad rational '" + token + "': " + e.what());
    }
}

DyadicRational::DyadicRational(BigInt mantissa, std::int64_t exponent)
    : mantissa_(std::move(mantissa)), exponent_(exponent) {
    if (mantissa_ == 0) {
        exponent_ = 0;
        return;
    }
    while ((mantissa_ & 1) == 0) {
        mantissa_ >>= 1;
        ++exponent_;
    }
}

Rational DyadicRational::to_rational() const {
    return Rational(mantissa_) * pow2(exponent_);
}

DyadicRational DyadicRational::operator-() const { return DyadicRational(-mantissa_, exponent_); }

DyadicRational& DyadicRational::operator+=(const DyadicRational& o) {
    if (o.is_zero()) return *this;
    if (is_zero()) return *this = o;
    std::int64_t e = std::min(exponent_, o.exponent_);
    BigInt m = (mantissa_ << static_cast<unsigned>(exponent_ - e)) +
               (o.mantissa_ << static_cast<unsigned>(o.exponent_ - e));
    return *this = DyadicRational(std::move(m), e);
}

DyadicRational& DyadicRational::operator-=(const DyadicRational& o) { return *this += -o; }

DyadicRational& DyadicRational::operator*=(const DyadicRational& o) {
    if (is_zero() || o.is_zero()) return *this = DyadicRational();
    mantissa_ *= o.mantissa_;
    exponent_ += o.exponent_;
    return *this;
}

bool operator<(const DyadicRational& a, const DyadicRational& b) {
    std::int64_t e = std::min(a.exponent(), b.exponent());
    return (a.mantissa() << static_cast<unsigned>(a.exponent() - e)) <
           (b.mantissa() << static_cast<unsigned>(b.exponent() - e));
}

std::ostream& operator<<(std::ostream& os, const DyadicRational& d) {
    return os << d.mantissa() << "*2^" << d.exponent();
}

}  // namespace entangled
