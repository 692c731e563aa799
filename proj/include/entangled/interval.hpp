#pragma once

#include "entangled/numbers.hpp"

namespace entangled {

// A certified enclosure [lo, hi] with exact rational endpoints.
struct RationalInterval {
    Rational lo;
    Rational hi;

    RationalInterval() = default;
    RationalInterval(Rational l, Rational h);
    static RationalInterval point(const Rational& v) { return {v, v}; }

    Rational width() const { return hi - lo; }
    bool contains(const Rational& v) const { return lo <= v && v <= hi; }

    friend RationalInterval operator+(const RationalInterval& a, const RationalInterval& b) {
        return {a.lo + b.lo, a.hi + b.hi};
    }
    // Product for nonnegative intervals.
    friend RationalInterval operator*(const RationalInterval& a, const RationalInterval& b);
};

// Certified enclosure of q^(1/d) for q >= 0, d >= 1, by exact bisection:
// lo^d <= q <= hi^d with relative width at most 2^-bits.
RationalInterval nth_root_interval(const Rational& q, int d, int bits = 64);

// Exact comparison b^(1/d2) >= a^(1/d1) for nonnegative rationals via cross
// powers (b^d1 vs a^d2).
bool root_ge(const Rational& b, int d2, const Rational& a, int d1);

}  // namespace entangled
