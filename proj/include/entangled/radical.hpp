#pragma once

#include <vector>

#include "entangled/numbers.hpp"

namespace entangled {

// base^power with a nonnegative rational base and a rational exponent.
// Quarantined to the counterexample machinery; core numeric paths never
// produce one. Products of equal-base values add powers; once the power is an
// integer the value collapses to an exact Rational.
struct RadicalValue {
    Rational base;   // >= 0
    Rational power;

    RadicalValue(Rational b, Rational p);

    bool power_is_integer() const { return denominator_of(power) == 1; }

    // Exact value when the power is an integer; throws IrrationalResult otherwise.
    Rational collapse() const;

    // Product with an equal-base factor; throws MixedBases otherwise.
    RadicalValue& operator*=(const RadicalValue& o);
    friend RadicalValue operator*(RadicalValue a, const RadicalValue& b) { return a *= b; }

    friend bool operator==(const RadicalValue& a, const RadicalValue& b) {
        return a.base == b.base && a.power == b.power;
    }
};

// Collapses a product of radical values to an exact Rational. All factors must
// share one base (powers are summed), or every factor must carry an integer
// power. Errors: IrrationalResult, MixedBases.
Rational radical_product(const std::vector<RadicalValue>& values);

}  // namespace entangled
