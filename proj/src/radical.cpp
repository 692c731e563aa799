#include "entangled/radical.hpp"

namespace entangled {

RadicalValue::RadicalValue(Rational b, Rational p) : base(std::move(b)), power(std::move(p)) {
    if (base < 0) throw Error("RadicalValue: negative base");
    if (base == 0 && power <= 0) throw Error("RadicalValue: 0 base requires positive power");
}

Rational RadicalValue::collapse() const {
    if (!power_is_integer())
        throw IrrationalResult("radical power " + to_fraction_string(power) + " is not an integer");
    std::int64_t e = static_cast<std::int64_t>(numerator_of(power));
    if (base == 0) return Rational(0);
    return rational_pow(base, e);
}

RadicalValue& RadicalValue::operator*=(const RadicalValue& o) {
    if (base != o.base)
        throw MixedBases("product of radicals with bases " + to_fraction_string(base) + " and " +
                         to_fraction_string(o.base));
    power += o.power;
    return *this;
}

Rational radical_product(const std::vector<RadicalValue>& values) {
    if (values.empty()) return Rational(1);
    bool same_base = true;
    for (const auto& v : values) same_base = same_base && v.base == values.front().base;
    if (same_base) {
        Rational total_power(0);
        for (const auto& v : values) total_power += v.power;
        return RadicalValue(values.front().base, total_power).collapse();
    }
    Rational acc(1);
    for (const auto& v : values) {
        if (!v.power_is_integer())
            throw MixedBases("distinct bases with fractional power " + to_fraction_string(v.power));
        acc *= v.collapse();
    }
    return acc;
}

}  // namespace entangled
