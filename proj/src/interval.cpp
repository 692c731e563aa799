#include "entangled/interval.hpp"

#include "entangled/errors.hpp"

namespace entangled {

RationalInterval::RationalInterval(Rational l, Rational h) : lo(std::move(l)), hi(std::move(h)) {
    if (lo > hi) throw Error("RationalInterval: lo > hi");
}

RationalInterval operator*(const RationalInterval& a, const RationalInterval& b) {
    if (a.lo < 0 || b.lo < 0) throw Error("interval product: nonnegative operands only");
    return {a.lo * b.lo, a.hi * b.hi};
}

RationalInterval nth_root_interval(const Rational& q, int d, int bits) {
    if (q < 0) throw Error("nth_root_interval: negative radicand");
    if (d < 1) throw Error("nth_root_interval: d must be >= 1");
    if (q == 0) return RationalInterval::point(Rational(0));
    if (d == 1 || q == 1) return RationalInterval::point(d == 1 ? q : Rational(1));
    Rational lo = std::min(q, Rational(1)), hi = std::max(q, Rational(1));
    const Rational tol = pow2(-bits);
    while (hi - lo > hi * tol) {
        Rational mid = (lo + hi) / 2;
        if (rational_pow(mid, d) <= q)
            lo = mid;
        else
            hi = mid;
    }
    return {lo, hi};
}

bool root_ge(const Rational& b, int d2, const Rational& a, int d1) {
    if (a < 0 || b < 0) throw Error("root_ge: nonnegative arguments only");
    return rational_pow(b, d1) >= rational_pow(a, d2);
}

}  // namespace entangled
