#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "entangled/numbers.hpp"

namespace entangled {

// The dyadic interval [2^(-k) l, 2^(-k) (l+1)), k = scale, l = index. Scales
// and indices may be negative; any two dyadic intervals are nested or disjoint.
struct DyadicInterval {
    std::int64_t scale = 0;
    std::int64_t index = 0;

    DyadicInterval() = default;
    DyadicInterval(std::int64_t k, std::int64_t l) : scale(k), index(l) {}

    DyadicRational left() const { return DyadicRational(BigInt(index), -scale); }
    DyadicRational right() const { return DyadicRational(BigInt(index + 1), -scale); }
    DyadicRational length() const { return DyadicRational::power_of_two(-scale); }
    Rational measure() const { return pow2(-scale); }

    DyadicInterval parent() const { return {scale - 1, floor_shift(index, 1)}; }
    DyadicInterval child(int which) const { return {scale + 1, 2 * index + which}; }
    DyadicInterval left_half() const { return child(0); }
    DyadicInterval right_half() const { return child(1); }

    // The ancestor at a coarser (or equal) scale.
    DyadicInterval ancestor_at(std::int64_t coarser_scale) const {
        return {coarser_scale, floor_shift(index, scale - coarser_scale)};
    }

    bool contains(const DyadicInterval& other) const {
        return other.scale >= scale && other.ancestor_at(scale).index == index;
    }
    bool disjoint(const DyadicInterval& other) const {
        return !contains(other) && !other.contains(*this);
    }

    // Index range [first, last) of this interval's cells at a finer scale.
    std::pair<std::int64_t, std::int64_t> cell_range_at(std::int64_t finer_scale) const {
        std::int64_t span = std::int64_t(1) << (finer_scale - scale);
        return {index * span, (index + 1) * span};
    }

    friend auto operator<=>(const DyadicInterval&, const DyadicInterval&) = default;
};

std::ostream& operator<<(std::ostream& os, const DyadicInterval& I);

// (left, right) halves; left U right = I, disjoint.
inline std::pair<DyadicInterval, DyadicInterval> interval_halves(const DyadicInterval& I) {
    return {I.left_half(), I.right_half()};
}

enum class IntervalRelation { Disjoint, FirstInSecond, SecondInFirst };

// Exactly one of {disjoint, first within second, second within first} holds;
// equal intervals report FirstInSecond.
IntervalRelation interval_relation(const DyadicInterval& a, const DyadicInterval& b);

// Length of the overlap of two dyadic intervals (the length of the finer one
// when nested, zero when disjoint).
Rational overlap_measure(const DyadicInterval& a, const DyadicInterval& b);

// A product of d >= 1 dyadic intervals of equal scale.
struct DyadicCube {
    std::vector<DyadicInterval> intervals;

    DyadicCube() = default;
    explicit DyadicCube(std::vector<DyadicInterval> axes);

    int dimension() const { return static_cast<int>(intervals.size()); }
    std::int64_t scale() const { return intervals.front().scale; }
    Rational measure() const;
    bool contains(const DyadicCube& other) const;

    friend auto operator<=>(const DyadicCube&, const DyadicCube&) = default;
};

std::ostream& operator<<(std::ostream& os, const DyadicCube& c);

// A dyadic square I x J in the plane.
struct DyadicSquare {
    DyadicInterval x;
    DyadicInterval y;

    DyadicSquare() = default;
    DyadicSquare(DyadicInterval i, DyadicInterval j);
    DyadicSquare(std::int64_t k, std::int64_t ix, std::int64_t jy)
        : x{k, ix}, y{k, jy} {}

    std::int64_t scale() const { return x.scale; }
    Rational measure() const { return x.measure() * y.measure(); }
    DyadicSquare parent() const { return {x.parent(), y.parent()}; }
    std::vector<DyadicSquare> children() const;
    bool contains(const DyadicSquare& o) const { return x.contains(o.x) && y.contains(o.y); }

    DyadicCube to_cube() const { return DyadicCube({x, y}); }

    friend auto operator<=>(const DyadicSquare&, const DyadicSquare&) = default;
};

std::ostream& operator<<(std::ostream& os, const DyadicSquare& q);

}  // namespace entangled
