#include "entangled/dyadic.hpp"

#include <ostream>

namespace entangled {

std::ostream& operator<<(std::ostream& os, const DyadicInterval& I) {
    return os << "[2^" << -I.scale << "*" << I.index << ", 2^" << -I.scale << "*" << I.index + 1
              << ")";
}

IntervalRelation interval_relation(const DyadicInterval& a, const DyadicInterval& b) {
    if (b.contains(a)) return IntervalRelation::FirstInSecond;
    if (a.contains(b)) return IntervalRelation::SecondInFirst;
    return IntervalRelation::Disjoint;
}

Rational overlap_measure(const DyadicInterval& a, const DyadicInterval& b) {
    switch (interval_relation(a, b)) {
        case IntervalRelation::FirstInSecond: return a.measure();
        case IntervalRelation::SecondInFirst: return b.measure();
        default: return Rational(0);
    }
}

DyadicCube::DyadicCube(std::vector<DyadicInterval> axes) : intervals(std::move(axes)) {
    if (intervals.empty()) throw Error("DyadicCube: dimension must be >= 1");
    for (const auto& I : intervals)
        if (I.scale != intervals.front().scale)
            throw Error("DyadicCube: intervals must share one scale");
}

Rational DyadicCube::measure() const {
    Rational m(1);
    for (const auto& I : intervals) m *= I.measure();
    return m;
}

bool DyadicCube::contains(const DyadicCube& other) const {
    if (other.dimension() != dimension()) return false;
    for (int a = 0; a < dimension(); ++a)
        if (!intervals[a].contains(other.intervals[a])) return false;
    return true;
}

std::ostream& operator<<(std::ostream& os, const DyadicCube& c) {
    for (int a = 0; a < c.dimension(); ++a) os << (a ? " x " : "") << c.intervals[a];
    return os;
}

DyadicSquare::DyadicSquare(DyadicInterval i, DyadicInterval j) : x(i), y(j) {
    if (x.scale != y.scale) throw Error("DyadicSquare: intervals must share one scale");
}

std::vector<DyadicSquare> DyadicSquare::children() const {
    std::vector<DyadicSquare> out;
    out.reserve(4);
    for (int cx = 0; cx < 2; ++cx)
        for (int cy = 0; cy < 2; ++cy) out.push_back({x.child(cx), y.child(cy)});
    return out;
}

std::ostream& operator<<(std::ostream& os, const DyadicSquare& q) {
    return os << q.x << " x " << q.y;
}

}  // namespace entangled
