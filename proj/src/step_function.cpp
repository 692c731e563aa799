#include "entangled/step_function.hpp"

#include <algorithm>

#include "entangled/errors.hpp"

namespace entangled {

void StepFunction::check_dim() const {
    if (dim_ < 1) throw Error("StepFunction: dimension must be >= 1");
}

void StepFunction::prune_zeros() {
    for (auto it = cells_.begin(); it != cells_.end();) {
        if (it->second == 0)
            it = cells_.erase(it);
        else
            ++it;
    }
}

StepFunction::StepFunction(int dim, std::int64_t res, CellMap cells)
    : dim_(dim), res_(res), cells_(std::move(cells)) {
    check_dim();
    for (const auto& [key, value] : cells_)
        if (static_cast<int>(key.size()) != dim_)
            throw DimensionMismatch("cell index arity does not match dimension");
    prune_zeros();
}

StepFunction StepFunction::indicator(const std::vector<DyadicInterval>& axes, std::int64_t res) {
    return constant_on(axes, res, Rational(1));
}

StepFunction StepFunction::constant_on(const std::vector<DyadicInterval>& axes, std::int64_t res,
                                       const Rational& value) {
    std::vector<std::pair<std::int64_t, std::int64_t>> ranges;
    for (const auto& I : axes) {
        if (I.scale > res) throw Error("indicator: interval finer than resolution");
        ranges.push_back(I.cell_range_at(res));
    }
    return constant_on_cells(static_cast<int>(axes.size()), res, ranges, value);
}

StepFunction StepFunction::constant_on_cells(
    int dim, std::int64_t res, const std::vector<std::pair<std::int64_t, std::int64_t>>& ranges,
    const Rational& value) {
    if (static_cast<int>(ranges.size()) != dim)
        throw DimensionMismatch("constant_on_cells: range arity mismatch");
    StepFunction out(dim, res);
    if (value == 0) return out;
    for (const auto& [lo, hi] : ranges)
        if (lo >= hi) return out;
    CellKey key(dim);
    for (int a = 0; a < dim; ++a) key[a] = ranges[a].first;
    while (true) {
        out.cells_[key] = value;
        int a = dim - 1;
        while (a >= 0 && ++key[a] == ranges[a].second) key[a] = ranges[a].first, --a;
        if (a < 0) break;
    }
    return out;
}

StepFunction StepFunction::haar(const DyadicInterval& I, std::int64_t res) {
    if (I.scale + 1 > res) throw Error("haar: resolution must refine the interval's halves");
    StepFunction out(1, res);
    auto [left, right] = interval_halves(I);
    for (auto [i, end] = left.cell_range_at(res); i < end; ++i) out.cells_[{i}] = 1;
    for (auto [i, end] = right.cell_range_at(res); i < end; ++i) out.cells_[{i}] = -1;
    return out;
}

std::optional<std::pair<std::int64_t, std::int64_t>> StepFunction::support_range(int axis) const {
    if (axis < 0 || axis >= dim_) throw AxisOutOfRange("axis " + std::to_string(axis));
    if (cells_.empty()) return std::nullopt;
    std::int64_t lo = cells_.begin()->first[axis], hi = lo;
    for (const auto& [key, value] : cells_) {
        lo = std::min(lo, key[axis]);
        hi = std::max(hi, key[axis]);
    }
    return std::make_pair(lo, hi + 1);
}

std::vector<DyadicInterval> StepFunction::support_cover(int axis) const {
    auto range = support_range(axis);
    if (!range) return {};
    auto cover_side = [&](std::int64_t lo, std::int64_t hi) {
        // Coarsest dyadic interval containing cells [lo, hi) on one side of 0.
        DyadicInterval I{res_, lo};
        while (!(I.cell_range_at(res_).first <= lo && hi <= I.cell_range_at(res_).second))
            I = I.parent();
        return I;
    };
    auto [lo, hi] = *range;
    if (lo >= 0) return {cover_side(lo, hi)};
    if (hi <= 0) return {cover_side(lo, hi)};
    return {cover_side(lo, 0), cover_side(0, hi)};
}

Rational StepFunction::value_at(const CellKey& key, std::int64_t scale) const {
    if (static_cast<int>(key.size()) != dim_) throw DimensionMismatch("value_at: bad index arity");
    if (scale < res_) throw Error("value_at: scale must be >= resolution");
    CellKey base(dim_);
    for (int a = 0; a < dim_; ++a) base[a] = floor_shift(key[a], scale - res_);
    auto it = cells_.find(base);
    return it == cells_.end() ? Rational(0) : it->second;
}

StepFunction StepFunction::refine(std::int64_t new_res) const {
    if (new_res < res_) throw Error("refine: cannot coarsen");
    if (new_res == res_) return *this;
    std::int64_t span = std::int64_t(1) << (new_res - res_);
    StepFunction out(dim_, new_res);
    for (const auto& [key, value] : cells_) {
        CellKey sub(dim_);
        std::vector<std::int64_t> offset(dim_, 0);
        while (true) {
            for (int a = 0; a < dim_; ++a) sub[a] = key[a] * span + offset[a];
            out.cells_[sub] = value;
            int a = dim_ - 1;
            while (a >= 0 && ++offset[a] == span) offset[a] = 0, --a;
            if (a < 0) break;
        }
    }
    return out;
}

StepFunction StepFunction::operator-() const { return scaled(Rational(-1)); }

StepFunction StepFunction::scaled(const Rational& c) const {
    StepFunction out(dim_, res_);
    if (c == 0) return out;
    for (const auto& [key, value] : cells_) out.cells_[key] = value * c;
    return out;
}

StepFunction StepFunction::abs() const {
    StepFunction out(dim_, res_);
    for (const auto& [key, value] : cells_) out.cells_[key] = rational_abs(value);
    return out;
}

StepFunction StepFunction::squared() const { return *this * *this; }

StepFunction StepFunction::pow(int p) const {
    if (p < 1) throw Error("pow: exponent must be >= 1");
    StepFunction out(dim_, res_);
    for (const auto& [key, value] : cells_) out.cells_[key] = rational_pow(value, p);
    return out;
}

static void require_same_shape(const StepFunction& a, const StepFunction& b) {
    if (a.dimension() != b.dimension())
        throw DimensionMismatch("step functions of different dimension");
}

StepFunction operator+(const StepFunction& a, const StepFunction& b) {
    require_same_shape(a, b);
    std::int64_t res = std::max(a.resolution(), b.resolution());
    StepFunction fa = a.refine(res), fb = b.refine(res);
    StepFunction::CellMap cells = fa.cells();
    for (const auto& [key, value] : fb.cells()) cells[key] += value;
    return StepFunction(a.dimension(), res, std::move(cells));
}

StepFunction operator-(const StepFunction& a, const StepFunction& b) { return a + (-b); }

StepFunction operator*(const StepFunction& a, const StepFunction& b) {
    require_same_shape(a, b);
    std::int64_t res = std::max(a.resolution(), b.resolution());
    StepFunction fa = a.refine(res), fb = b.refine(res);
    const auto& small = fa.cell_count() <= fb.cell_count() ? fa : fb;
    const auto& large = fa.cell_count() <= fb.cell_count() ? fb : fa;
    StepFunction::CellMap cells;
    for (const auto& [key, value] : small.cells()) {
        auto it = large.cells().find(key);
        if (it != large.cells().end()) cells[key] = value * it->second;
    }
    return StepFunction(a.dimension(), res, std::move(cells));
}

bool operator==(const StepFunction& a, const StepFunction& b) {
    if (a.dimension() != b.dimension()) return false;
    std::int64_t res = std::max(a.resolution(), b.resolution());
    return a.refine(res).cells() == b.refine(res).cells();
}

Rational StepFunction::integral() const {
    Rational sum(0);
    for (const auto& [key, value] : cells_) sum += value;
    return sum * cell_measure();
}

Rational StepFunction::integral_over(const std::vector<DyadicInterval>& axes) const {
    if (static_cast<int>(axes.size()) != dim_)
        throw DimensionMismatch("integral_over: axis count mismatch");
    Rational sum(0);
    for (const auto& [key, value] : cells_) {
        Rational w = value;
        for (int a = 0; a < dim_ && w != 0; ++a)
            w *= overlap_measure(DyadicInterval{res_, key[a]}, axes[a]);
        sum += w;
    }
    return sum;
}

Rational StepFunction::l1_norm_over(const std::vector<DyadicInterval>& axes) const {
    return abs().integral_over(axes);
}

Rational StepFunction::l2_norm_squared() const {
    Rational sum(0);
    for (const auto& [key, value] : cells_) sum += value * value;
    return sum * cell_measure();
}

Rational StepFunction::max_abs() const {
    Rational best(0);
    for (const auto& [key, value] : cells_) best = std::max(best, rational_abs(value));
    return best;
}

StepFunction StepFunction::axis_weighted_reduce(
    int axis, const std::vector<std::pair<DyadicInterval, Rational>>& weights) const {
    if (axis < 0 || axis >= dim_) throw AxisOutOfRange("axis " + std::to_string(axis));
    if (dim_ == 1) throw Error("axis_weighted_reduce: would leave dimension 0");
    StepFunction out(dim_ - 1, res_);
    for (const auto& [key, value] : cells_) {
        DyadicInterval cell{res_, key[axis]};
        Rational w(0);
        for (const auto& [I, coeff] : weights) w += coeff * overlap_measure(cell, I);
        if (w == 0) continue;
        CellKey rest;
        rest.reserve(dim_ - 1);
        for (int a = 0; a < dim_; ++a)
            if (a != axis) rest.push_back(key[a]);
        out.cells_[rest] += value * w;
    }
    out.prune_zeros();
    return out;
}

StepFunction StepFunction::translated(const std::vector<std::int64_t>& cell_offsets) const {
    if (static_cast<int>(cell_offsets.size()) != dim_)
        throw DimensionMismatch("translated: offset arity mismatch");
    StepFunction out(dim_, res_);
    for (const auto& [key, value] : cells_) {
        CellKey moved = key;
        for (int a = 0; a < dim_; ++a) moved[a] += cell_offsets[a];
        out.cells_[moved] = value;
    }
    return out;
}

// Reduces the bound axes in descending order so remaining axis numbers stay valid.
static std::vector<std::pair<int, DyadicInterval>> sorted_bindings(
    const StepFunction& f, const std::map<int, DyadicInterval>& bindings) {
    std::vector<std::pair<int, DyadicInterval>> out(bindings.begin(), bindings.end());
    for (const auto& [axis, I] : out)
        if (axis < 0 || axis >= f.dimension())
            throw AxisOutOfRange("binding axis " + std::to_string(axis));
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    return out;
}

StepFunction average(const StepFunction& f, const std::map<int, DyadicInterval>& bindings) {
    if (static_cast<int>(bindings.size()) >= f.dimension())
        throw Error("average: binding all axes yields a scalar; use average_value");
    StepFunction cur = f;
    for (const auto& [axis, I] : sorted_bindings(f, bindings))
        cur = cur.axis_weighted_reduce(axis, {{I, Rational(1) / I.measure()}});
    return cur;
}

Rational average_value(const StepFunction& f, const std::map<int, DyadicInterval>& bindings) {
    if (static_cast<int>(bindings.size()) != f.dimension())
        throw Error("average_value: every axis must be bound");
    Rational normalizer(1);
    std::vector<DyadicInterval> axes(f.dimension());
    for (const auto& [axis, I] : sorted_bindings(f, bindings)) {
        axes[axis] = I;
        normalizer *= I.measure();
    }
    return f.integral_over(axes) / normalizer;
}

StepFunction haar_average(const StepFunction& f, int axis, const DyadicInterval& I) {
    Rational inv = Rational(1) / I.measure();
    return f.axis_weighted_reduce(axis, {{I.left_half(), inv}, {I.right_half(), -inv}});
}

Rational haar_average_value(const StepFunction& f, int axis, const DyadicInterval& I) {
    if (f.dimension() != 1 || axis != 0)
        throw Error("haar_average_value: one-dimensional only");
    auto [left, right] = interval_halves(I);
    return (f.integral_over({left}) - f.integral_over({right})) / I.measure();
}

StepFunction tensor(const StepFunction& f, const StepFunction& g) {
    if (f.dimension() != 1 || g.dimension() != 1)
        throw DimensionMismatch("tensor: both factors must be one-dimensional");
    std::int64_t res = std::max(f.resolution(), g.resolution());
    StepFunction fa = f.refine(res), fb = g.refine(res);
    StepFunction::CellMap cells;
    for (const auto& [kf, vf] : fa.cells())
        for (const auto& [kg, vg] : fb.cells()) cells[{kf[0], kg[0]}] = vf * vg;
    return StepFunction(2, res, std::move(cells));
}

}  // namespace entangled
