#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "entangled/dyadic.hpp"
#include "entangled/numbers.hpp"

namespace entangled {

// Multi-index of a grid cell at the function's resolution scale.
using CellKey = std::vector<std::int64_t>;

// An exact piecewise-constant function on the dyadic grid of scale
// `resolution` in d dimensions: constant on every dyadic cube of scale >=
// resolution, zero outside the (sparse) cell map. Immutable after
// construction; all operations are pure.
class StepFunction {
public:
    using CellMap = std::map<CellKey, Rational>;

    StepFunction() : dim_(1), res_(0) {}
    StepFunction(int dim, std::int64_t res) : dim_(dim), res_(res) { check_dim(); }
    StepFunction(int dim, std::int64_t res, CellMap cells);

    static StepFunction zero(int dim, std::int64_t res) { return StepFunction(dim, res); }
    // Indicator of a product of dyadic intervals, one per axis, materialized
    // at scale `res` (>= every interval's scale).
    static StepFunction indicator(const std::vector<DyadicInterval>& axes, std::int64_t res);
    static StepFunction indicator_square(const DyadicSquare& q, std::int64_t res) {
        return indicator(std::vector<DyadicInterval>{q.x, q.y}, res);
    }
    // The Haar function h_I = 1_left - 1_right, one-dimensional.
    static StepFunction haar(const DyadicInterval& I, std::int64_t res);
    static StepFunction constant_on(const std::vector<DyadicInterval>& axes, std::int64_t res,
                                    const Rational& value);
    // Constant on a product of per-axis cell-index ranges [lo, hi) at scale res.
    static StepFunction constant_on_cells(int dim, std::int64_t res,
                                          const std::vector<std::pair<std::int64_t, std::int64_t>>& ranges,
                                          const Rational& value);

    int dimension() const { return dim_; }
    std::int64_t resolution() const { return res_; }
    const CellMap& cells() const { return cells_; }
    bool is_zero() const { return cells_.empty(); }
    std::size_t cell_count() const { return cells_.size(); }

    // Measure of one grid cell, (2^-res)^dim.
    Rational cell_measure() const { return pow2(-res_ * dim_); }

    // Per-axis index range [lo, hi) of the nonzero cells; nullopt when zero.
    std::optional<std::pair<std::int64_t, std::int64_t>> support_range(int axis) const;
    // The support's axis projection as up to two dyadic intervals at the
    // coarsest scale covering it (two when the projection straddles 0).
    std::vector<DyadicInterval> support_cover(int axis) const;

    // Value on the cell with the given multi-index at scale >= resolution.
    Rational value_at(const CellKey& key, std::int64_t scale) const;
    Rational value_at(const CellKey& key) const { return value_at(key, res_); }

    StepFunction refine(std::int64_t new_res) const;

    StepFunction operator-() const;
    StepFunction scaled(const Rational& c) const;
    StepFunction abs() const;
    StepFunction squared() const;
    // Pointwise integer power (p >= 1).
    StepFunction pow(int p) const;

    friend StepFunction operator+(const StepFunction& a, const StepFunction& b);
    friend StepFunction operator-(const StepFunction& a, const StepFunction& b);
    // Pointwise product.
    friend StepFunction operator*(const StepFunction& a, const StepFunction& b);
    friend bool operator==(const StepFunction& a, const StepFunction& b);

    Rational integral() const;
    // Integral over a product of dyadic intervals (one per axis, any scales).
    Rational integral_over(const std::vector<DyadicInterval>& axes) const;
    Rational integral_over_square(const DyadicSquare& q) const {
        return integral_over(std::vector<DyadicInterval>{q.x, q.y});
    }
    Rational l1_norm_over(const std::vector<DyadicInterval>& axes) const;
    Rational l2_norm_squared() const;
    Rational max_abs() const;

    // Sum over cells of value * weight(cell's axis-interval), removing `axis`.
    // Weights are (interval, coefficient) pairs; a cell contributes its value
    // times coefficient times |cell interval ∩ weight interval|.
    StepFunction axis_weighted_reduce(int axis,
                                      const std::vector<std::pair<DyadicInterval, Rational>>& weights) const;

    StepFunction translated(const std::vector<std::int64_t>& cell_offsets) const;

private:
    void check_dim() const;
    void prune_zeros();

    int dim_;
    std::int64_t res_;
    CellMap cells_;
};

// Partial average over the bound axes: [F]_{x_a in I_a}. Binding every axis is
// not allowed here; use average_value for the full average.
StepFunction average(const StepFunction& f, const std::map<int, DyadicInterval>& bindings);
Rational average_value(const StepFunction& f, const std::map<int, DyadicInterval>& bindings);

// Partial pairing against the Haar function: <F>_{x_axis in I}.
StepFunction haar_average(const StepFunction& f, int axis, const DyadicInterval& I);
Rational haar_average_value(const StepFunction& f, int axis, const DyadicInterval& I);

// (f tensor g)(x, y) = f(x) g(y) for one-dimensional f, g.
StepFunction tensor(const StepFunction& f, const StepFunction& g);

}  // namespace entangled
