#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "entangled/step_function.hpp"

namespace entangled {

// A perfect dyadic Calderon-Zygmund kernel on R^(m+n): bounded, compactly
// supported (the step body is the declared support), and constant on every
// dyadic cube disjoint from the diagonal D = {x_1 = ... = x_m, y_1 = ... = y_n}.
// Axes 0..m-1 are the x's, m..m+n-1 the y's.
struct PerfectKernel {
    int m = 1;
    int n = 1;
    StepFunction body;
    std::optional<Rational> declared_size_constant;

    PerfectKernel() = default;
    PerfectKernel(int m_, int n_, StepFunction body_,
                  std::optional<Rational> declared = std::nullopt);

    std::int64_t resolution() const { return body.resolution(); }
    int dimension() const { return m + n; }

    // Union of the support's cell-index ranges over the x-axes (resp. y-axes)
    // at the body resolution; nullopt for the zero kernel.
    std::optional<std::pair<std::int64_t, std::int64_t>> x_support_range() const;
    std::optional<std::pair<std::int64_t, std::int64_t>> y_support_range() const;

    // Coarsest scale at which every axis projection of the support is covered
    // by at most two dyadic intervals (two only when it straddles 0).
    std::int64_t covering_scale() const;

    // The 2D box (x-range, y-range) padded by `pad` support-widths per side,
    // as cell ranges at the body resolution. T(1)-type inputs are indicators
    // of this box.
    std::pair<std::pair<std::int64_t, std::int64_t>, std::pair<std::int64_t, std::int64_t>>
    padded_box(int pad = 1) const;
};

struct DiagonalViolation {
    DyadicCube cube;
    Rational value_a;
    Rational value_b;
};

struct DiagonalReport {
    std::vector<DiagonalViolation> violations;
    bool valid() const { return violations.empty(); }
};

// Checks constancy on every dyadic cube disjoint from D, at scales from
// resolution - 1 up to the covering scale - 1. Coarser cubes repeat the
// per-axis sign-choice cases of scale covering - 1 with the same support
// intersection, so that single scale decides them all.
DiagonalReport validate_diagonal_constancy(const PerfectKernel& k);

struct SizeReport {
    Rational constant;                  // sup over cells of |K| * w_min^(m+n-2)
    std::vector<CellKey> vacuous_cells; // diagonal-touching cells with nonzero value
};

// Smallest C with |K| <= C * w^(2-m-n) at each cell's minimizing off-diagonal
// corner, where w is the pairwise coordinate-distance sum. Requires m+n >= 3.
SizeReport size_constant_report(const PerfectKernel& k);
Rational size_constant(const PerfectKernel& k);

// K(x1,x2,y1,y2) = kappa(x1-x2, y1-y2) sampled at cell-corner differences on
// the grid of kappa's resolution, truncated to the declared support box
// (one interval per axis).
PerfectKernel kernel_from_difference(const StepFunction& kappa,
                                     const std::vector<DyadicInterval>& support_box);

// The explicit m = 1 kernel of the unboundedness construction:
//   K(x, y_1..y_n) = sum over I x J with I = [0, 2^-k), J within [0,1),
//   k < r, of |I|^(1-n) h_I(x) 1_J(y_1) ... 1_J(y_n),
// materialized densely at resolution r on [0,1)^(1+n). Desk-scale only.
PerfectKernel counterexample_kernel(int r, int n);

}  // namespace entangled
