#pragma once

#include <optional>
#include <vector>

#include "entangled/graph.hpp"
#include "entangled/kernel.hpp"
#include "entangled/paraproduct.hpp"
#include "entangled/radical.hpp"

namespace entangled {

struct CounterexampleConfig {
    int r = 1;  // positive
    int n = 2;  // >= 2
};

// One x-band of the input functions: value (2^l / (l(l+1)))^(1/n) on
// [2^-l, 2^-l+1) x [0,1).
struct CounterexampleBand {
    int level = 1;
    DyadicInterval x_band;
    RadicalValue value;
};

// The input function F_{1,j} = f tensor 1_{[0,1)} with radical band values,
// stored run-length by band (the function is constant in y on [0,1)).
class RadicalStepFunction {
public:
    RadicalStepFunction(int r, int n);

    std::int64_t resolution() const { return r_; }
    const std::vector<CounterexampleBand>& bands() const { return bands_; }

    // Value on the cell (ix, iy) at the resolution scale; nullopt when zero.
    std::optional<RadicalValue> value_at(std::int64_t ix, std::int64_t iy) const;

    // f^n on the band collapsed to an exact rational via radical_product.
    Rational band_power(int level) const;

    // ||F||_{L^n}^n, exact (the n-th power keeps it rational).
    Rational ln_norm_pow() const;

private:
    int r_;
    int n_;
    std::vector<CounterexampleBand> bands_;
};

// The n identical input functions of the construction.
std::vector<RadicalStepFunction> build_functions(const CounterexampleConfig& cfg);

// The coefficient field of the kernel: lambda = 1 exactly on I x J with
// I = [0, 2^-k), J inside [0,1), k < r. Materialized; desk scale (r <= 20).
HaarCoefficientField counterexample_field(int r, int n);

// Structured evaluation of Lambda via per-square inner sums. Squares of one
// scale share the inner sum (the inputs are y-constant on [0,1), so the J
// position only enters through |J|); the group contributes 2^k times the
// single-square value. Every radical product collapses to a rational.
Rational counterexample_lambda(const CounterexampleConfig& cfg);

// Same value without grouping, square by square; r <= 10.
Rational counterexample_lambda_per_square(const CounterexampleConfig& cfg);

// Term-by-term series for Lambda (independent oracle).
Rational counterexample_series(int r);

// The closed-form expression sum 1/(k+2) - (r-1)/(r+1) - 1 + 1/(r+2). Note:
// it differs from the term-by-term series by exactly 1/(r+2); the report
// carries both and flags the mismatch.
Rational counterexample_closed_form(int r);

// ||lambda||_bmo^2 over the structured field: candidates Q0 = [0,2^-k0) x J0
// (only those contain support squares), position-free by translation in J.
Rational counterexample_bmo_squared(int r);

// WBP scan over position classes: for Q = I x J at scale q the ratio depends
// only on the bit length of I's index (which k's contribute and the single
// possible negative sign); J enters only through membership in [0,1).
struct StructuredWbp {
    Rational max_ratio;
    DyadicSquare witness;
};
StructuredWbp counterexample_wbp(int r, int n, int max_depth);

// Class-wise verification of the kernel size estimate: for every minimal
// common scale k_y of the y's, sum over contributing k of 2^(k(n-1)) stays
// below (2^-k_y)^(1-n) * 2^(n-1) / (2^(n-1) - 1).
bool counterexample_size_check(int r, int n);

struct CounterexampleReport {
    int r = 0;
    int n = 0;
    Rational lambda;             // structured evaluation
    Rational series;             // term-by-term oracle
    bool series_match = false;   // lambda == series
    Rational closed_form;        // the quoted closed form
    bool closed_form_match = false;
    Rational closed_form_gap;    // closed_form - lambda
    Rational f_norm_pow;         // ||F||_{L^n}^n
    bool f_norm_match = false;   // == 1 - 1/(r+1)
    Rational bmo_squared;
    bool bmo_match = false;      // == 2 - 2^(1-r)
    bool bmo_le_2 = false;
    Rational wbp_ratio;
    DyadicSquare wbp_witness;
    bool wbp_le_1 = false;
    bool size_ok = false;
    std::optional<Rational> dense_lambda;  // r <= 3 cross-check
    bool dense_match = true;
};

CounterexampleReport run_counterexample(const CounterexampleConfig& cfg, bool dense_check = false);

struct DivergenceTable {
    std::vector<CounterexampleReport> rows;
    bool lambda_increasing_from_2 = false;  // strict growth for r >= 2
    bool hypotheses_hold = false;           // wbp <= 1, bmo^2 <= 2, size ok on every row
};

// Rows are independent and computed in parallel when threads > 1; exact
// arithmetic keeps the result identical either way.
DivergenceTable divergence_table(int r_max, int n, bool dense_check_small = false,
                                 int threads = 1);

}  // namespace entangled
