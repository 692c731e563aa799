#pragma once

#include <random>

#include "entangled/paraproduct.hpp"

namespace entangled::testing {

using Rng = std::mt19937_64;

inline Rational random_rational(Rng& rng, int max_num = 8, int max_den = 8) {
    std::uniform_int_distribution<int> num(-max_num, max_num), den(1, max_den);
    return Rational(num(rng), den(rng));
}

// Sparse random 2D step function on [0,1)^2 at the given resolution.
inline StepFunction random_step_2d(Rng& rng, std::int64_t res, int cells, bool nonneg = false) {
    std::uniform_int_distribution<std::int64_t> idx(0, (std::int64_t(1) << res) - 1);
    StepFunction::CellMap map;
    for (int c = 0; c < cells; ++c) {
        Rational v = random_rational(rng);
        if (nonneg) v = rational_abs(v);
        map[{idx(rng), idx(rng)}] = v;
    }
    return StepFunction(2, res, std::move(map));
}

inline DyadicSquare random_square_in_unit(Rng& rng, std::int64_t max_scale) {
    std::uniform_int_distribution<std::int64_t> sd(0, max_scale);
    std::int64_t s = sd(rng);
    std::uniform_int_distribution<std::int64_t> idx(0, (std::int64_t(1) << s) - 1);
    return DyadicSquare{s, idx(rng), idx(rng)};
}

// Sparse random coefficient field for one signature, squares inside [0,1)^2
// with scales in [0, max_scale].
inline HaarCoefficientField random_field(Rng& rng, const Signature& sig, std::int64_t max_scale,
                                         int squares) {
    HaarCoefficientField field{sig, {}};
    for (int c = 0; c < squares; ++c) {
        Rational v = random_rational(rng);
        if (v != 0) field.coeffs[random_square_in_unit(rng, max_scale)] = v;
    }
    return field;
}

// A random validated perfect kernel on [0,1)^(m+n), built from sparse random
// signature fields plus a mean, so perfectness holds by construction. The
// generating decomposition is returned alongside for recovery tests.
struct GeneratedKernel {
    PerfectKernel kernel;
    Decomposition source;
};

inline GeneratedKernel random_perfect_kernel(Rng& rng, int m, int n, std::int64_t res,
                                             int squares_per_signature = 2,
                                             bool with_mean = true) {
    Decomposition d;
    d.m = m;
    d.n = n;
    for (const auto& sig : all_signatures(m, n))
        d.fields.push_back(random_field(rng, sig, res - 1, squares_per_signature));
    if (with_mean) {
        Rational mean = random_rational(rng);
        if (mean != 0) {
            std::vector<DyadicInterval> axes(m + n, DyadicInterval{0, 0});
            d.scaling.push_back({DyadicCube(axes), mean});
        }
    }
    return {PerfectKernel(m, n, reconstruct_kernel(d, res)), d};
}

// Random convex tree under `top`: children of included squares are included
// with probability keep_pct/100 down to the given depth. Convexity holds by
// construction.
inline ConvexTree random_convex_tree(Rng& rng, const DyadicSquare& top, int depth, int keep_pct) {
    std::set<DyadicSquare> squares{top};
    std::uniform_int_distribution<int> coin(0, 99);
    std::vector<DyadicSquare> frontier{top};
    for (int level = 1; level < depth; ++level) {
        std::vector<DyadicSquare> next;
        for (const auto& q : frontier)
            for (const auto& child : q.children())
                if (coin(rng) < keep_pct) {
                    squares.insert(child);
                    next.push_back(child);
                }
        frontier = std::move(next);
    }
    return ConvexTree(std::move(squares), top);
}

inline FunctionMap constant_inputs(const BipartiteGraph& g, const StepFunction& f) {
    FunctionMap fs;
    for (const auto& e : g.edges) fs.emplace(e, f);
    return fs;
}

inline FunctionMap random_inputs(Rng& rng, const BipartiteGraph& g, std::int64_t res, int cells,
                                 bool nonneg = false) {
    FunctionMap fs;
    for (const auto& e : g.edges) fs.emplace(e, random_step_2d(rng, res, cells, nonneg));
    return fs;
}

}  // namespace entangled::testing
