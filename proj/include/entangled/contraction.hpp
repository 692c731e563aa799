#pragma once

#include <string>
#include <vector>

#include "entangled/graph.hpp"
#include "entangled/numbers.hpp"

namespace entangled {

// One multiplicand of the grid sum: a table over a subset of the axes
// {x_1..x_m, y_1..y_n} (axis ids 0..m+n-1, x's first).
struct FactorSpec {
    std::vector<int> scope;
    std::string label;
};

// Whether the kernel enters as a sum of product atoms (one slot per axis, the
// paraproduct form) or as one dense factor coupling all axes.
enum class KernelStructure { Atomic, Dense };

struct PlanStep {
    int axis = 0;
    std::vector<int> factors;      // indices of the factors merged at this step
    std::vector<int> result_scope;
    BigInt cost;
};

struct ContractionPlan {
    std::vector<int> order;
    std::vector<PlanStep> steps;
    BigInt predicted_cost;
    BigInt naive_cost;
};

std::vector<FactorSpec> contraction_factors(const BipartiteGraph& g, KernelStructure structure);

// Multiply-add count of variable elimination along `order`: each step pays
// |joint table of the participating factors| * (number of participating
// factors); a step with a single participating factor fuses into the step
// that produced it and costs nothing. Deterministic in its inputs.
BigInt elimination_cost(const std::vector<FactorSpec>& factors,
                        const std::vector<std::int64_t>& widths, const std::vector<int>& order);

// Full-grid multiply-add count (every factor at every grid point).
BigInt naive_cost(const std::vector<FactorSpec>& factors, const std::vector<std::int64_t>& widths);

// Chooses an elimination order over all axes. Up to 8 axes every order is
// enumerated and the cheapest kept (tie-break: lexicographically lowest
// axis order); beyond that a greedy fewest-incident-factors order is used.
ContractionPlan plan_contraction(const BipartiteGraph& g, KernelStructure structure,
                                 const std::vector<std::int64_t>& widths);

// A dense table over a subset of axes, row-major in ascending axis order.
struct Table {
    std::vector<int> axes;
    std::vector<std::int64_t> lo;    // per-axis first cell index
    std::vector<std::int64_t> size;  // per-axis cell count
    std::vector<Rational> data;

    static Table scalar(const Rational& v) { return Table{{}, {}, {}, {v}}; }
    Rational& at(const std::vector<std::int64_t>& point);
};

// Executes variable elimination over the given tables in the given axis
// order; returns the full sum over the grid of the product of all tables.
Rational eliminate_all(std::vector<Table> tables, const std::vector<int>& order);

}  // namespace entangled
