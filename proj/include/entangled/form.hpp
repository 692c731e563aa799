#pragma once

#include <map>

#include "entangled/contraction.hpp"
#include "entangled/graph.hpp"
#include "entangled/kernel.hpp"
#include "entangled/step_function.hpp"

namespace entangled {

using FunctionMap = std::map<Edge, StepFunction>;

enum class PlanMode { Naive, Auto };

// The entangled form: integral of K(x_1..x_m, y_1..y_n) times the product of
// F_{i,j}(x_i, y_j) over the edges. Exact; independent of the plan.
Rational evaluate_form(const PerfectKernel& k, const BipartiteGraph& g, const FunctionMap& fs,
                       PlanMode mode = PlanMode::Naive);

// The adjoint T_{u,v}: the (|E|-1)-linear operator leaving out the function on
// edge (u, v); a step function of (x_u, y_v).
StepFunction evaluate_adjoint(const PerfectKernel& k, const BipartiteGraph& g, Edge uv,
                              const FunctionMap& fs_without_uv);

struct DualityReport {
    bool ok = true;
    Rational worst_residual;
};

// For every edge, the form must equal the pairing of the adjoint against the
// left-out function, exactly.
DualityReport check_duality(const PerfectKernel& k, const BipartiteGraph& g, const FunctionMap& fs);

// Integral over a product of per-axis dyadic intervals of the entangled
// product of the F's (no kernel).
Rational entangled_product_integral(const BipartiteGraph& g, const FunctionMap& fs,
                                    const std::vector<DyadicInterval>& axes);

}  // namespace entangled
