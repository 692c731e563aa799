#pragma once

#include <optional>

#include "entangled/form.hpp"
#include "entangled/graph.hpp"
#include "entangled/kernel.hpp"
#include "entangled/step_function.hpp"

namespace entangled {

// Exact square of the dyadic BMO seminorm of a compactly supported 2D step
// function: sup over dyadic squares of the mean L2 oscillation. The scan runs
// from the resolution upward; squares coarser than the certified tail bound
// ||F||_2^2 / |Q| <= current max cannot improve the sup and are skipped.
Rational bmo_seminorm_squared(const StepFunction& f);

struct WbpResult {
    Rational max_ratio;
    std::optional<DyadicSquare> witness;
    std::int64_t finest_scanned = 0;  // squares strictly finer sit inside one
                                      // kernel cell and only shrink the ratio
    std::int64_t coarsest_scanned = 0;
};

// sup over dyadic squares Q within `region` (depth <= max_depth) of
// |Lambda(1_Q,...,1_Q)| / |Q|.
WbpResult weak_boundedness_scan(const PerfectKernel& k, const BipartiteGraph& g,
                                const DyadicSquare& region, int max_depth);

// Same sup over all dyadic squares: fine side capped at the resolution (finer
// squares only shrink the ratio), coarse side cut off once the certified bound
// int|K| / |Q| falls below the running max.
WbpResult weak_boundedness_scan(const PerfectKernel& k, const BipartiteGraph& g,
                                int max_depth);

// T_{u,v}(1,...,1) with the all-ones input materialized on the kernel's
// padded support box; exact and independent of the box once it covers the
// support.
StepFunction adjoint_of_ones(const PerfectKernel& k, const BipartiteGraph& g, Edge uv,
                             int pad = 1);

// BMO^2 of T_{u,v}(1,...,1); recomputed with a doubly padded box to assert
// box-independence.
Rational t1_bmo(const PerfectKernel& k, const BipartiteGraph& g, Edge uv);

// ||T_{u,v}(1_Q,...,1_Q)||_{L1(Q)} / |Q|.
Rational restricted_test(const PerfectKernel& k, const BipartiteGraph& g, Edge uv,
                         const DyadicSquare& q);

// Per-square one-dimensional factors multiplying to indicators: for each i the
// a's over i's edges multiply to 1_I, for each j the b's multiply to 1_J.
struct ModulationFamily {
    DyadicSquare q;
    std::map<Edge, StepFunction> a;  // 1D on I
    std::map<Edge, StepFunction> b;  // 1D on J

    // Trivial family: every factor an indicator.
    static ModulationFamily trivial(const BipartiteGraph& g, const DyadicSquare& q,
                                    std::int64_t res);
};

// Throws InvalidFamily when the product constraints fail.
void validate_family(const ModulationFamily& fam, const BipartiteGraph& g);

struct CheckResult {
    bool ok = true;
    Rational residual;
};

// T_{u,v}((B_Q^{i,j})) B_Q^{u,v} = T_{u,v}((1_Q)) 1_Q pointwise, hence the
// L1 quantities agree exactly.
CheckResult modulation_invariance_check(const ModulationFamily& fam, const PerfectKernel& k,
                                        const BipartiteGraph& g, Edge uv);

// On Q, T(1,...,1) - mean_Q equals T(1_Q,...,1_Q) - mean_Q, pointwise.
CheckResult local_constancy_check(const PerfectKernel& k, const BipartiteGraph& g, Edge uv,
                                  const DyadicSquare& q);

struct NecessityReport {
    Rational lambda_abs;        // |Lambda(1_Q,...,1_Q)|
    Rational l1_test;           // ||T(1_Q,...)||_{L1(Q)}
    Rational oscillation_l1;    // |Q|^-1 int_Q |T(1,..) - mean|
    Rational twice_restricted;  // 2 |Q|^-1 int_Q |T(1_Q,..)|
    bool ok = true;             // lambda_abs <= l1_test and oscillation <= twice_restricted
};

NecessityReport necessity_checks(const PerfectKernel& k, const BipartiteGraph& g, Edge uv,
                                 const DyadicSquare& q);

// ((1/|Q|) int_Q |T|)^p' <= (1/|Q|) int_Q |T|^p' for small integer p',
// compared exactly via p'-th powers.
bool jensen_l1_lp_check(const PerfectKernel& k, const BipartiteGraph& g, Edge uv,
                        const DyadicSquare& q, int pprime);

}  // namespace entangled
