#pragma once

#include <map>
#include <set>
#include <vector>

#include "entangled/form.hpp"
#include "entangled/graph.hpp"
#include "entangled/interval.hpp"
#include "entangled/kernel.hpp"

namespace entangled {

// Haar coefficients lambda_{I x J} = |I x J|^-1 <K, a_I x ... x b_J> of one
// signature, finitely supported on dyadic squares.
struct HaarCoefficientField {
    Signature signature;
    std::map<DyadicSquare, Rational> coeffs;

    Rational at(const DyadicSquare& q) const {
        auto it = coeffs.find(q);
        return it == coeffs.end() ? Rational(0) : it->second;
    }
};

// The projection of the kernel onto constants at the covering scale. Together
// with the signature fields this reconstructs the kernel exactly: squares
// coarser than the covering scale telescope to exactly these terms.
struct ScalingTerm {
    DyadicCube cube;
    Rational mean;
};

struct Decomposition {
    int m = 0;
    int n = 0;
    std::vector<HaarCoefficientField> fields;  // one per signature, all 2^(m+n)-1
    std::vector<ScalingTerm> scaling;
};

// Coefficients over squares with scales from the covering cube down to the
// resolution (coefficients at the resolution scale vanish: every signature
// carries a Haar factor whose halves live one scale finer).
HaarCoefficientField haar_coefficients(const PerfectKernel& k, const Signature& sig);

// Full-decomposition mode: coefficients nu over all (m+n)-dimensional cubes
// with per-axis intervals free to differ, for the perfect-cancellation
// vanishing test. For a validated perfect kernel every cube with unequal
// x-intervals or unequal y-intervals carries exactly 0.
std::map<DyadicCube, Rational> full_decomposition_coefficients(const PerfectKernel& k,
                                                               const Signature& sig);

Decomposition decompose(const PerfectKernel& k);

// Reconstructs the kernel from a decomposition as a step function (atoms plus
// scaling terms); equals the body pointwise.
StepFunction reconstruct_kernel(const Decomposition& d, std::int64_t res);

// The mixed average/Haar bracket A_{I x J} of the entangled product: Haar
// pairings over the signature's S and T axes, plain averages over the rest.
Rational paraproduct_term(const BipartiteGraph& g, const FunctionMap& fs, const Signature& sig,
                          const DyadicSquare& q);

// The bracket restricted to one connected component's edges and axes.
Rational paraproduct_term_component(const BipartiteGraph& g, const Component& comp,
                                    const FunctionMap& fs, const Signature& sig,
                                    const DyadicSquare& q);

// Theta = sum over supported squares of lambda_Q |Q| A_Q.
Rational evaluate_paraproduct(const HaarCoefficientField& field, const BipartiteGraph& g,
                              const FunctionMap& fs);

// Sum of all signature paraproducts plus the scaling terms; equals the form.
Rational evaluate_decomposition(const Decomposition& d, const BipartiteGraph& g,
                                const FunctionMap& fs);

struct ReconstructionReport {
    bool ok = true;
    Rational residual;
};

ReconstructionReport reconstruct_check(const PerfectKernel& k, const BipartiteGraph& g,
                                       const FunctionMap& fs);

struct CoefficientNorms {
    Rational linf;
    Rational bmo_squared;
};

// ||lambda||_linf and ||lambda||_bmo^2 = sup over Q0 of |Q0|^-1 sum_{Q in Q0}
// |Q| lambda_Q^2. The sup runs over the support squares' ancestor closure; a
// chain stops once its square holds its quadrant's full mass (coarser squares
// only decrease the ratio).
CoefficientNorms coeff_norms(const HaarCoefficientField& field);

// Shared by the BMO identity for adjoints of all-ones: the combined norm of
// several coefficient families over common squares.
Rational combined_bmo_squared(const std::vector<const HaarCoefficientField*>& fields);

// A finite inclusion-convex family of dyadic squares containing its top.
struct ConvexTree {
    std::set<DyadicSquare> squares;
    DyadicSquare top;

    ConvexTree(std::set<DyadicSquare> sq, DyadicSquare t);
};

// Children of members that are not themselves members.
std::set<DyadicSquare> tree_leaves(const ConvexTree& t);

// Theta_T = sum over Q in T of |lambda_Q| |Q| |A_Q|.
Rational localized_theta(const HaarCoefficientField& field, const BipartiteGraph& g,
                         const FunctionMap& fs, const ConvexTree& t);

// Theta_T divided by |Q_T| prod_max [F^d]^(1/d); the d-th roots are certified
// interval enclosures. Throws ZeroDenominator when some F vanishes on the top.
RationalInterval single_tree_ratio(const HaarCoefficientField& field, const BipartiteGraph& g,
                                   const FunctionMap& fs, const ConvexTree& t,
                                   const ExponentAssignment& d);

// Average of F^d over a square.
Rational power_mean_pow(const StepFunction& f, const DyadicSquare& q, int d);

}  // namespace entangled
