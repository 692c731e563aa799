#include "doctest.h"

#include "entangled/paraproduct.hpp"
#include "support.hpp"

using namespace entangled;
using entangled::testing::Rng;

namespace {
const DyadicInterval unit{0, 0};
const DyadicSquare unit_sq{0, 0, 0};

Signature sig_of(std::vector<Flag> a, std::vector<Flag> b) { return Signature(a, b); }
const Flag U = Flag::Unit, H = Flag::Haar;
}  // namespace

TEST_CASE("haar coefficients of a single Haar atom") {
    // K = h(x1) 1(x2) 1(y1) 1(y2) on [0,1)^4.
    StepFunction::CellMap cells;
    for (std::int64_t x1 = 0; x1 < 2; ++x1)
        for (std::int64_t x2 = 0; x2 < 2; ++x2)
            for (std::int64_t y1 = 0; y1 < 2; ++y1)
                for (std::int64_t y2 = 0; y2 < 2; ++y2)
                    cells[{x1, x2, y1, y2}] = x1 == 0 ? 1 : -1;
    PerfectKernel k(2, 2, StepFunction(4, 1, std::move(cells)));

    auto field = haar_coefficients(k, sig_of({H, U}, {U, U}));
    CHECK(field.coeffs.size() == 1);
    CHECK(field.at(unit_sq) == 1);

    auto orthogonal = haar_coefficients(k, sig_of({H, H}, {U, U}));
    CHECK(orthogonal.coeffs.empty());
}

TEST_CASE("generated fields are recovered exactly") {
    Rng rng(70);
    for (int it = 0; it < 10; ++it) {
        auto gen = testing::random_perfect_kernel(rng, 2, 2, 2);
        auto d = decompose(gen.kernel);
        REQUIRE(d.fields.size() == gen.source.fields.size());
        for (std::size_t s = 0; s < d.fields.size(); ++s) {
            CHECK(d.fields[s].signature == gen.source.fields[s].signature);
            CHECK(d.fields[s].coeffs == gen.source.fields[s].coeffs);
        }
    }
}

TEST_CASE("kernel reconstructs pointwise from its decomposition") {
    Rng rng(71);
    for (int it = 0; it < 6; ++it) {
        auto gen = testing::random_perfect_kernel(rng, 2, 2, 2);
        StepFunction rebuilt = reconstruct_kernel(decompose(gen.kernel), 2);
        CHECK(rebuilt == gen.kernel.body);
    }
}

TEST_CASE("perfect cancellation: unequal-interval coefficients vanish") {
    Rng rng(72);
    for (int it = 0; it < 6; ++it) {
        auto gen = testing::random_perfect_kernel(rng, 2, 2, 2);
        for (const auto& sig : all_signatures(2, 2)) {
            auto cubes = full_decomposition_coefficients(gen.kernel, sig);
            for (const auto& [cube, nu] : cubes) {
                bool equal_x = cube.intervals[0] == cube.intervals[1];
                bool equal_y = cube.intervals[2] == cube.intervals[3];
                if (!equal_x || !equal_y) CHECK(nu == 0);
            }
        }
    }
}

TEST_CASE("paraproduct term: Haar kills constants") {
    BipartiteGraph g = sqcup_graph();
    FunctionMap fs =
        testing::constant_inputs(g, StepFunction::indicator_square(unit_sq, 1));
    for (const auto& sig : all_signatures(2, 2))
        CHECK(paraproduct_term(g, fs, sig, unit_sq) == 0);
}

TEST_CASE("paraproduct term: mixed bracket example") {
    // S = {2}, T = {2}: F_{2,1} = h_I x 1_J, F_{1,2} = 1_I x h_J, F_{1,1} = 1_Q
    // gives bracket value 1 on Q = I x J.
    BipartiteGraph g = sqcup_graph();
    StepFunction h1 = StepFunction::haar(unit, 1);
    StepFunction one1 = StepFunction::indicator({unit}, 1);
    FunctionMap fs;
    fs.emplace(Edge{1, 1}, StepFunction::indicator_square(unit_sq, 1));
    fs.emplace(Edge{1, 2}, tensor(one1, h1));
    fs.emplace(Edge{2, 1}, tensor(h1, one1));
    CHECK(paraproduct_term(g, fs, sig_of({U, H}, {U, H}), unit_sq) == 1);
}

TEST_CASE("paraproduct term factorizes over components") {
    Rng rng(73);
    BipartiteGraph g(2, 2, {{1, 1}, {2, 2}});
    auto comps = components(g);
    REQUIRE(comps.size() == 2);
    for (const auto& sig : all_signatures(2, 2)) {
        FunctionMap fs = testing::random_inputs(rng, g, 2, 6);
        for (std::int64_t s = 0; s <= 1; ++s) {
            DyadicSquare q{s, 0, s == 0 ? 0 : 1};
            Rational whole = paraproduct_term(g, fs, sig, q);
            Rational parts = paraproduct_term_component(g, comps[0], fs, sig, q) *
                             paraproduct_term_component(g, comps[1], fs, sig, q);
            CHECK(whole == parts);
        }
    }
}

TEST_CASE("evaluate paraproduct: empty and single-square fields") {
    BipartiteGraph g = sqcup_graph();
    Rng rng(74);
    FunctionMap fs = testing::random_inputs(rng, g, 2, 6);
    HaarCoefficientField empty{sig_of({U, H}, {U, H}), {}};
    CHECK(evaluate_paraproduct(empty, g, fs) == 0);

    StepFunction h1 = StepFunction::haar(unit, 1);
    StepFunction one1 = StepFunction::indicator({unit}, 1);
    FunctionMap special;
    special.emplace(Edge{1, 1}, StepFunction::indicator_square(unit_sq, 1));
    special.emplace(Edge{1, 2}, tensor(one1, h1));
    special.emplace(Edge{2, 1}, tensor(h1, one1));
    HaarCoefficientField single{sig_of({U, H}, {U, H}), {{unit_sq, Rational(1)}}};
    CHECK(evaluate_paraproduct(single, g, special) == unit_sq.measure() * 1);
}

TEST_CASE("reconstruction identity on random kernels and inputs") {
    Rng rng(75);
    for (const auto& g : {sqcup_graph(), box_graph()}) {
        for (int it = 0; it < 5; ++it) {
            auto gen = testing::random_perfect_kernel(rng, 2, 2, 2);
            FunctionMap fs = testing::random_inputs(rng, g, 2, 6);
            auto report = reconstruct_check(gen.kernel, g, fs);
            CHECK(report.ok);
            CHECK(report.residual == 0);
        }
    }
}

TEST_CASE("reconstruction identity: constant kernel and zero kernel") {
    Rng rng(76);
    BipartiteGraph g = sqcup_graph();
    FunctionMap fs = testing::random_inputs(rng, g, 2, 6);
    PerfectKernel constant(
        2, 2, StepFunction::constant_on({unit, unit, unit, unit}, 1, Rational(3, 7)));
    // Every signature pairs to zero against a constant; the scaling term
    // carries the whole form.
    auto d = decompose(constant);
    for (const auto& field : d.fields) CHECK(field.coeffs.empty());
    CHECK(reconstruct_check(constant, g, fs).ok);

    PerfectKernel zero(2, 2, StepFunction(4, 1));
    CHECK(reconstruct_check(zero, g, fs).residual == 0);
}

TEST_CASE("coefficient norms: single square") {
    HaarCoefficientField f{sig_of({H, U}, {U, U}), {}};
    DyadicSquare q{2, 1, 2};
    f.coeffs[q] = Rational(-3, 2);
    auto norms = coeff_norms(f);
    CHECK(norms.linf == Rational(3, 2));
    // Attained at Q0 = the square itself: |Q| lambda^2 / |Q| = lambda^2.
    CHECK(norms.bmo_squared == Rational(9, 4));
}

TEST_CASE("coefficient norms: scaling behavior") {
    Rng rng(77);
    for (int it = 0; it < 10; ++it) {
        auto f = testing::random_field(rng, sig_of({H, U}, {U, U}), 2, 5);
        auto norms = coeff_norms(f);
        HaarCoefficientField scaled = f;
        for (auto& [q, v] : scaled.coeffs) v *= Rational(-5, 3);
        auto scaled_norms = coeff_norms(scaled);
        CHECK(scaled_norms.linf == norms.linf * Rational(5, 3));
        CHECK(scaled_norms.bmo_squared == norms.bmo_squared * Rational(25, 9));
    }
}

TEST_CASE("coefficient norms: brute-force oracle") {
    Rng rng(78);
    for (int it = 0; it < 20; ++it) {
        auto f = testing::random_field(rng, sig_of({H, U}, {U, U}), 2, 6);
        if (f.coeffs.empty()) continue;
        Rational expect(0);
        // Oracle: enumerate candidate tops over a window of scales; squares
        // coarser than scale -4 only shrink the ratio since all the mass is
        // inside [0,1)^2 already at scale 0.
        for (std::int64_t s = -4; s <= 2; ++s) {
            std::int64_t lo = s >= 0 ? 0 : -1, hi = s >= 0 ? (1 << s) : 1;
            for (std::int64_t ix = lo; ix < hi; ++ix)
                for (std::int64_t jy = lo; jy < hi; ++jy) {
                    DyadicSquare q0{s, ix, jy};
                    Rational mass(0);
                    for (const auto& [q, lambda] : f.coeffs)
                        if (q0.contains(q)) mass += q.measure() * lambda * lambda;
                    expect = std::max(expect, mass / q0.measure());
                }
        }
        CHECK(coeff_norms(f).bmo_squared == expect);
    }
}

TEST_CASE("convex trees and leaves") {
    ConvexTree t1({unit_sq}, unit_sq);
    CHECK(tree_leaves(t1).size() == 4);

    std::set<DyadicSquare> family{unit_sq};
    for (const auto& c : unit_sq.children()) family.insert(c);
    ConvexTree t2(family, unit_sq);
    CHECK(tree_leaves(t2).size() == 16);

    // Top plus one child: the 3 siblings plus the child's 4 children.
    ConvexTree t3({unit_sq, unit_sq.children()[0]}, unit_sq);
    auto leaves = tree_leaves(t3);
    CHECK(leaves.size() == 7);
    for (const auto& c : unit_sq.children()[0].children()) CHECK(leaves.count(c));

    // Convexity violations are rejected.
    DyadicSquare grandchild = unit_sq.children()[0].children()[0];
    CHECK_THROWS(ConvexTree({unit_sq, grandchild}, unit_sq));
    CHECK_THROWS(ConvexTree({unit_sq.children()[0]}, unit_sq));
}

TEST_CASE("localized theta and single-tree ratio") {
    BipartiteGraph g = sqcup_graph();
    auto d = exponent_thresholds(g);
    Rng rng(79);

    // All-ones inputs with a Haar-bearing signature: theta = 0, ratio 0.
    FunctionMap ones = testing::constant_inputs(g, StepFunction::indicator_square(unit_sq, 3));
    ConvexTree tree({unit_sq}, unit_sq);
    HaarCoefficientField field{sig_of({U, H}, {U, H}), {{unit_sq, Rational(1)}}};
    CHECK(localized_theta(field, g, ones, tree) == 0);
    auto ratio = single_tree_ratio(field, g, ones, tree, d);
    CHECK(ratio.lo == 0);
    CHECK(ratio.hi == 0);

    // One-square tree, hand-checkable: ratio = |lambda| |A| / prod [F^d]^(1/d).
    FunctionMap fs = testing::random_inputs(rng, g, 2, 8, /*nonneg=*/true);
    for (auto& [e, f] : fs)
        f = f + StepFunction::indicator_square(unit_sq, 2);  // keep strictly positive
    Rational a_q = paraproduct_term(g, fs, field.signature, unit_sq);
    auto r = single_tree_ratio(field, g, fs, tree, d);
    Rational numerator = rational_abs(a_q);
    // Denominator within the certified enclosure: d = 2 on all three edges.
    RationalInterval denom = RationalInterval::point(Rational(1));
    std::vector<DyadicSquare> cands{unit_sq};
    for (const auto& leaf : tree_leaves(tree)) cands.push_back(leaf);
    for (const auto& e : g.edges) {
        Rational best(0);
        for (const auto& q : cands) best = std::max(best, power_mean_pow(fs.at(e), q, 2));
        denom = denom * nth_root_interval(best, 2);
    }
    CHECK(r.lo <= numerator / denom.lo);
    CHECK(r.hi >= numerator / denom.hi);
    CHECK((r.hi - r.lo) <= r.hi * pow2(-60));

    // Zero input on the tree: ZeroDenominator.
    FunctionMap zeros = testing::constant_inputs(g, StepFunction(2, 2));
    CHECK_THROWS_AS(single_tree_ratio(field, g, zeros, tree, d), ZeroDenominator);
}

TEST_CASE("jensen monotonicity of power means") {
    Rng rng(80);
    for (int it = 0; it < 40; ++it) {
        StepFunction f = testing::random_step_2d(rng, 2, 8, /*nonneg=*/true);
        DyadicSquare q = testing::random_square_in_unit(rng, 1);
        for (int dlo = 1; dlo <= 3; ++dlo)
            for (int dhi = dlo + 1; dhi <= 4; ++dhi) {
                Rational lo = power_mean_pow(f, q, dlo), hi = power_mean_pow(f, q, dhi);
                CHECK(root_ge(hi, dhi, lo, dlo));
            }
    }
}

TEST_CASE("nth root intervals certify their value") {
    CHECK(nth_root_interval(Rational(0), 3).lo == 0);
    auto r = nth_root_interval(Rational(2), 2);
    CHECK(rational_pow(r.lo, 2) <= 2);
    CHECK(rational_pow(r.hi, 2) >= 2);
    CHECK(r.hi - r.lo <= r.hi * pow2(-64));
    auto exact = nth_root_interval(Rational(27, 8), 3, 40);
    CHECK(exact.contains(Rational(3, 2)));
}
