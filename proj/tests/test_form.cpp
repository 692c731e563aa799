#include "doctest.h"

#include "entangled/form.hpp"
#include "support.hpp"

using namespace entangled;
using entangled::testing::Rng;

namespace {
const DyadicInterval unit{0, 0};

PerfectKernel unit_kernel_2x2() {
    return PerfectKernel(2, 2, StepFunction::constant_on({unit, unit, unit, unit}, 1, Rational(1)));
}
}  // namespace

TEST_CASE("form on all-ones data") {
    BipartiteGraph g = sqcup_graph();
    FunctionMap fs = testing::constant_inputs(g, StepFunction::indicator({unit, unit}, 1));
    CHECK(evaluate_form(unit_kernel_2x2(), g, fs) == 1);
}

TEST_CASE("form vanishes when one input is zero") {
    Rng rng(60);
    BipartiteGraph g = sqcup_graph();
    auto gen = testing::random_perfect_kernel(rng, 2, 2, 2);
    FunctionMap fs = testing::random_inputs(rng, g, 2, 6);
    fs.at({2, 1}) = StepFunction(2, 2);
    CHECK(evaluate_form(gen.kernel, g, fs) == 0);
}

TEST_CASE("multilinearity in one slot") {
    Rng rng(61);
    BipartiteGraph g = sqcup_graph();
    for (int it = 0; it < 10; ++it) {
        auto gen = testing::random_perfect_kernel(rng, 2, 2, 2);
        FunctionMap fs = testing::random_inputs(rng, g, 2, 6);
        StepFunction f = testing::random_step_2d(rng, 2, 6);
        StepFunction h = testing::random_step_2d(rng, 2, 6);
        Rational a = testing::random_rational(rng), b = testing::random_rational(rng);

        FunctionMap combo = fs, fa = fs, fb = fs;
        combo.at({1, 2}) = f.scaled(a) + h.scaled(b);
        fa.at({1, 2}) = f;
        fb.at({1, 2}) = h;
        CHECK(evaluate_form(gen.kernel, g, combo) ==
              a * evaluate_form(gen.kernel, g, fa) + b * evaluate_form(gen.kernel, g, fb));
    }
}

TEST_CASE("adjoint on constant data") {
    BipartiteGraph g = sqcup_graph();
    StepFunction one = StepFunction::indicator({unit, unit}, 1);
    FunctionMap fs;
    for (const auto& e : g.edges)
        if (e != Edge{1, 1}) fs.emplace(e, one);
    StepFunction t = evaluate_adjoint(unit_kernel_2x2(), g, {1, 1}, fs);
    CHECK(t == one);

    PerfectKernel zero(2, 2, StepFunction(4, 1));
    CHECK(evaluate_adjoint(zero, g, {1, 1}, fs).is_zero());
}

TEST_CASE("adjoint of the Haar atom kernel") {
    // K = h(x1) 1(x2) 1(y1) 1(y2), F_{1,2} = F_{2,1} = 1 on [0,1)^2:
    // T_{1,1} = h tensor 1.
    BipartiteGraph g = sqcup_graph();
    StepFunction h = StepFunction::haar(unit, 1);
    StepFunction one1d = StepFunction::indicator({unit}, 1);
    StepFunction::CellMap cells;
    for (std::int64_t x1 = 0; x1 < 2; ++x1)
        for (std::int64_t x2 = 0; x2 < 2; ++x2)
            for (std::int64_t y1 = 0; y1 < 2; ++y1)
                for (std::int64_t y2 = 0; y2 < 2; ++y2)
                    cells[{x1, x2, y1, y2}] = x1 == 0 ? 1 : -1;
    PerfectKernel k(2, 2, StepFunction(4, 1, std::move(cells)));

    FunctionMap fs;
    StepFunction one = StepFunction::indicator({unit, unit}, 1);
    fs.emplace(Edge{1, 2}, one);
    fs.emplace(Edge{2, 1}, one);
    StepFunction t = evaluate_adjoint(k, g, {1, 1}, fs);
    CHECK(t == tensor(h, one1d));

    // Oracle for one cell: integrate out x2, y2 by hand.
    CHECK(t.value_at({0, 0}) == 1);
    CHECK(t.value_at({1, 1}) == -1);
}

TEST_CASE("duality holds exactly") {
    Rng rng(62);
    BipartiteGraph sq = sqcup_graph(), bx = box_graph();
    for (int it = 0; it < 8; ++it) {
        auto gen = testing::random_perfect_kernel(rng, 2, 2, 2);
        auto fs = testing::random_inputs(rng, sq, 1, 4);
        auto r = check_duality(gen.kernel, sq, fs);
        CHECK(r.ok);
        CHECK(r.worst_residual == 0);

        auto fsb = testing::random_inputs(rng, bx, 1, 4);
        auto rb = check_duality(gen.kernel, bx, fsb);
        CHECK(rb.ok);
    }
    PerfectKernel zero(2, 2, StepFunction(4, 1));
    auto fs = testing::random_inputs(rng, sq, 1, 4);
    CHECK(check_duality(zero, sq, fs).ok);
}

TEST_CASE("errors: dimension mismatch and missing edges") {
    BipartiteGraph g = sqcup_graph();
    PerfectKernel k13(1, 3, StepFunction(4, 1, {{{0, 0, 0, 0}, Rational(1)}}));
    FunctionMap fs = testing::constant_inputs(g, StepFunction::indicator({unit, unit}, 1));
    CHECK_THROWS_AS(evaluate_form(k13, g, fs), DimensionMismatch);

    FunctionMap missing = fs;
    missing.erase({1, 2});
    CHECK_THROWS_AS(evaluate_form(unit_kernel_2x2(), g, missing), DimensionMismatch);
    CHECK_THROWS_AS(evaluate_adjoint(unit_kernel_2x2(), g, {2, 2}, fs), EdgeNotInGraph);
}

TEST_CASE("one-dimensional modulation symmetry") {
    // Multiplying both functions sharing x1 by a +-1 pattern g(x) with
    // g * g = 1 leaves the form unchanged.
    Rng rng(63);
    BipartiteGraph g = sqcup_graph();
    for (int it = 0; it < 8; ++it) {
        auto gen = testing::random_perfect_kernel(rng, 2, 2, 2);
        FunctionMap fs = testing::random_inputs(rng, g, 2, 6);
        StepFunction sign1d(1, 2, {{{0}, 1}, {{1}, -1}, {{2}, -1}, {{3}, 1}});
        StepFunction pattern = tensor(sign1d, StepFunction::indicator({unit}, 2));
        FunctionMap modulated = fs;
        modulated.at({1, 1}) = fs.at({1, 1}) * pattern;
        modulated.at({1, 2}) = fs.at({1, 2}) * pattern;
        CHECK(evaluate_form(gen.kernel, g, modulated) == evaluate_form(gen.kernel, g, fs));
    }
}

TEST_CASE("indicator substitution gives the kernel pairing") {
    // Lambda(1_Q,...,1_Q) = <K, 1_I x ... x 1_J> exactly.
    Rng rng(64);
    for (const auto& g : {sqcup_graph(), box_graph()}) {
        auto gen = testing::random_perfect_kernel(rng, 2, 2, 2);
        for (std::int64_t s = 0; s <= 2; ++s) {
            std::uniform_int_distribution<std::int64_t> idx(0, (1 << s) - 1);
            DyadicSquare q{s, idx(rng), idx(rng)};
            FunctionMap fs = testing::constant_inputs(
                g, StepFunction::indicator_square(q, std::max<std::int64_t>(s, 2)));
            CHECK(evaluate_form(gen.kernel, g, fs) ==
                  gen.kernel.body.integral_over({q.x, q.x, q.y, q.y}));
        }
    }
}

TEST_CASE("entangled product integral matches direct summation") {
    Rng rng(65);
    BipartiteGraph g = sqcup_graph();
    FunctionMap fs = testing::random_inputs(rng, g, 2, 8);
    std::vector<DyadicInterval> cube{unit, unit, unit, unit};
    // Direct odometer oracle.
    Rational expect(0);
    for (std::int64_t x1 = 0; x1 < 4; ++x1)
        for (std::int64_t x2 = 0; x2 < 4; ++x2)
            for (std::int64_t y1 = 0; y1 < 4; ++y1)
                for (std::int64_t y2 = 0; y2 < 4; ++y2)
                    expect += fs.at({1, 1}).value_at({x1, y1}) * fs.at({1, 2}).value_at({x1, y2}) *
                              fs.at({2, 1}).value_at({x2, y1});
    expect /= 256;
    CHECK(entangled_product_integral(g, fs, cube) == expect);
}
