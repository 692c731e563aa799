#include "doctest.h"

#include <algorithm>
#include <numeric>

#include "entangled/contraction.hpp"
#include "entangled/form.hpp"
#include "support.hpp"

using namespace entangled;
using entangled::testing::Rng;

TEST_CASE("planner beats naive on the sqcup graph with atomic kernel") {
    BipartiteGraph g = sqcup_graph();
    for (std::int64_t cells : {2, 4}) {
        std::vector<std::int64_t> widths(4, cells);
        auto plan = plan_contraction(g, KernelStructure::Atomic, widths);
        CHECK(plan.predicted_cost < plan.naive_cost);
        CHECK(plan.order.size() == 4);
        // Exhaustive optimality over all 4! orders.
        auto factors = contraction_factors(g, KernelStructure::Atomic);
        std::vector<int> order{0, 1, 2, 3};
        do {
            CHECK(plan.predicted_cost <= elimination_cost(factors, widths, order));
        } while (std::next_permutation(order.begin(), order.end()));
    }
}

TEST_CASE("single-edge graph: any order, cost equals naive") {
    BipartiteGraph g(1, 1, {{1, 1}});
    std::vector<std::int64_t> widths(2, 3);
    auto plan = plan_contraction(g, KernelStructure::Dense, widths);
    CHECK(plan.predicted_cost == plan.naive_cost);
}

TEST_CASE("box graph: best order no worse than worst, strictly for 4 cells") {
    BipartiteGraph g = box_graph();
    for (std::int64_t cells : {2, 4}) {
        std::vector<std::int64_t> widths(4, cells);
        auto factors = contraction_factors(g, KernelStructure::Dense);
        auto plan = plan_contraction(g, KernelStructure::Dense, widths);
        BigInt worst = plan.predicted_cost;
        std::vector<int> order{0, 1, 2, 3};
        do {
            worst = std::max(worst, elimination_cost(factors, widths, order));
        } while (std::next_permutation(order.begin(), order.end()));
        CHECK(plan.predicted_cost <= worst);
        if (cells >= 4) CHECK(plan.predicted_cost < worst);
    }
}

TEST_CASE("plan steps eliminate every axis exactly once") {
    BipartiteGraph g = sqcup_graph();
    auto plan = plan_contraction(g, KernelStructure::Dense, {3, 3, 3, 3});
    std::vector<int> sorted = plan.order;
    std::sort(sorted.begin(), sorted.end());
    CHECK(sorted == std::vector<int>{0, 1, 2, 3});
    CHECK(plan.steps.size() == 4);
}

TEST_CASE("planned evaluation equals naive on random instances") {
    Rng rng(50);
    std::vector<BipartiteGraph> graphs = {sqcup_graph(), box_graph(),
                                          BipartiteGraph(1, 2, {{1, 1}, {1, 2}}),
                                          BipartiteGraph(2, 3, {{1, 1}, {1, 2}, {1, 3}, {2, 3}})};
    for (const auto& g : graphs) {
        for (int it = 0; it < 6; ++it) {
            auto gen = testing::random_perfect_kernel(rng, g.m, g.n, 2);
            FunctionMap fs = testing::random_inputs(rng, g, 2, 6);
            Rational naive = evaluate_form(gen.kernel, g, fs, PlanMode::Naive);
            Rational planned = evaluate_form(gen.kernel, g, fs, PlanMode::Auto);
            CHECK(naive == planned);
        }
    }
}

TEST_CASE("greedy fallback beyond eight axes still eliminates all") {
    // 5x5 matching: 10 axes, exercises the greedy branch.
    BipartiteGraph g = matching_graph(5);
    std::vector<std::int64_t> widths(10, 2);
    auto plan = plan_contraction(g, KernelStructure::Atomic, widths);
    std::vector<int> sorted = plan.order;
    std::sort(sorted.begin(), sorted.end());
    std::vector<int> expect(10);
    std::iota(expect.begin(), expect.end(), 0);
    CHECK(sorted == expect);
    CHECK(plan.predicted_cost < plan.naive_cost);
}
