#include "doctest.h"

#include <map>

#include "entangled/errors.hpp"
#include "entangled/graph.hpp"

using namespace entangled;

TEST_CASE("components") {
    CHECK(components(sqcup_graph()).size() == 1);

    BipartiteGraph two(2, 2, {{1, 1}, {2, 2}});
    auto cs = components(two);
    REQUIRE(cs.size() == 2);
    CHECK(cs[0].xs == std::set<int>{1});
    CHECK(cs[0].ys == std::set<int>{1});
    CHECK(cs[1].edges == std::set<Edge>{{2, 2}});

    CHECK(components(star_graph(1)).size() == 1);

    // Partition property on a mixed graph.
    BipartiteGraph g(3, 4, {{1, 1}, {1, 2}, {2, 3}, {3, 3}, {3, 4}});
    auto parts = components(g);
    std::size_t xs = 0, ys = 0, es = 0;
    for (const auto& c : parts) {
        xs += c.xs.size();
        ys += c.ys.size();
        es += c.edges.size();
        for (const auto& e : c.edges) {
            CHECK(c.xs.count(e.first));
            CHECK(c.ys.count(e.second));
        }
    }
    CHECK(xs == 3);
    CHECK(ys == 4);
    CHECK(es == g.edges.size());
}

TEST_CASE("isolated vertices are rejected") {
    CHECK_THROWS(BipartiteGraph(2, 2, {{1, 1}, {1, 2}}));
    CHECK_THROWS(BipartiteGraph(2, 2, {{1, 1}, {3, 2}}));
}

TEST_CASE("classify signatures") {
    BipartiteGraph g = sqcup_graph();
    auto sig = [&](std::vector<Flag> a, std::vector<Flag> b) { return Signature(a, b); };
    const Flag U = Flag::Unit, H = Flag::Haar;

    CHECK(classify_signature(g, sig({H, U}, {H, U})) == ParaproductClass::NC2);
    CHECK(classify_signature(g, sig({U, H}, {U, H})) == ParaproductClass::C2);
    CHECK(classify_signature(g, sig({H, H}, {U, U})) == ParaproductClass::C1);
    CHECK(classify_signature(g, sig({U, U}, {H, U})) == ParaproductClass::NC1);

    // Exhaustive: total and single-valued over all 15 signatures; class counts.
    std::map<ParaproductClass, int> counts;
    auto sigs = all_signatures(2, 2);
    CHECK(sigs.size() == 15);
    for (const auto& s : sigs) ++counts[classify_signature(g, s)];
    CHECK(counts[ParaproductClass::C1] == 7);
    CHECK(counts[ParaproductClass::C2] == 1);
    CHECK(counts[ParaproductClass::NC1] == 4);
    CHECK(counts[ParaproductClass::NC2] == 3);

    CHECK_THROWS(Signature({U, U}, {U, U}));
}

TEST_CASE("exponent thresholds: standard cases") {
    auto d_sqcup = exponent_thresholds(sqcup_graph());
    for (const auto& [e, d] : d_sqcup.d) CHECK(d == 2);
    CHECK(d_sqcup.d.size() == 3);

    auto d_box = exponent_thresholds(box_graph());
    for (const auto& [e, d] : d_box.d) CHECK(d == 2);
    CHECK(d_box.d.size() == 4);

    for (int n : {2, 3, 5}) {
        auto d = exponent_thresholds(matching_graph(n));
        for (const auto& [e, di] : d.d) CHECK(di == 1);
    }
}

TEST_CASE("exponent thresholds: exceptional tree cases") {
    // Figure-2 graph: m=2, n=3, E={(1,1),(1,2),(1,3),(2,3)}.
    BipartiteGraph fig2(2, 3, {{1, 1}, {1, 2}, {1, 3}, {2, 3}});
    auto d = exponent_thresholds(fig2);
    CHECK(d.d.at({1, 1}) == 3);
    CHECK(d.d.at({1, 2}) == 3);
    CHECK(d.d.at({1, 3}) == 4);
    CHECK(d.d.at({2, 3}) == 3);
    CHECK(d.reciprocal_sum() > 1);

    // Transposed version must land on the same values in transposed labels.
    BipartiteGraph fig2t(3, 2, {{1, 1}, {2, 1}, {3, 1}, {3, 2}});
    auto dt = exponent_thresholds(fig2t);
    CHECK(dt.d.at({1, 1}) == 3);
    CHECK(dt.d.at({2, 1}) == 3);
    CHECK(dt.d.at({3, 1}) == 4);
    CHECK(dt.d.at({3, 2}) == 3);

    // r != n tree: m=2, n=4, common neighbor y3 interior: d = 4 everywhere.
    BipartiteGraph tree(2, 4, {{1, 1}, {1, 2}, {1, 3}, {2, 3}, {2, 4}});
    auto dtree = exponent_thresholds(tree);
    for (const auto& [e, di] : dtree.d) CHECK(di == 4);
    CHECK(dtree.reciprocal_sum() == Rational(5, 4));

    // Permuted labels of the figure-2 graph (common neighbor is y1, leaf is x1).
    BipartiteGraph fig2p(2, 3, {{1, 1}, {2, 1}, {2, 2}, {2, 3}});
    auto dp = exponent_thresholds(fig2p);
    CHECK(dp.d.at({1, 1}) == 3);
    CHECK(dp.d.at({2, 1}) == 4);
    CHECK(dp.d.at({2, 2}) == 3);
    CHECK(dp.d.at({2, 3}) == 3);
}

TEST_CASE("exponent thresholds: degenerate and bounds") {
    CHECK_THROWS_AS(exponent_thresholds(star_graph(3)), DegenerateGraph);
    CHECK_THROWS_AS(exponent_thresholds(BipartiteGraph(1, 1, {{1, 1}})), DegenerateGraph);

    // Output satisfies sum 1/d > 1 and d <= max+1 except the 2n-2 exception.
    std::vector<BipartiteGraph> gs = {
        sqcup_graph(), box_graph(), matching_graph(4),
        BipartiteGraph(3, 3, {{1, 1}, {1, 2}, {2, 2}, {2, 3}, {3, 3}, {3, 1}}),
        BipartiteGraph(2, 3, {{1, 1}, {1, 2}, {1, 3}, {2, 3}}),
        BipartiteGraph(2, 3, {{1, 1}, {1, 2}, {1, 3}, {2, 1}, {2, 3}}),
        BipartiteGraph(4, 2, {{1, 1}, {2, 1}, {3, 1}, {4, 1}, {4, 2}}),
    };
    for (const auto& g : gs) {
        auto d = exponent_thresholds(g);
        CHECK(d.reciprocal_sum() > 1);
        int cap = std::max(g.m, g.n) + 1;
        int exceptional = 2 * std::max(g.m, g.n) - 2;
        for (const auto& [e, di] : d.d) CHECK((di <= cap || di == exceptional));
    }
}

TEST_CASE("feasibility witness") {
    auto w_sqcup = feasibility_witness(exponent_thresholds(sqcup_graph()));
    CHECK(w_sqcup.reciprocal_sum() == 1);
    for (const auto& [e, p] : w_sqcup.p) CHECK(p.value == 3);

    auto w_box = feasibility_witness(exponent_thresholds(box_graph()));
    for (const auto& [e, p] : w_box.p) CHECK(p.value == 4);

    ExponentAssignment d;
    d.d = {{{1, 1}, 3}, {{1, 2}, 3}, {{1, 3}, 4}, {{2, 3}, 3}};
    auto w = feasibility_witness(d);
    CHECK(w.reciprocal_sum() == 1);
    for (const auto& [e, p] : w.p) CHECK(p.value > d.d.at(e));

    ExponentAssignment bad;
    bad.d = {{{1, 1}, 2}, {{1, 2}, 2}};
    CHECK_THROWS_AS(feasibility_witness(bad), Infeasible);
}
