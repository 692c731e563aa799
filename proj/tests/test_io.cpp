#include "doctest.h"

#include <sstream>

#include "entangled/io.hpp"
#include "support.hpp"

using namespace entangled;
using entangled::testing::Rng;

TEST_CASE("step function round trip") {
    Rng rng(110);
    for (int it = 0; it < 10; ++it) {
        StepFunction f = testing::random_step_2d(rng, 2, 8);
        std::stringstream ss;
        write_step_function(ss, f);
        CHECK(parse_step_function(ss) == f);
    }
}

TEST_CASE("step function parse errors carry line numbers") {
    {
        std::stringstream ss("STEP d=2 scale=1\n0 0 1/2\n0 0 1/3\n");
        CHECK_THROWS_AS(parse_step_function(ss), DuplicateCell);
    }
    {
        std::stringstream ss("STEP d=2 scale=1\n0 0 1/2\n0 1\n");
        try {
            parse_step_function(ss);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line() == 3);
        }
    }
    {
        std::stringstream ss("STEP d=2 scale=1\n0 0 1/0\n");
        CHECK_THROWS_AS(parse_step_function(ss), ParseError);
    }
    {
        std::stringstream ss("WRONG d=2 scale=1\n");
        CHECK_THROWS_AS(parse_step_function(ss), ParseError);
    }
}

TEST_CASE("kernel round trip with negative scales and indices") {
    StepFunction body(4, -1, {{{0, -3, 2, 0}, Rational(5, 6)}, {{-1, 0, 0, 1}, Rational(-2)}});
    PerfectKernel k(2, 2, body);
    std::stringstream ss;
    write_kernel(ss, k);
    PerfectKernel back = parse_kernel(ss);
    CHECK(back.m == 2);
    CHECK(back.n == 2);
    CHECK(back.body == k.body);
}

TEST_CASE("graph round trip and validation errors") {
    BipartiteGraph g = sqcup_graph();
    std::stringstream ss;
    write_graph(ss, g);
    BipartiteGraph back = parse_graph(ss);
    CHECK(back.m == g.m);
    CHECK(back.edges == g.edges);

    std::stringstream bad("GRAPH m=2 n=2\n3 1\n1 2\n2 1\n");
    CHECK_THROWS_AS(parse_graph(bad), ParseError);

    std::stringstream isolated("GRAPH m=2 n=2\n1 1\n1 2\n");
    CHECK_THROWS_AS(parse_graph(isolated), ParseError);
}

TEST_CASE("coefficient field round trip") {
    Rng rng(111);
    auto sig = Signature({Flag::Haar, Flag::Unit}, {Flag::Unit, Flag::Haar});
    auto field = testing::random_field(rng, sig, 2, 6);
    std::stringstream ss;
    write_coefficients(ss, field, 2, 2);
    int m = 0, n = 0;
    auto back = parse_coefficients(ss, &m, &n);
    CHECK(m == 2);
    CHECK(n == 2);
    CHECK(back.signature == field.signature);
    CHECK(back.coeffs == field.coeffs);
}

TEST_CASE("comments and blank lines are ignored") {
    std::stringstream ss("# a fixture\n\nSTEP d=1 scale=0\n# cell\n3 7/2\n\n");
    StepFunction f = parse_step_function(ss);
    CHECK(f.value_at({3}) == Rational(7, 2));
}
