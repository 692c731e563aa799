#include "doctest.h"

#include <random>

#include "entangled/numbers.hpp"
#include "entangled/radical.hpp"

using namespace entangled;

namespace {

Rational random_rational(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> num(-40, 40), den(1, 24);
    return Rational(num(rng), den(rng));
}

DyadicRational random_dyadic(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> mant(-1000, 1000), exp(-20, 20);
    return DyadicRational(BigInt(mant(rng)), exp(rng));
}

}  // namespace

TEST_CASE("dyadic rational canonical form") {
    DyadicRational d(BigInt(12), 3);  // 12 * 2^3 = 3 * 2^5
    CHECK(d.mantissa() == 3);
    CHECK(d.exponent() == 5);
    CHECK(DyadicRational(BigInt(0), 17).exponent() == 0);
    CHECK(DyadicRational(BigInt(7), -2).to_rational() == Rational(7, 4));
}

TEST_CASE("dyadic rational arithmetic is exact") {
    std::mt19937_64 rng(2024);
    for (int it = 0; it < 300; ++it) {
        DyadicRational a = random_dyadic(rng), b = random_dyadic(rng);
        CHECK((a + b) - b == a);
        CHECK((a * b).to_rational() == a.to_rational() * b.to_rational());
        CHECK((a + b).to_rational() == a.to_rational() + b.to_rational());
        CHECK(a.div_pow2(5).to_rational() * pow2(5) == a.to_rational());
    }
}

TEST_CASE("rational arithmetic is exact") {
    std::mt19937_64 rng(7);
    for (int it = 0; it < 300; ++it) {
        Rational a = random_rational(rng), b = random_rational(rng);
        CHECK((a + b) - b == a);
        if (b != 0) CHECK((a / b) * b == a);
    }
}

TEST_CASE("pow2 and rational_pow") {
    CHECK(pow2(0) == 1);
    CHECK(pow2(5) == 32);
    CHECK(pow2(-3) == Rational(1, 8));
    CHECK(rational_pow(Rational(2, 3), 3) == Rational(8, 27));
    CHECK(rational_pow(Rational(2, 3), -2) == Rational(9, 4));
    CHECK(rational_pow(Rational(5), 0) == 1);
}

TEST_CASE("fraction strings") {
    CHECK(to_fraction_string(Rational(-3, 6)) == "-1/2");
    CHECK(to_fraction_string(Rational(4)) == "4/1");
    CHECK(parse_rational("7/28") == Rational(1, 4));
    CHECK(parse_rational("-9") == Rational(-9));
    CHECK_THROWS_AS(parse_rational("1/0"), Error);
    CHECK(to_decimal_string(Rational(-1, 4), 3) == "-0.250");
}

TEST_CASE("radical products collapse exactly") {
    RadicalValue half_pow(Rational(4, 3), Rational(1, 2));
    CHECK(radical_product({half_pow, half_pow}) == Rational(4, 3));

    RadicalValue cube_root(Rational(2), Rational(1, 3));
    CHECK(radical_product({cube_root, cube_root, cube_root}) == Rational(2));

    CHECK_THROWS_AS(radical_product({RadicalValue(Rational(2), Rational(1, 2)),
                                     RadicalValue(Rational(3), Rational(1, 2))}),
                    MixedBases);
    CHECK_THROWS_AS(radical_product({RadicalValue(Rational(2), Rational(1, 2))}),
                    IrrationalResult);
    CHECK(radical_product({}) == Rational(1));
    // Integer powers multiply across distinct bases.
    CHECK(radical_product({RadicalValue(Rational(2), Rational(2)),
                           RadicalValue(Rational(3, 5), Rational(1))}) == Rational(12, 5));
}
