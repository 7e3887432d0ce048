#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "equimult/parse.hpp"
#include "equimult/print.hpp"

using namespace equimult;

namespace {
const FieldSpec QQ = FieldSpec::rationals();
}

TEST_CASE("expression parsing") {
    auto f = parse_poly("Z^2 - X^2*Y", QQ, 3);
    CHECK(f.term_count() == 2);
    CHECK(f.coeff(ExpVec(0, 0, 2)).is_one());
    CHECK(f.coeff(ExpVec(2, 1, 0)) == Scalar::of(QQ, -1));

    auto F2 = FieldSpec::gf(2);
    auto g = parse_poly("Z^2 + X^3*Y^3", F2, 3);
    CHECK(g.coeff(ExpVec(3, 3, 0)) == Scalar::one(F2));
    // coefficients reduce modulo the characteristic
    CHECK(parse_poly("2*X + 3*Y", F2, 2).same_terms(parse_poly("Y", F2, 2)));

    auto h = parse_poly("Z^2 - (Y^2 - X^3)^3", QQ, 3);
    CHECK(h.same_terms(parse_poly("Z^2 - Y^6 + 3*X^3*Y^4 - 3*X^6*Y^2 + X^9", QQ, 3)));

    // aliases for post-transform variables
    CHECK(parse_poly("Z1^2 - X1*Y1", QQ, 3).same_terms(parse_poly("Z^2 - X*Y", QQ, 3)));
}

TEST_CASE("parse errors carry positions") {
    CHECK_THROWS_AS(parse_poly("Z^2 - W", QQ, 3), syntax_error);
    CHECK_THROWS_AS(parse_poly("2X", QQ, 3), syntax_error);          // implicit product
    CHECK_THROWS_AS(parse_poly("X^Y", QQ, 3), syntax_error);         // non-integer exponent
    CHECK_THROWS_AS(parse_poly("X^(2)", QQ, 3), syntax_error);
    CHECK_THROWS_AS(parse_poly("(X + Y", QQ, 3), syntax_error);
    CHECK_THROWS_AS(parse_poly("X +", QQ, 3), syntax_error);
    CHECK_THROWS_AS(parse_poly("Z", QQ, 2), syntax_error);           // unknown in 2 variables
    try {
        parse_poly("X + W", QQ, 3);
        FAIL("expected a syntax error");
    } catch (const syntax_error& e) {
        CHECK(e.position == 4);
    }
}

TEST_CASE("print/parse round trip on random polynomials") {
    std::mt19937_64 rng(5150);
    auto F7 = FieldSpec::gf(7);
    for (int trial = 0; trial < 50; ++trial) {
        MultiSeries f = MultiSeries::zero(F7, 3);
        for (int t = 0; t < 6; ++t) {
            unsigned d = rng() % 5;
            unsigned a = rng() % (d + 1), b = rng() % (d - a + 1);
            f.set_coeff(ExpVec(a, b, d - a - b), Scalar::residue(F7, rng() % 7));
        }
        CHECK(parse_poly(to_poly_string(f), F7, 3).same_terms(f));
    }
    for (int trial = 0; trial < 50; ++trial) {
        MultiSeries f = MultiSeries::zero(QQ, 2);
        for (int t = 0; t < 5; ++t) {
            unsigned d = rng() % 5;
            unsigned a = rng() % (d + 1);
            f.set_coeff(ExpVec(a, d - a), Scalar::of(QQ, static_cast<long>(rng() % 9) - 4));
        }
        CHECK(parse_poly(to_poly_string(f), QQ, 2).same_terms(f));
    }
}

TEST_CASE("scalar and direction literals") {
    CHECK(parse_scalar("-3/4", QQ) == Scalar::rational(-3, 4));
    CHECK(parse_scalar("5", QQ) == Scalar::of(QQ, 5));
    auto F7 = FieldSpec::gf(7);
    CHECK(parse_scalar("9", F7) == Scalar::residue(F7, 2));
    CHECK(parse_scalar("1/2", F7) == Scalar::residue(F7, 4));

    auto c3 = parse_direction_coords("1:0:0", QQ);
    CHECK(c3[0].is_one());
    CHECK(c3[1].is_zero());
    auto c2 = parse_direction_coords("1:2", QQ);  // monoidal shorthand (1:0:2)
    CHECK(c2[1].is_zero());
    CHECK(c2[2] == Scalar::of(QQ, 2));
    CHECK_THROWS_AS(parse_direction_coords("1:2:3:4", QQ), error);
}

TEST_CASE("session files") {
    std::string text =
        "# worked instance\n"
        "field = GF:7\n"
        "surface = Z^2 - X^2*Y\n"
        "degree = 12\n"
        "dir = 1:0:0\n";
    auto kv = parse_session(text);
    CHECK(kv.at("field") == "GF:7");
    CHECK(kv.at("surface") == "Z^2 - X^2*Y");
    CHECK(kv.at("degree") == "12");
    CHECK_THROWS_AS(parse_session("not a key value line\n"), error);
}
