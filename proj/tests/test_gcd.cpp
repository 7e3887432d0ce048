#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "equimult/gcd.hpp"
#include "equimult/parse.hpp"

using namespace equimult;

namespace {
const FieldSpec QQ = FieldSpec::rationals();
MultiSeries P2(const std::string& s, const FieldSpec& f = QQ) { return parse_poly(s, f, 2); }
}  // namespace

TEST_CASE("polynomial exact division") {
    auto q = poly_divide_exact(P2("X^2 - Y^2"), P2("X + Y"));
    REQUIRE(q.has_value());
    CHECK(q->same_terms(P2("X - Y")));
    CHECK(!poly_divide_exact(P2("X^2 - Y^2 + X"), P2("X + Y")).has_value());
    CHECK(!poly_divide_exact(P2("Y"), P2("X")).has_value());
}

TEST_CASE("bivariate gcd") {
    auto a = P2("(X + Y^2)^2 * (1 + Y)");
    auto b = P2("(X + Y^2) * X");
    auto g = poly_gcd_bivariate(a, b);
    CHECK(g.same_terms(P2("X + Y^2")));
    CHECK(poly_gcd_bivariate(P2("X"), P2("Y")).same_terms(P2("1")));
    CHECK(poly_gcd_bivariate(P2("0"), P2("3*X")).same_terms(P2("X")));
    // gcd splits off the univariate content as well
    auto g2 = poly_gcd_bivariate(P2("X^2*Y + X^2"), P2("X^3"));
    CHECK(g2.same_terms(P2("X^2")));
}

TEST_CASE("series divisibility: polynomial quotients") {
    auto dv = divide_exact(P2("X + Y^2"), P2("(X + Y^2)^2 * (1 + Y)"));
    CHECK(dv.verdict == Verdict::Yes);
    REQUIRE(dv.quotient.has_value());
    CHECK(dv.quotient->same_terms(P2("(X + Y^2)*(1 + Y)")));

    CHECK(divide_exact(P2("X"), P2("Y")).verdict == Verdict::No);

    auto z = divide_exact(P2("X"), MultiSeries::zero(QQ, 2));
    CHECK(z.verdict == Verdict::Yes);
    CHECK(z.quotient->is_zero());

    CHECK_THROWS_AS(divide_exact(MultiSeries::zero(QQ, 2), P2("X")), division_by_zero);
}

TEST_CASE("series divisibility happens in the local ring") {
    // X + X^2 = X(1+X) differs from X by a unit, so it divides X^2*Y
    // with a non-polynomial quotient
    auto dv = divide_exact(P2("X + X^2"), P2("X^2*Y"), 8);
    CHECK(dv.verdict == Verdict::Yes);
    REQUIRE(dv.quotient.has_value());
    auto residual = (P2("X + X^2") * *dv.quotient - P2("X^2*Y")).truncated_to(8);
    CHECK(residual.is_zero());
    // but X^2 does not divide X Y
    CHECK(divide_exact(P2("X^2"), P2("X*Y")).verdict == Verdict::No);
    // a node is not a local factor of one of its polynomial branches
    CHECK(divide_exact(P2("Y^2 - X^2 - X^3"), P2("Y - X")).verdict == Verdict::No);
}

TEST_CASE("divisibility verdicts on truncated data") {
    auto h = P2("X").truncated_to(5);
    auto a = P2("X*Y + X^3").truncated_to(5);
    auto dv = divide_exact(h, a, 5);
    CHECK(dv.verdict == Verdict::Unknown);  // divisible as far as visible
    auto bad = divide_exact(P2("X").truncated_to(5), P2("Y^2").truncated_to(5), 5);
    CHECK(bad.verdict == Verdict::No);  // certified by a visible obstruction
}

TEST_CASE("square-free decomposition") {
    auto d1 = squarefree_decompose(P2("X^3*Y^3"));
    REQUIRE(d1.factors.size() == 2);
    CHECK(d1.factors[0].factor.same_terms(P2("X")));
    CHECK(d1.factors[0].multiplicity == 3);
    CHECK(d1.factors[1].factor.same_terms(P2("Y")));
    CHECK(d1.factors[1].multiplicity == 3);

    auto d2 = squarefree_decompose(P2("(Y^2 - X^3)^3"));
    REQUIRE(d2.factors.size() == 1);
    CHECK(d2.factors[0].multiplicity == 3);
    // canonical normalization is monic in the graded order
    CHECK(d2.factors[0].factor.same_terms(P2("X^3 - Y^2")));

    auto F2 = FieldSpec::gf(2);
    auto d3 = squarefree_decompose(parse_poly("X^2 + Y^2", F2, 2));
    REQUIRE(d3.factors.size() == 1);
    CHECK(d3.factors[0].factor.same_terms(parse_poly("X + Y", F2, 2)));
    CHECK(d3.factors[0].multiplicity == 2);
}

TEST_CASE("square-free decomposition reconstitutes its input") {
    std::mt19937_64 rng(2024);
    for (auto pc : {std::uint64_t{0}, std::uint64_t{3}, std::uint64_t{5}}) {
        FieldSpec f = pc == 0 ? QQ : FieldSpec::gf(pc);
        auto rand_poly = [&](unsigned maxdeg) {
            MultiSeries r = MultiSeries::zero(f, 2);
            for (int t = 0; t < 3; ++t) {
                unsigned d = rng() % (maxdeg + 1);
                unsigned i = rng() % (d + 1);
                Scalar c = pc == 0 ? Scalar::of(f, static_cast<long>(rng() % 5) - 2)
                                   : Scalar::residue(f, rng() % pc);
                r.set_coeff(ExpVec(i, d - i), c);
            }
            return r;
        };
        for (int trial = 0; trial < 20; ++trial) {
            MultiSeries a = rand_poly(2);
            MultiSeries b = rand_poly(2);
            if (a.is_zero() || b.is_zero()) continue;
            MultiSeries prod = a * a * b;
            if (prod.is_constant()) continue;
            auto dec = squarefree_decompose(prod);
            MultiSeries back = MultiSeries::constant(f, 2, dec.unit);
            for (const auto& sf : dec.factors) back = back * sf.factor.pow(sf.multiplicity);
            CHECK(back.same_terms(prod));
            // factors are pairwise coprime and square-free
            for (std::size_t i = 0; i < dec.factors.size(); ++i) {
                const auto& fi = dec.factors[i].factor;
                auto g3 = poly_gcd_bivariate(poly_gcd_bivariate(fi, fi.derivative(0)),
                                             fi.derivative(1));
                if (!fi.derivative(0).is_zero() || !fi.derivative(1).is_zero())
                    CHECK(g3.is_constant());
                for (std::size_t j = i + 1; j < dec.factors.size(); ++j)
                    CHECK(poly_gcd_bivariate(fi, dec.factors[j].factor).is_constant());
            }
        }
    }
}
