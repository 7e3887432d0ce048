#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "equimult/change.hpp"
#include "equimult/parse.hpp"
#include "equimult/print.hpp"

using namespace equimult;

namespace {
const FieldSpec QQ = FieldSpec::rationals();

MultiSeries P3(const std::string& s, const FieldSpec& f = QQ) { return parse_poly(s, f, 3); }
MultiSeries P2(const std::string& s, const FieldSpec& f = QQ) { return parse_poly(s, f, 2); }
}  // namespace

TEST_CASE("order and initial form") {
    CHECK(P3("Z^2 - X^3").order().value == 2);
    CHECK(P3("X*Y + X^3").order().value == 2);
    CHECK(MultiSeries::zero(QQ, 3).order().kind == OrderVal::Infinite);
    // truncated zero reports a lower bound, not infinity
    auto tz = MultiSeries::zero(QQ, 3, Precision::truncated(7));
    CHECK(tz.order().kind == OrderVal::AtLeast);
    CHECK(tz.order().value == 8);

    CHECK(P3("Z^2 + X*Y*Z + X^5").initial_form().same_terms(P3("Z^2")));
    CHECK(P3("Z^2 - X*Y").initial_form().same_terms(P3("Z^2 - X*Y")));
    CHECK(P3("X^3*Y^3 + Z^2").initial_form().same_terms(P3("Z^2")));
    CHECK_THROWS_AS(MultiSeries::zero(QQ, 3).initial_form(), zero_series);
}

TEST_CASE("arithmetic") {
    CHECK((P2("X + Y") * P2("X - Y")).same_terms(P2("X^2 - Y^2")));
    CHECK((P3("X + Y") + MultiSeries::zero(QQ, 3)).same_terms(P3("X + Y")));
    auto F2 = FieldSpec::gf(2);
    CHECK(P3("Z + X", F2).pow(2).same_terms(P3("Z^2 + X^2", F2)));
    // precision propagates as the weaker of the operands
    auto t = P2("X").truncated_to(4);
    auto prod = t * P2("Y");
    CHECK(!prod.precision().exact);
    CHECK(prod.precision().degree == 4);
    // truncation drops terms above the bound
    auto big = P2("X + X^6").truncated_to(4);
    CHECK(big.same_terms(P2("X")));
}

TEST_CASE("substitution") {
    // the quadratic chart substitution, by hand expansion
    auto f = P3("Z^2 - X^2*Y");
    std::vector<MultiSeries> img = {P3("X"), P3("X*Y"), P3("X*Z")};
    CHECK(f.substituted(img).same_terms(P3("X^2*Z^2 - X^3*Y")));

    auto g = P2("Y^2 - X^3");
    CHECK(g.substituted({P2("X"), P2("X*Y")}).same_terms(P2("X^2*Y^2 - X^3")));

    std::vector<MultiSeries> ident = {P3("X"), P3("Y"), P3("Z")};
    CHECK(f.substituted(ident).same_terms(f));

    std::vector<MultiSeries> bad = {P3("X + 1"), P3("Y"), P3("Z")};
    CHECK_THROWS_AS(f.substituted(bad), order_violation);
}

TEST_CASE("substitution is a ring homomorphism") {
    std::mt19937_64 rng(777);
    auto F5 = FieldSpec::gf(5);
    auto rand_poly = [&](int arity) {
        MultiSeries r = MultiSeries::zero(F5, arity);
        for (int t = 0; t < 4; ++t) {
            ExpVec ev(static_cast<unsigned>(rng() % 3), static_cast<unsigned>(rng() % 3),
                      arity == 3 ? static_cast<unsigned>(rng() % 2) : 0u);
            r.set_coeff(ev, Scalar::residue(F5, rng() % 5));
        }
        return r;
    };
    for (int i = 0; i < 25; ++i) {
        auto f = rand_poly(3);
        auto g = rand_poly(3);
        auto mk_img = [&]() {
            MultiSeries m = rand_poly(3);
            // force order >= 1 and a linear term
            MultiSeries r = MultiSeries::zero(F5, 3);
            for (const auto& [k, c] : m.terms()) {
                ExpVec ev = ExpVec::from_key(k);
                if (ev.total() >= 1) r.set_coeff(ev, c);
            }
            r.set_coeff(ExpVec(1, 0, 0), Scalar::one(F5));
            return r;
        };
        std::vector<MultiSeries> img = {mk_img(), mk_img(), mk_img()};
        CHECK((f + g).substituted(img).same_terms(f.substituted(img) + g.substituted(img)));
        CHECK((f * g).substituted(img).same_terms(f.substituted(img) * g.substituted(img)));
    }
}

TEST_CASE("order of products is additive") {
    std::mt19937_64 rng(31);
    auto F3 = FieldSpec::gf(3);
    for (int i = 0; i < 50; ++i) {
        MultiSeries a = MultiSeries::zero(F3, 2);
        MultiSeries b = MultiSeries::zero(F3, 2);
        for (int t = 0; t < 3; ++t) {
            a.set_coeff(ExpVec(rng() % 4, rng() % 4), Scalar::residue(F3, rng() % 3));
            b.set_coeff(ExpVec(rng() % 4, rng() % 4), Scalar::residue(F3, rng() % 3));
        }
        if (a.is_zero() || b.is_zero()) continue;
        CHECK((a * b).order_finite() == a.order_finite() + b.order_finite());
    }
}

TEST_CASE("variable changes compose and invert") {
    auto id = VariableChange::identity(QQ, 3);
    CHECK(invert_change(id, 8).is_identity());

    // linear shear: Y -> Y + 3X inverts to Y -> Y - 3X
    VariableChange shear({P3("X"), P3("Y + 3*X"), P3("Z")});
    auto inv = invert_change(shear, 8);
    CHECK(inv.image(1).same_terms(P3("Y - 3*X")));
    CHECK(compose_changes(shear, inv).is_identity());

    // random nonlinear changes close up to the working degree
    std::mt19937_64 rng(99);
    auto F5 = FieldSpec::gf(5);
    for (int i = 0; i < 10; ++i) {
        std::vector<MultiSeries> img;
        for (int v = 0; v < 3; ++v) {
            MultiSeries m = MultiSeries::variable(F5, 3, v);
            for (int t = 0; t < 2; ++t) {
                unsigned d = 2 + static_cast<unsigned>(rng() % 2);
                unsigned a = static_cast<unsigned>(rng() % (d + 1));
                unsigned b = static_cast<unsigned>(rng() % (d - a + 1));
                m.set_coeff(ExpVec(a, b, d - a - b), Scalar::residue(F5, rng() % 5));
            }
            img.push_back(m);
        }
        VariableChange phi(img);
        auto psi = invert_change(phi, 8);
        auto comp = compose_changes(phi, psi);
        for (int v = 0; v < 3; ++v) {
            auto diff = (comp.image(v) - MultiSeries::variable(F5, 3, v)).truncated_to(8);
            CHECK(diff.is_zero());
        }
    }
    VariableChange sing({P3("X"), P3("X + Y - Y"), P3("Z")});
    CHECK_THROWS_AS(invert_change(sing, 4), not_invertible);
}

TEST_CASE("printing round-trips") {
    for (const char* txt : {"Z^2 - X^2*Y", "X^3*Y^3 + Z^2", "Z^3 + 2*X*Z + 7",
                            "X^2 - Y^2", "Z^2 - Y^6 + 3*X^3*Y^4 - 3*X^6*Y^2 + X^9"}) {
        auto f = P3(txt);
        CHECK(parse_poly(to_poly_string(f), QQ, 3).same_terms(f));
    }
    auto F7 = FieldSpec::gf(7);
    auto f = P3("Z^2 + 6*X^3*Y^3", F7);
    CHECK(parse_poly(to_poly_string(f), F7, 3).same_terms(f));
}
