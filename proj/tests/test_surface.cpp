#include <catch2/catch_amalgamated.hpp>

#include "equimult/parse.hpp"
#include "equimult/print.hpp"
#include "equimult/surface.hpp"

using namespace equimult;

namespace {
const FieldSpec QQ = FieldSpec::rationals();
MultiSeries P3(const std::string& s, const FieldSpec& f = QQ) { return parse_poly(s, f, 3); }

std::array<Scalar, 3> pt(const FieldSpec& f, long a, long b, long c) {
    return {Scalar::of(f, a), Scalar::of(f, b), Scalar::of(f, c)};
}
}  // namespace

TEST_CASE("surface construction and plane cone") {
    Surface s = new_surface(P3("Z^2 - X^2*Y"));
    CHECK(s.n == 2);
    CHECK(s.a[1].is_zero());
    CHECK(s.a[0].same_terms(parse_poly("-X^2*Y", QQ, 2)));
    CHECK(s.cone.plane);
    CHECK(s.cone.linear_form.same_terms(P3("Z")));
    CHECK(multiplicity(s) == 2);
}

TEST_CASE("non-plane cone") {
    Surface s = new_surface(P3("Z^2 - X*Y"));
    CHECK(s.n == 2);
    CHECK(!s.cone.plane);
}

TEST_CASE("cone normalization by completing the square") {
    Surface s = new_surface(P3("Z^2 + 2*X*Z + X^2 + Y^3"));
    CHECK(s.n == 2);
    CHECK(s.cone.plane);
    CHECK(s.cone.linear_form.same_terms(P3("Z + X")));
    CHECK(s.F.same_terms(P3("Z^2 + Y^3")));
    REQUIRE(s.history.size() == 1);
    CHECK(s.history[0].kind == "cone_normalize");
}

TEST_CASE("plane cones in characteristic p") {
    auto F2 = FieldSpec::gf(2);
    Surface s = new_surface(parse_poly("Z^2 + X^2 + Y^3", F2, 3));
    CHECK(s.cone.plane);  // Z^2 + X^2 = (Z+X)^2 in characteristic 2
    CHECK(s.F.same_terms(parse_poly("Z^2 + Y^3", F2, 3)));

    auto F3 = FieldSpec::gf(3);
    Surface t = new_surface(parse_poly("Z^3 + X^3 + Y^4", F3, 3));
    CHECK(t.cone.plane);
    CHECK(t.F.same_terms(parse_poly("Z^3 + Y^4", F3, 3)));
}

TEST_CASE("multiplicity examples") {
    CHECK(new_surface(P3("Z^3 + X^3*Y^3")).n == 3);
    CHECK(new_surface(P3("Z + X^5")).n == 1);
}

TEST_CASE("Z-regularizing direction search") {
    // X*Z has no pure Z^2 term; a linear change is needed
    Surface s = new_surface(P3("X*Z + Y^3"));
    CHECK(s.n == 2);
    CHECK(s.F.coeff(ExpVec(0, 0, 2)).is_one());
    for (unsigned k = 0; k < s.n; ++k) {
        auto ord = s.a[k].order();
        CHECK(ord.known_at_least(static_cast<int>(s.n - k)));
    }
    REQUIRE(!s.history.empty());
    CHECK(s.history[0].kind == "regular_direction");
}

TEST_CASE("newton set") {
    Surface s = new_surface(P3("Z^2 - X^2*Y"));
    auto ns = newton_set(s);
    REQUIRE(ns.size() == 2);
    CHECK(ns[0] == ExpVec(0, 0, 2));
    CHECK(ns[1] == ExpVec(2, 1, 0));

    Surface zn = new_surface(P3("Z^3"));
    auto ns2 = newton_set(zn);
    REQUIRE(ns2.size() == 1);
    CHECK(ns2[0] == ExpVec(0, 0, 3));
}

TEST_CASE("cone multiplicity at a direction") {
    Surface s1 = new_surface(P3("Z^2 - X^2*Y"));  // cone Z^2
    CHECK(cone_multiplicity_at(s1, pt(QQ, 1, 0, 0), 0) == 2);

    Surface s2 = new_surface(P3("Z^2 - X*Y"));  // smooth conic
    CHECK(cone_multiplicity_at(s2, pt(QQ, 1, 0, 0), 0) == 1);
    CHECK(cone_multiplicity_at(s2, pt(QQ, 1, 1, 0), 0) == 0);  // off the cone

    Surface s3 = new_surface(P3("Z^2 - X*Z + Y^5"));  // cone Z(Z-X)
    CHECK(cone_multiplicity_at(s3, pt(QQ, 0, 1, 0), 1) == 2);
}

TEST_CASE("Weierstrass invariants hold after construction") {
    for (const char* txt : {"Z^2 + X*Z^2 - X^3", "Z^3 + X*Y*Z + Y^4", "Z^2 - X^3*Y^3"}) {
        Surface s = new_surface(P3(txt));
        CHECK(s.F.coeff(ExpVec(0, 0, s.n)).is_one());
        CHECK(s.F.degree_in_var(2) == s.n);
        for (unsigned k = 0; k < s.n; ++k)
            CHECK(s.a[k].order().known_at_least(static_cast<int>(s.n - k)));
        if (s.cone.plane)
            CHECK(s.F.initial_form().same_terms(
                MultiSeries::monomial(QQ, 3, ExpVec(0, 0, s.n), Scalar::one(QQ))));
    }
}
