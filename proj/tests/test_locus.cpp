#include <catch2/catch_amalgamated.hpp>

#include "equimult/discover.hpp"
#include "equimult/parse.hpp"
#include "equimult/print.hpp"

using namespace equimult;

namespace {
const FieldSpec QQ = FieldSpec::rationals();
MultiSeries P3(const std::string& s, const FieldSpec& f = QQ) { return parse_poly(s, f, 3); }
MultiSeries P2(const std::string& s, const FieldSpec& f = QQ) { return parse_poly(s, f, 2); }

CurveIdeal curve(const std::string& g, const std::string& h, const FieldSpec& f = QQ) {
    return make_curve(parse_poly(g, f, 2), parse_poly(h, f, 2));
}

bool locus_contains(const DiscoveredLocus& d, const CurveIdeal& c) {
    for (const auto& e : d.elements)
        if (!e.origin && curve_ideal_equal(*e.curve, c, 16) == Verdict::Yes) return true;
    return false;
}
}  // namespace

TEST_CASE("equimultiplicity by the divisibility criterion") {
    Surface s = new_surface(P3("Z^2 - X^2*Y"));
    CHECK(is_equimultiple(s, curve("0", "X")) == Verdict::Yes);
    CHECK(is_equimultiple(s, curve("0", "Y")) == Verdict::No);

    Surface c = new_surface(P3("Z^2 - (Y^2 - X^3)^3"));
    CHECK(is_equimultiple(c, curve("0", "Y^2 - X^3")) == Verdict::Yes);
}

TEST_CASE("the criterion is invariant under generator changes") {
    // (Z, X + X^2) and (Z, X) generate the same ideal
    Surface s = new_surface(P3("Z^2 - X^2*Y"));
    CHECK(is_equimultiple(s, curve("0", "X + X^2")) == Verdict::Yes);
    CHECK(is_equimultiple(s, curve("X^2", "X")) == Verdict::Yes);  // g == 0 mod h
}

TEST_CASE("permitted curves are the smooth equimultiple ones") {
    Surface s = new_surface(P3("Z^2 - X^2*Y"));
    CHECK(is_permitted(s, curve("0", "X")) == Verdict::Yes);

    Surface c = new_surface(P3("Z^2 - (Y^2 - X^3)^3"));
    CHECK(is_equimultiple(c, curve("0", "Y^2 - X^3")) == Verdict::Yes);
    CHECK(is_permitted(c, curve("0", "Y^2 - X^3")) == Verdict::No);

    Surface zn = new_surface(P3("Z^2"));
    CHECK(is_permitted(zn, curve("0", "Y + X^3")) == Verdict::Yes);
    // any shift inside (h) gives the same ideal (Z, h), hence a member
    CHECK(is_permitted(zn, curve("X*Y + Y^3", "X + Y^2")) == Verdict::Yes);
    CHECK(is_permitted(zn, curve("X*Y", "X + Y^2")) == Verdict::No);
}

TEST_CASE("normalization of smooth curves") {
    // eliminate Y from its own tail: h = Y + X^3 + Y^2 X
    CurveIdeal c = normalize_smooth_curve(curve("0", "Y + X^3 + Y^2*X"), 10);
    CHECK(c.canonical == CurveIdeal::Form::Transversal);
    // b solves b = X^3 + X b^2: X^3 + X^7 + ...
    MultiSeries b = c.h - MultiSeries::variable(QQ, 2, 1);
    CHECK(b.coeff(ExpVec(3, 0)) == Scalar::one(QQ));
    CHECK(b.coeff(ExpVec(7, 0)) == Scalar::one(QQ));
    // the rewritten generator vanishes on the curve at precision
    auto back = P2("Y + X^3 + Y^2*X").substituted({MultiSeries::variable(QQ, 2, 0), -b});
    CHECK(back.truncated_to(8).is_zero());

    CurveIdeal t = normalize_smooth_curve(curve("0", "X + Y^2"), 10);
    CHECK(t.canonical == CurveIdeal::Form::Tangent);
    CHECK(t.h.same_terms(P2("X + Y^2")));

    CurveIdeal d = normalize_smooth_curve(curve("0", "X"), 10);
    CHECK(d.canonical == CurveIdeal::Form::Divisor);

    CHECK_THROWS_AS(normalize_smooth_curve(curve("0", "X^2 - Y^3"), 10), not_smooth);
}

TEST_CASE("tangency classification") {
    CHECK(tangency_class(normalize_smooth_curve(curve("0", "X"), 10)) ==
          Tangency::IsExceptionalDivisor);
    CHECK(tangency_class(normalize_smooth_curve(curve("0", "X - Y^2"), 10)) ==
          Tangency::Tangent);
    CHECK(tangency_class(normalize_smooth_curve(curve("0", "Y"), 10)) ==
          Tangency::Transversal);
    // the exact classifier agrees
    CHECK(classify_tangency(curve("0", "X")) == Tangency::IsExceptionalDivisor);
    CHECK(classify_tangency(curve("0", "X - Y^2")) == Tangency::Tangent);
    CHECK(classify_tangency(curve("0", "Y + X^5")) == Tangency::Transversal);
    // a unit multiple of X is still the divisor
    CHECK(classify_tangency(curve("0", "X + X^2")) == Tangency::IsExceptionalDivisor);
}

TEST_CASE("curve ideal equality") {
    CHECK(curve_ideal_equal(curve("0", "X + X^2"), curve("0", "X")) == Verdict::Yes);
    CHECK(curve_ideal_equal(curve("X^2", "X"), curve("0", "X")) == Verdict::Yes);
    CHECK(curve_ideal_equal(curve("0", "X"), curve("0", "Y")) == Verdict::No);
    CHECK(curve_ideal_equal(curve("Y", "X"), curve("0", "X")) == Verdict::No);
    CHECK(curve_ideal_equal(curve("0", "Y^2 - X^3"), curve("0", "X^3 - Y^2")) ==
          Verdict::Yes);
}

TEST_CASE("discovery over GF(5): monomial surface") {
    auto F5 = FieldSpec::gf(5);
    Surface s = new_surface(parse_poly("Z^2 - X^3*Y^3", F5, 3));
    auto d = discover_locus(s, {2, 2});
    CHECK(d.smooth_exhaustive);
    CHECK(d.elements.size() == 3);  // M, (Z,X), (Z,Y)
    CHECK(d.elements[0].origin);
    CHECK(locus_contains(d, curve("0", "X", F5)));
    CHECK(locus_contains(d, curve("0", "Y", F5)));
}

TEST_CASE("discovery over GF(5): one permitted curve") {
    auto F5 = FieldSpec::gf(5);
    Surface s = new_surface(parse_poly("Z^2 - X^2*Y", F5, 3));
    auto d = discover_locus(s, {2, 2});
    CHECK(d.elements.size() == 2);  // M, (Z,X)
    CHECK(locus_contains(d, curve("0", "X", F5)));
}

TEST_CASE("discovery over GF(7): singular equimultiple curve") {
    auto F7 = FieldSpec::gf(7);
    Surface s = new_surface(parse_poly("Z^2 - (Y^2 - X^3)^3", F7, 3));
    auto d = discover_locus(s, {3, 2});
    CHECK(d.elements.size() == 2);  // M and the cuspidal curve
    CHECK(locus_contains(d, curve("0", "Y^2 - X^3", F7)));
    // the singular member is flagged, not certified prime
    for (const auto& e : d.elements)
        if (!e.origin) CHECK(e.curve->irred == CurveIdeal::Irred::Unverified);
}

TEST_CASE("discovery respects primality screening") {
    auto F5 = FieldSpec::gf(5);
    // (Z, XY) satisfies the divisibility criterion but is not prime
    Surface s = new_surface(parse_poly("Z^2 - X^3*Y^3", F5, 3));
    auto d = discover_locus(s, {4, 2});
    for (const auto& e : d.elements) {
        if (e.origin) continue;
        CHECK(e.curve->irred != CurveIdeal::Irred::CertifiedReducible);
        CHECK(curve_ideal_equal(*e.curve, curve("0", "X*Y", F5), 16) != Verdict::Yes);
    }
}

TEST_CASE("at most one permitted curve under a non-plane cone") {
    auto F2 = FieldSpec::gf(2);
    // Z^2 + XZ + X^2 is irreducible over GF(2); (Z,X) is permitted
    Surface s = new_surface(parse_poly("Z^2 + X*Z + X^2", F2, 3));
    REQUIRE(!s.cone.plane);
    auto d = discover_locus(s, {3, 2});
    unsigned smooth = 0;
    for (const auto& e : d.elements)
        if (!e.origin && e.curve->smooth) ++smooth;
    CHECK(smooth == 1);
    CHECK(locus_contains(d, curve("0", "X", F2)));

    Surface q = new_surface(parse_poly("Z^2 + X*Y", F2, 3));
    REQUIRE(!q.cone.plane);
    auto dq = discover_locus(q, {3, 2});
    unsigned smooth_q = 0;
    for (const auto& e : dq.elements)
        if (!e.origin && e.curve->smooth) ++smooth_q;
    CHECK(smooth_q <= 1);
}

TEST_CASE("heuristic discovery over Q") {
    Surface s = new_surface(P3("Z^2 - X^2*Y"));
    auto d = discover_locus(s, {4, 3});
    CHECK(d.heuristic_only);
    CHECK(locus_contains(d, curve("0", "X")));
    CHECK(d.elements.size() == 2);
}

TEST_CASE("criterion agrees with the Newton-set route after moving to (Z,X)") {
    // direct cross-check of the two routes on explicit curves
    Surface s = new_surface(P3("Z^2 - X^2*Y"));
    for (const char* h : {"X", "Y", "X + Y^2", "Y + X^2"}) {
        CurveIdeal c = curve("0", h);
        VariableChange ch = change_to_zx(c, 12);
        MultiSeries f2 = ch.apply(s.F);
        bool newton_ok = true;
        for (const auto& [key, coef] : f2.terms()) {
            (void)coef;
            ExpVec ev = ExpVec::from_key(key);
            if (ev.e[0] + ev.e[2] < s.n) newton_ok = false;
        }
        CHECK((is_permitted(s, c) == Verdict::Yes) == newton_ok);
    }
}
