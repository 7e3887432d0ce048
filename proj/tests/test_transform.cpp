#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "equimult/parse.hpp"
#include "equimult/print.hpp"
#include "equimult/transform.hpp"

using namespace equimult;

namespace {
const FieldSpec QQ = FieldSpec::rationals();
MultiSeries P3(const std::string& s, const FieldSpec& f = QQ) { return parse_poly(s, f, 3); }
MultiSeries P2(const std::string& s, const FieldSpec& f = QQ) { return parse_poly(s, f, 2); }

Direction dir(const FieldSpec& f, const std::string& text, bool monoidal = false) {
    return make_direction(parse_direction_coords(text, f), monoidal);
}

CurveIdeal zx_center(const FieldSpec& f) {
    return make_curve(MultiSeries::zero(f, 2), MultiSeries::variable(f, 2, 0));
}
}  // namespace

TEST_CASE("direction enumeration") {
    auto F2 = FieldSpec::gf(2);
    Surface s = new_surface(parse_poly("Z^2 + X^2*Y", F2, 3));
    auto dirs = enumerate_directions(s, TransformKind::Quadratic);
    CHECK(dirs.size() == 3);  // the line Z = 0 in P^2(GF(2))
    for (const auto& [u, m] : dirs) CHECK(m == 2);

    auto F3 = FieldSpec::gf(3);
    Surface conic = new_surface(parse_poly("Z^2 - X*Y", F3, 3));
    auto cdirs = enumerate_directions(conic, TransformKind::Quadratic);
    CHECK(cdirs.size() == 4);  // points of the conic Z^2 = XY over GF(3)
    for (const auto& [u, m] : cdirs) CHECK(m == 1);

    Surface mono = new_surface(P3("Z^2 - X^5"));
    auto mdirs = enumerate_directions(mono, TransformKind::Monoidal);
    REQUIRE(mdirs.size() == 1);
    CHECK(mdirs[0].first.coords[0].is_one());
    CHECK(mdirs[0].first.coords[2].is_zero());
}

TEST_CASE("quadratic transform: worked instances") {
    Surface s1 = new_surface(P3("Z^2 - X^2*Y"));
    auto r1 = quadratic_transform(s1, dir(QQ, "1:0:0"));
    CHECK(!r1.record.multiplicity_dropped);
    CHECK(r1.surface->n == 2);
    CHECK(r1.surface->F.same_terms(P3("Z^2 - X*Y")));

    Surface s2 = new_surface(P3("Z^2 - X^3*Y^3"));
    auto r2 = quadratic_transform(s2, dir(QQ, "1:0:0"));
    CHECK(r2.surface->F.same_terms(P3("Z^2 - X^4*Y^3")));

    Surface s3 = new_surface(P3("Z^2 - (Y^2 - X^3)^3"));
    auto r3 = quadratic_transform(s3, dir(QQ, "1:0:0"));
    CHECK(r3.surface->F.same_terms(P3("Z^2 - X^4*(Y^2 - X)^3")));

    CHECK_THROWS_AS(quadratic_transform(s1, dir(QQ, "1:1:1")), direction_not_on_cone);
}

TEST_CASE("the defining identity of the chart map") {
    Surface s = new_surface(P3("Z^2 - X^2*Y"));
    auto r = quadratic_transform(s, dir(QQ, "1:0:0"));
    auto img = s.F.substituted(r.record.hom);
    auto divided = img.divided_by_var_power(0, s.n);
    CHECK(r.record.post_is_identity);
    CHECK(divided.same_terms(r.surface->F));
}

TEST_CASE("quadratic transform in the second chart swaps the divisor to X") {
    Surface s = new_surface(P3("Z^2 - X^2*Y"));
    auto r = quadratic_transform(s, dir(QQ, "0:1:0"));
    CHECK(!r.record.multiplicity_dropped);
    CHECK(r.surface->F.same_terms(P3("Z^2 - X*Y^2")));
    REQUIRE(r.record.divisor.has_value());
    CHECK(curve_ideal_equal(*r.record.divisor, zx_center(QQ), 16) == Verdict::Yes);
}

TEST_CASE("monoidal transform: worked instances") {
    auto center = zx_center(QQ);

    Surface s1 = new_surface(P3("Z^2 - X^5"));
    auto r1 = monoidal_transform(s1, center, dir(QQ, "1:0", true));
    CHECK(!r1.record.multiplicity_dropped);
    CHECK(r1.surface->F.same_terms(P3("Z^2 - X^3")));

    Surface s2 = new_surface(P3("Z^2 - X^3*Y"));
    auto r2 = monoidal_transform(s2, center, dir(QQ, "1:0", true));
    CHECK(!r2.record.multiplicity_dropped);
    CHECK(r2.surface->F.same_terms(P3("Z^2 - X*Y")));

    Surface s3 = new_surface(P3("Z^2 - X^3"));
    auto r3 = monoidal_transform(s3, center, dir(QQ, "1:0", true));
    CHECK(r3.record.multiplicity_dropped);
    CHECK(r3.record.n_after == 1);

    Surface bad = new_surface(P3("Z^2 - X*Y"));
    CHECK_THROWS_AS(monoidal_transform(bad, center, dir(QQ, "1:0", true)),
                    center_not_permitted);
}

TEST_CASE("strict transforms of curves") {
    Surface s = new_surface(P3("Z^2 - (Y^2 - X^3)^3"));
    auto r = quadratic_transform(s, dir(QQ, "1:0:0"));

    auto qy = LocusElement::curve_element(make_curve(MultiSeries::zero(QQ, 2), P2("Y")));
    auto st1 = strict_transform_curve(qy, r.record);
    REQUIRE(st1.status == StrictTransformStatus::Ok);
    CHECK(curve_ideal_equal(*st1.element->curve,
                            make_curve(MultiSeries::zero(QQ, 2), P2("Y")), 16) ==
          Verdict::Yes);

    auto qx = LocusElement::curve_element(zx_center(QQ));
    auto st2 = strict_transform_curve(qx, r.record);
    CHECK(st2.status == StrictTransformStatus::NotPassingThrough);

    auto cusp = LocusElement::curve_element(
        make_curve(MultiSeries::zero(QQ, 2), P2("Y^2 - X^3")));
    auto st3 = strict_transform_curve(cusp, r.record);
    REQUIRE(st3.status == StrictTransformStatus::Ok);
    CHECK(curve_ideal_equal(*st3.element->curve,
                            make_curve(MultiSeries::zero(QQ, 2), P2("Y^2 - X")), 16) ==
          Verdict::Yes);
}

TEST_CASE("nu is a pure renaming") {
    auto e = LocusElement::curve_element(make_curve(P2("X^2"), P2("Y + X^3")));
    auto img = nu_map(e);
    CHECK(curve_ideal_equal(*img.curve, *e.curve, 16) == Verdict::Yes);
    CHECK(nu_map(LocusElement::origin_element()).origin);
}

TEST_CASE("induced change under the identity") {
    auto phi = VariableChange::identity(QQ, 3);
    auto u = dir(QQ, "1:2:0");
    auto ind = induced_change(phi, u, 10);
    CHECK(ind.u_image == u);
    CHECK(ind.psi.is_identity());
}

TEST_CASE("induced change under a shear") {
    // Y -> Y' + 3 X' sends (1:3:0) to (1:0:0); psi is the identity renaming
    VariableChange shear({P3("X"), P3("Y + 3*X"), P3("Z")});
    auto ind = induced_change(shear, dir(QQ, "1:3:0"), 10);
    CHECK(ind.u_image.coords[0].is_one());
    CHECK(ind.u_image.coords[1].is_zero());
    CHECK(ind.u_image.coords[2].is_zero());
    for (int v = 0; v < 3; ++v)
        CHECK(ind.psi.image(v).same_terms(MultiSeries::variable(QQ, 3, v)));
}

TEST_CASE("induced change closes the commuting square on random data") {
    std::mt19937_64 rng(808);
    auto F5 = FieldSpec::gf(5);
    const int deg = 10;
    int tested = 0;
    for (int trial = 0; trial < 20 && tested < 10; ++trial) {
        std::vector<MultiSeries> img;
        for (int v = 0; v < 3; ++v) {
            MultiSeries m = MultiSeries::zero(F5, 3);
            for (int w = 0; w < 3; ++w) {
                ExpVec ev;
                ev.e[w] = 1;
                m.set_coeff(ev, Scalar::residue(F5, rng() % 5));
            }
            unsigned d = 2 + rng() % 2;
            unsigned a = rng() % (d + 1), b = rng() % (d - a + 1);
            m.set_coeff(ExpVec(a, b, d - a - b), Scalar::residue(F5, rng() % 5));
            img.push_back(m);
        }
        std::optional<VariableChange> phi_opt;
        try {
            VariableChange cand(img);
            detail::matrix_inverse(cand.linear_matrix());
            phi_opt = cand;
        } catch (const not_invertible&) {
            continue;
        } catch (const order_violation&) {
            continue;
        }
        VariableChange phi = *phi_opt;
        std::array<Scalar, 3> raw = {Scalar::residue(F5, 1 + rng() % 4),
                                     Scalar::residue(F5, rng() % 5),
                                     Scalar::residue(F5, rng() % 5)};
        Direction u = make_direction(raw);
        // the constructor itself asserts psi pi_u = pi_{u'} phi at precision
        auto ind = induced_change(phi, u, deg);
        auto pi1 = detail::quadratic_hom(F5, u);
        auto pi2 = detail::quadratic_hom(F5, ind.u_image);
        for (int v = 0; v < 3; ++v) {
            auto lhs = pi1[v].substituted(ind.psi.images()).truncated_to(deg);
            auto rhs = phi.image(v).substituted(pi2).truncated_to(deg);
            CHECK((lhs - rhs).is_zero());
        }
        ++tested;
    }
    CHECK(tested >= 10);
}

TEST_CASE("blowdown construction: exact instances") {
    auto g1 = blowdown_construct(P2("Y^2"), 12);
    CHECK(g1.H.same_terms(P2("Y^2 + X^3")));
    CHECK(g1.unit.same_terms(P2("1")));
    CHECK(g1.H.precision().exact);
    CHECK(g1.lambda == 2);
    CHECK(g1.min_order_case);

    auto g2 = blowdown_construct(P2("Y^3"), 12);
    CHECK(g2.H.same_terms(P2("Y^3 + X^4")));
    CHECK(g2.unit.same_terms(P2("1")));
    CHECK(!g2.min_order_case);
}

TEST_CASE("blowdown construction: defining identity at precision") {
    const int deg = 12;
    auto bd = blowdown_construct(P2("Y^2 + Y^3"), deg);
    CHECK(bd.lambda == 2);
    auto X = MultiSeries::variable(QQ, 2, 0);
    auto Y = MultiSeries::variable(QQ, 2, 1);
    auto lhs = bd.H.substituted({X, X * Y}).divided_by_var_power(0, 2).truncated_to(deg);
    auto rhs = (bd.unit * (X + P2("Y^2 + Y^3"))).truncated_to(deg);
    CHECK((lhs - rhs).is_zero());
    CHECK(bd.H.order_finite() == 2);
    CHECK(!bd.H.coeff(ExpVec(0, 2)).is_zero());
}

TEST_CASE("multiplicity never increases under transforms") {
    std::mt19937_64 rng(119);
    auto F3 = FieldSpec::gf(3);
    for (int trial = 0; trial < 15; ++trial) {
        MultiSeries f = MultiSeries::monomial(F3, 3, ExpVec(0, 0, 2), Scalar::one(F3));
        for (int t = 0; t < 3; ++t) {
            unsigned d = 2 + rng() % 3;
            unsigned a = rng() % (d + 1), b = rng() % (d - a + 1);
            f.set_coeff(ExpVec(a, b, d - a - b), Scalar::residue(F3, rng() % 3));
        }
        f.set_coeff(ExpVec(0, 0, 2), Scalar::one(F3));
        if (f.order_finite() != 2) continue;
        Surface s = new_surface(f);
        if (s.n != 2) continue;
        for (const auto& [u, m] : enumerate_directions(s, TransformKind::Quadratic)) {
            auto r = quadratic_transform(s, u);
            bool bounded = r.surface ? r.surface->n <= s.n : r.record.n_after < s.n;
            CHECK(bounded);  // the transform itself also asserts this
        }
    }
}
