#include <catch2/catch_amalgamated.hpp>

#include "equimult/parse.hpp"
#include "equimult/report.hpp"
#include "equimult/verify.hpp"

using namespace equimult;

namespace {
const FieldSpec QQ = FieldSpec::rationals();
MultiSeries P3(const std::string& s, const FieldSpec& f = QQ) { return parse_poly(s, f, 3); }

CurveIdeal zx(const FieldSpec& f) {
    return make_curve(MultiSeries::zero(f, 2), MultiSeries::variable(f, 2, 0));
}
}  // namespace

TEST_CASE("case (a): the center survives") {
    for (const FieldSpec& f : {QQ, FieldSpec::gf(7)}) {
        Surface s = new_surface(parse_poly("Z^2 - X^5", f, 3));
        auto reports = check_case_a(s, zx(f), {4, 3});
        REQUIRE(reports.size() == 1);
        CHECK(reports[0].verdict == ReportVerdict::Pass);
        CHECK(reports[0].branch == "nu(E0(S))");
    }
}

TEST_CASE("case (a): the center is erased") {
    for (const FieldSpec& f : {QQ, FieldSpec::gf(7)}) {
        Surface s = new_surface(parse_poly("Z^2 - X^3*Y", f, 3));
        auto reports = check_case_a(s, zx(f), {4, 3});
        REQUIRE(reports.size() == 1);
        CHECK(reports[0].verdict == ReportVerdict::Pass);
        CHECK(reports[0].branch == "nu(E0(S) \\ {P})");
    }
}

TEST_CASE("case (a): hypothesis unmet") {
    Surface s = new_surface(P3("Z^2 - X*Y"));
    auto reports = check_case_a(s, zx(QQ), {4, 3});
    REQUIRE(reports.size() == 1);
    CHECK(reports[0].verdict == ReportVerdict::Inconclusive);
}

TEST_CASE("case (b.2): divisor and a transversal curve") {
    for (const FieldSpec& f : {QQ, FieldSpec::gf(7)}) {
        Surface s = new_surface(parse_poly("Z^2 - X^3*Y^3", f, 3));
        Direction u = make_direction(
            {Scalar::one(f), Scalar::zero(f), Scalar::zero(f)});
        auto rep = check_case_b(s, u, {4, 3});
        CHECK(rep.theorem_case == "b2");
        CHECK(rep.verdict == ReportVerdict::Pass);
        bool saw_i = false, saw_iii = false;
        for (const auto& m : rep.classification) {
            if (m.kind == "type_i") saw_i = true;
            if (m.kind == "type_iii") saw_iii = true;
        }
        CHECK(saw_i);
        CHECK(saw_iii);
    }
}

TEST_CASE("case (b.2): a tangent curve forces the divisor") {
    for (const FieldSpec& f : {QQ, FieldSpec::gf(7)}) {
        Surface s = new_surface(parse_poly("Z^2 - (Y^2 - X^3)^3", f, 3));
        Direction u = make_direction(
            {Scalar::one(f), Scalar::zero(f), Scalar::zero(f)});
        auto rep = check_case_b(s, u, {4, 3});
        CHECK(rep.verdict == ReportVerdict::Pass);
        bool saw_i = false, saw_ii = false;
        for (const auto& m : rep.classification) {
            if (m.kind == "type_i") saw_i = true;
            if (m.kind == "type_ii") {
                saw_ii = true;
                REQUIRE(m.preimage.has_value());
                CHECK(!m.preimage->curve->smooth);
            }
        }
        CHECK(saw_i);
        CHECK(saw_ii);
    }
}

TEST_CASE("case (b.1): vacuous loci on both sides") {
    for (const FieldSpec& f : {QQ, FieldSpec::gf(7)}) {
        Surface s = new_surface(parse_poly("Z^2 - X*Z + Y^5", f, 3));
        REQUIRE(!s.cone.plane);
        Direction u = make_direction(
            {Scalar::zero(f), Scalar::one(f), Scalar::zero(f)});
        auto rep = check_case_b(s, u, {4, 3});
        CHECK(rep.theorem_case == "b1");
        CHECK(rep.verdict == ReportVerdict::Pass);
        CHECK(detail::curves_only(rep.locus_before).empty());
        CHECK(detail::curves_only(rep.locus_after).empty());
    }
}

TEST_CASE("normal form oracle") {
    Surface s = new_surface(P3("Z^2 - X^2*Y"));
    CHECK(normal_form_oracle(s, zx(QQ), 12));
    auto zy = make_curve(MultiSeries::zero(QQ, 2), MultiSeries::variable(QQ, 2, 1));
    CHECK(!normal_form_oracle(s, zy, 12));
    Surface zn = new_surface(P3("Z^3"));
    CHECK(normal_form_oracle(zn, zx(QQ), 12));
    CHECK(normal_form_oracle(zn, make_curve(MultiSeries::zero(QQ, 2),
                                            parse_poly("Y + X^2", QQ, 2)),
                             12));
}

TEST_CASE("oracle agreement with the divisibility route") {
    auto F5 = FieldSpec::gf(5);
    int agreements = 0;
    for (std::uint64_t seed = 1; seed <= 12; ++seed) {
        auto gen = generate_surface(F5, 2 + seed % 3, 6, seed, Recipe::Planted);
        if (!gen.planted || !gen.planted->smooth) continue;
        bool divisibility = is_permitted(gen.surface, *gen.planted) == Verdict::Yes;
        bool oracle = normal_form_oracle(gen.surface, *gen.planted, 16);
        CHECK(divisibility == oracle);
        ++agreements;
    }
    CHECK(agreements >= 4);
}

TEST_CASE("random surfaces are deterministic") {
    auto F3 = FieldSpec::gf(3);
    for (std::uint64_t seed : {1ull, 77ull, 4242ull}) {
        Surface a = random_surface(F3, 3, 6, seed);
        Surface b = random_surface(F3, 3, 6, seed);
        CHECK(a.F == b.F);
        CHECK(to_poly_string(a.F) == to_poly_string(b.F));
    }
}

TEST_CASE("planted surfaces carry their curve") {
    auto F5 = FieldSpec::gf(5);
    int in_bounds = 0, found = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        auto gen = generate_surface(F5, 2, 6, seed, Recipe::Planted);
        REQUIRE(gen.planted.has_value());
        CHECK(is_equimultiple(gen.surface, *gen.planted) == Verdict::Yes);
        // planted data can exceed the search bounds; within them it must
        // always be rediscovered
        if (gen.planted->h.max_degree() > 4) continue;
        ++in_bounds;
        auto d = discover_locus(gen.surface, {4, 3});
        for (const auto& e : d.elements)
            if (!e.origin &&
                curve_ideal_equal(*e.curve, *gen.planted, 16) == Verdict::Yes) {
                ++found;
                break;
            }
    }
    CHECK(in_bounds >= 5);
    CHECK(found == in_bounds);
}

TEST_CASE("generator invariants on many draws") {
    auto F2 = FieldSpec::gf(2);
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        Surface s = random_surface(F2, 2, 6, seed);
        CHECK(s.n == 2);
        CHECK(s.F.coeff(ExpVec(0, 0, 2)).is_one());
        for (unsigned k = 0; k < s.n; ++k)
            CHECK(s.a[k].order().known_at_least(static_cast<int>(s.n - k)));
    }
}

TEST_CASE("monoidal lemma recipe: non-plane cones drop multiplicity") {
    auto F3 = FieldSpec::gf(3);
    int exercised = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        auto gen = generate_surface(F3, 2, 6, seed, Recipe::NotPlaneMonoidal);
        REQUIRE(!gen.surface.cone.plane);
        REQUIRE(gen.planted.has_value());
        for (const auto& [u, m] : enumerate_directions(gen.surface, TransformKind::Monoidal)) {
            auto r = monoidal_transform(gen.surface, *gen.planted, u);
            CHECK(r.record.multiplicity_dropped);
            ++exercised;
        }
    }
    CHECK(exercised >= 10);
}

TEST_CASE("theorem reports serialize to stable JSON") {
    Surface s = new_surface(P3("Z^2 - X^3*Y^3"));
    Direction u = make_direction({Scalar::one(QQ), Scalar::zero(QQ), Scalar::zero(QQ)});
    auto rep = check_case_b(s, u, {4, 3});
    auto j1 = theorem_report_json(rep).dump(2);
    auto j2 = theorem_report_json(check_case_b(s, u, {4, 3})).dump(2);
    CHECK(j1 == j2);
    auto parsed = ordered_json::parse(j1);
    CHECK(parsed.dump(2) == j1);
    CHECK(parsed["verdict"] == "pass");
}
