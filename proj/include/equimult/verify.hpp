#ifndef EQUIMULT_VERIFY_HPP
#define EQUIMULT_VERIFY_HPP

#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "equimult/print.hpp"
#include "equimult/transform.hpp"

namespace equimult {

enum class ReportVerdict { Pass, Fail, Inconclusive };

inline const char* verdict_name(ReportVerdict v) {
    switch (v) {
        case ReportVerdict::Pass: return "pass";
        case ReportVerdict::Fail: return "fail";
        default: return "inconclusive";
    }
}

struct MatchEntry {
    std::string kind;  // "type_i", "type_ii", "type_iii", "via_nu", "via_strict"
    LocusElement after;
    std::optional<LocusElement> preimage;
    std::vector<std::string> notes;
};

struct TheoremReport {
    std::string theorem_case;  // "a", "b1", "b2"
    std::string surface;       // canonical equation of the input surface
    std::string field;
    std::string direction;
    std::string center;
    unsigned n_before = 0;
    unsigned n_after = 0;
    bool multiplicity_dropped = false;
    std::vector<LocusElement> locus_before;  // discovered E(S)
    std::vector<LocusElement> locus_after;   // discovered E(S'), final coordinates
    std::vector<MatchEntry> classification;
    ReportVerdict verdict = ReportVerdict::Inconclusive;
    std::string branch;   // case (a): which alternative matched
    std::string witness;  // serialized mismatch on Fail
    std::string reason;   // explanation on Inconclusive
    LocusBounds bounds;
    bool search_certified = false;  // smooth discovery exhaustive within bounds
    std::vector<std::string> notes;
};

namespace detail {

inline std::string curve_str(const CurveIdeal& c) {
    return "(Z + " + to_poly_string(c.g) + ", " + to_poly_string(c.h) + ")";
}

inline std::string element_str(const LocusElement& e) {
    return e.origin ? "M" : curve_str(*e.curve);
}

inline std::vector<LocusElement> curves_only(const std::vector<LocusElement>& v) {
    std::vector<LocusElement> out;
    for (const auto& e : v)
        if (!e.origin) out.push_back(e);
    return out;
}

enum class SetCmp { Equal, NotEqual, Undecided };

// Set comparison of curve lists modulo ideal equality.
inline SetCmp compare_curve_sets(const std::vector<LocusElement>& a,
                                 const std::vector<LocusElement>& b, int deg,
                                 std::string* witness) {
    bool undecided = false;
    std::vector<bool> used(b.size(), false);
    for (const auto& ea : a) {
        bool matched = false;
        for (std::size_t j = 0; j < b.size() && !matched; ++j) {
            if (used[j]) continue;
            Verdict v = locus_element_equal(ea, b[j], deg);
            if (v == Verdict::Yes) {
                used[j] = true;
                matched = true;
            } else if (v == Verdict::Unknown) {
                undecided = true;
            }
        }
        if (!matched) {
            if (undecided) return SetCmp::Undecided;
            if (witness) *witness = "unmatched element " + element_str(ea);
            return SetCmp::NotEqual;
        }
    }
    for (std::size_t j = 0; j < b.size(); ++j)
        if (!used[j]) {
            if (witness) *witness = "extra element " + element_str(b[j]);
            return SetCmp::NotEqual;
        }
    return SetCmp::Equal;
}

}  // namespace detail

// Independent second opinion for is_permitted: move the curve to exactly
// (Z, X) and test i + k >= n over the Newton set of the transformed
// equation.
inline bool normal_form_oracle(const Surface& s, const CurveIdeal& p, int deg = 16,
                               bool strict = false) {
    if (!p.smooth) throw not_smooth();
    VariableChange ch = change_to_zx(p, deg);
    MultiSeries f2 = ch.apply(s.F);
    for (const auto& [key, c] : f2.terms()) {
        (void)c;
        ExpVec ev = ExpVec::from_key(key);
        if (ev.e[0] + ev.e[2] < s.n) return false;
    }
    if (!f2.precision().exact && strict) throw precision_too_low();
    return true;
}

// ---------------------------------------------------------------------
// Theorem checking, case (a): monoidal transforms with a permitted center.

namespace detail {

// The normalization behind case (a): every permitted curve contains the
// chosen parameter Z, i.e. its shift lies in (h). The Tschirnhausen shift
// enforces this when the characteristic does not divide n; otherwise a
// bounded search below can stand in.
inline bool shared_parameter_holds(const std::vector<LocusElement>& curves, int deg) {
    for (const auto& e : curves) {
        if (e.origin) continue;
        if (e.curve->g.is_zero()) continue;
        if (divides_power(e.curve->h, e.curve->g, 1, deg) != Verdict::Yes) return false;
    }
    return true;
}

inline std::optional<MultiSeries> shared_parameter_search(
    const std::vector<LocusElement>& curves, const FieldSpec& f, unsigned gdeg, int deg) {
    auto works = [&](const MultiSeries& w) {
        for (const auto& e : curves) {
            if (e.origin) continue;
            if (divides_power(e.curve->h, e.curve->g - w, 1, deg) != Verdict::Yes)
                return false;
        }
        return true;
    };
    for (const auto& e : curves) {
        if (e.origin || e.curve->g.is_zero()) continue;
        if (works(e.curve->g)) return e.curve->g;
    }
    if (f.is_rationals()) return std::nullopt;
    std::uint64_t p = f.characteristic();
    std::vector<ExpVec> monos;
    for (unsigned d = 1; d <= gdeg; ++d)
        for (unsigned i = 0; i <= d; ++i) monos.push_back(ExpVec(i, d - i));
    std::uint64_t count = 1;
    for (std::size_t i = 0; i < monos.size(); ++i) count *= p;
    for (std::uint64_t idx = 0; idx < count; ++idx) {
        MultiSeries w = MultiSeries::zero(f, 2);
        std::uint64_t rest = idx;
        for (const auto& mv : monos) {
            std::uint64_t c = rest % p;
            rest /= p;
            if (c) w.set_coeff(mv, Scalar::residue(f, c));
        }
        if (works(w)) return w;
    }
    return std::nullopt;
}

}  // namespace detail

inline TheoremReport check_case_a_at(const Surface& s, const CurveIdeal& center,
                                     const Direction& u, const DiscoveredLocus& before,
                                     LocusBounds bounds, int deg) {
    TheoremReport rep;
    rep.theorem_case = "a";
    rep.surface = to_poly_string(s.F);
    rep.field = s.field.str();
    rep.center = detail::curve_str(center);
    rep.direction = u.str();
    rep.bounds = bounds;
    rep.n_before = s.n;

    auto res = monoidal_transform(s, center, u, deg);
    rep.n_after = res.record.n_after;
    rep.multiplicity_dropped = res.record.multiplicity_dropped;
    if (res.record.multiplicity_dropped) {
        rep.verdict = ReportVerdict::Inconclusive;
        rep.reason = "multiplicity dropped; outside the theorem's hypothesis";
        return rep;
    }
    const Surface& s1 = *res.surface;
    DiscoveredLocus after = discover_locus(s1, bounds, deg);
    rep.search_certified = before.smooth_exhaustive && after.smooth_exhaustive;
    rep.notes.insert(rep.notes.end(), after.notes.begin(), after.notes.end());

    std::vector<LocusElement> before_smooth = detail::curves_only(permitted_part(before));
    std::vector<LocusElement> after_smooth = detail::curves_only(permitted_part(after));
    rep.locus_before = permitted_part(before);
    rep.locus_after = permitted_part(after);

    // per-curve certified survival of the nu-images
    bool center_erased = false;
    bool undecided = false;
    std::vector<LocusElement> survivors;
    for (const auto& q : before_smooth) {
        auto img = nu_image_in_final(q, res.record, deg);
        if (!img) {
            rep.verdict = ReportVerdict::Inconclusive;
            rep.reason = "a permitted curve could not be mapped through the renormalization";
            return rep;
        }
        Verdict mem = is_permitted(s1, *img->curve, deg);
        bool is_center = curve_ideal_equal(*q.curve, center, deg) == Verdict::Yes;
        if (mem == Verdict::Yes) {
            survivors.push_back(*img);
            MatchEntry m;
            m.kind = "via_nu";
            m.after = *img;
            m.preimage = q;
            rep.classification.push_back(std::move(m));
        } else if (mem == Verdict::No) {
            if (!is_center) {
                rep.verdict = ReportVerdict::Fail;
                rep.witness = "the non-center permitted curve " + detail::element_str(q) +
                              " was erased by the monoidal transform";
                return rep;
            }
            center_erased = true;
        } else {
            undecided = true;
        }
    }
    // every permitted curve of the transform must be a nu-image
    for (const auto& e : after_smooth) {
        bool matched = false;
        for (const auto& img : survivors)
            if (locus_element_equal(img, e, deg) == Verdict::Yes) {
                matched = true;
                break;
            }
        if (matched) continue;
        // pull back through nu (a bijection) and certify membership upstairs
        std::optional<CurveIdeal> back = *e.curve;
        if (!res.record.post_is_identity)
            back = detail::map_curve(invert_change(res.record.post, deg), *e.curve, deg);
        if (back && back->g.precision().exact && back->h.precision().exact) {
            Verdict mem = is_permitted(s, *back, deg);
            if (mem == Verdict::Yes) {
                MatchEntry m;
                m.kind = "via_nu";
                m.after = e;
                m.preimage = LocusElement::curve_element(*back);
                m.notes.push_back("preimage lies outside the search bounds");
                rep.classification.push_back(std::move(m));
                continue;
            }
            if (mem == Verdict::No) {
                rep.verdict = ReportVerdict::Fail;
                rep.witness = "the permitted curve " + detail::element_str(e) +
                              " of the transform is not the image of any permitted curve";
                return rep;
            }
        }
        undecided = true;
        rep.notes.push_back("membership of " + detail::element_str(e) +
                            " could not be certified upstairs");
    }
    if (undecided) {
        rep.verdict = ReportVerdict::Inconclusive;
        rep.reason = "some memberships were undecided at the working precision";
        return rep;
    }
    rep.verdict = ReportVerdict::Pass;
    rep.branch = center_erased ? "nu(E0(S) \\ {P})" : "nu(E0(S))";
    return rep;
}

inline std::vector<TheoremReport> check_case_a(const Surface& s, const CurveIdeal& center,
                                               LocusBounds bounds, int deg = 16,
                                               int depth = 0) {
    std::vector<TheoremReport> reports;
    auto hypothesis_report = [&](const std::string& why) {
        TheoremReport rep;
        rep.theorem_case = "a";
        rep.surface = to_poly_string(s.F);
        rep.field = s.field.str();
        rep.center = detail::curve_str(center);
        rep.bounds = bounds;
        rep.n_before = s.n;
        rep.verdict = ReportVerdict::Inconclusive;
        rep.reason = why;
        return rep;
    };
    if (is_permitted(s, center, deg) != Verdict::Yes) {
        reports.push_back(hypothesis_report("center is not a permitted curve"));
        return reports;
    }
    auto dirs = enumerate_directions(s, TransformKind::Monoidal);
    if (dirs.empty()) {
        reports.push_back(hypothesis_report("no rational direction lies on the cone"));
        return reports;
    }
    DiscoveredLocus before = discover_locus(s, bounds, deg);
    auto smooth_before = permitted_part(before);
    if (!detail::shared_parameter_holds(smooth_before, deg)) {
        // the chosen Z is not contained in every permitted curve; search a
        // bounded replacement parameter and retry in those coordinates
        if (depth > 0) {
            reports.push_back(hypothesis_report(
                "no shared parameter containing all permitted curves was found"));
            return reports;
        }
        auto w = detail::shared_parameter_search(smooth_before, s.field, bounds.g_degree, deg);
        if (!w) {
            reports.push_back(hypothesis_report(
                "no shared parameter containing all permitted curves within bounds"));
            return reports;
        }
        VariableChange shift({MultiSeries::variable(s.field, 3, 0),
                              MultiSeries::variable(s.field, 3, 1),
                              MultiSeries::variable(s.field, 3, 2) - w->inserted_var(2)});
        Surface s2 = new_surface(shift.apply(s.F), deg);
        std::optional<CurveIdeal> c2 = detail::map_curve(shift, center, deg);
        for (const auto& he : s2.history) {
            if (!c2) break;
            c2 = detail::map_curve(he.change, *c2, deg);
        }
        if (!c2 || !c2->g.is_zero() ||
            !c2->h.same_terms(MultiSeries::variable(s.field, 2, 0))) {
            reports.push_back(hypothesis_report(
                "the center left its normalized form under the parameter change"));
            return reports;
        }
        reports = check_case_a(s2, *c2, bounds, deg, depth + 1);
        for (auto& r : reports)
            r.notes.push_back("checked after a bounded shared-parameter change");
        return reports;
    }
    for (const auto& [u, mult] : dirs) {
        (void)mult;
        reports.push_back(check_case_a_at(s, center, u, before, bounds, deg));
    }
    return reports;
}

// ---------------------------------------------------------------------
// Theorem checking, cases (b.1) and (b.2): quadratic transforms.

namespace detail {

// Constructive transversal preimage: pull the curve back into the chart
// coordinates, normalize it there to (Z + a(V), W + b(V)) against the
// chart divisor variable V, and lift to (Z + V a(V), W + V (b(V) - u_W)).
inline std::optional<CurveIdeal> transversal_preimage(const CurveIdeal& c,
                                                      const TransformRecord& rec,
                                                      int deg) {
    const FieldSpec& f = c.g.field();
    std::optional<CurveIdeal> chart = c;
    if (!rec.post_is_identity)
        chart = map_curve(invert_change(rec.post, deg), c, deg);
    if (!chart) return std::nullopt;
    int pv = rec.u.privileged;
    int ov = 1 - pv;
    CurveIdeal cs = *chart;
    if (pv == 1) {
        cs = make_curve(chart->g.swapped_vars(0, 1), chart->h.swapped_vars(0, 1));
    }
    if (!cs.smooth) return std::nullopt;
    CurveIdeal cn = normalize_smooth_curve(cs, deg);
    if (cn.canonical != CurveIdeal::Form::Transversal) return std::nullopt;
    MultiSeries a = cn.g;                                       // a(X)
    MultiSeries b = cn.h - MultiSeries::variable(f, 2, 1);      // b(X)
    MultiSeries V = MultiSeries::variable(f, 2, 0);
    MultiSeries g0 = V * a;
    MultiSeries h0 = MultiSeries::variable(f, 2, 1) +
                     V * (b - MultiSeries::constant(f, 2, rec.u.coords[ov]));
    if (pv == 1) {
        g0 = g0.swapped_vars(0, 1);
        h0 = h0.swapped_vars(0, 1);
    }
    if (!g0.is_zero() && g0.order_finite() < 1) return std::nullopt;
    return make_curve(g0, h0);
}

inline std::string tangency_name(Tangency t) {
    switch (t) {
        case Tangency::Transversal: return "transversal";
        case Tangency::Tangent: return "tangent";
        default: return "divisor";
    }
}

struct TangentPullback {
    enum class Outcome { Matched, LemmaViolated, Unavailable } outcome;
    std::optional<CurveIdeal> preimage;
    std::vector<std::string> notes;
};

// Constructive preimage of a tangent permitted curve: bring it to the
// preferred form (Z + r(X,Y), X + b(Y)) with deg_Y r < ord(b), check the
// r = r1 + r2 split (monomials X^al Y^be with 1 + al >= be vs the rest;
// the rest must vanish for a permitted curve), and when r = 0 build the
// blowdown series H with (Z, H) pulling back onto the curve.
inline TangentPullback tangent_blowdown_preimage(const Surface& s,
                                                 const TransformRecord& rec,
                                                 const CurveIdeal& tcurve, int deg) {
    TangentPullback out{TangentPullback::Outcome::Unavailable, std::nullopt, {}};
    const FieldSpec& f = s.field;
    if (rec.kind != TransformKind::Quadratic || rec.u.privileged != 0 ||
        !rec.u.coords[1].is_zero() || !rec.u.coords[2].is_zero()) {
        out.notes.push_back("chart is not in the constructive position (1:0:0)");
        return out;
    }
    // work on the curve in chart coordinates
    std::optional<CurveIdeal> chart = tcurve;
    if (!rec.post_is_identity)
        chart = map_curve(invert_change(rec.post, deg), tcurve, deg);
    if (!chart || !chart->smooth) return out;
    CurveIdeal c = normalize_smooth_curve(*chart, deg);
    if (c.canonical != CurveIdeal::Form::Tangent) return out;
    MultiSeries b = c.h - MultiSeries::variable(f, 2, 0);
    if (b.is_zero()) {
        out.notes.push_back("tangent curve with h = X and a nonzero shift");
        return out;
    }
    unsigned sord = static_cast<unsigned>(b.order_finite());
    MultiSeries r = c.g;
    if (!r.is_zero()) r = weierstrass_divide_by(c.g, c.h, 1, sord, deg).remainder;
    MultiSeries r2 = MultiSeries::zero(f, 2, r.precision());
    for (const auto& [key, coef] : r.terms()) {
        ExpVec ev = ExpVec::from_key(key);
        if (1u + ev.e[0] < ev.e[1]) r2.set_coeff(ev, coef);
    }
    if (!r2.is_zero()) {
        out.outcome = TangentPullback::Outcome::LemmaViolated;
        out.notes.push_back("preferred form keeps monomials with 1+a < b: " +
                            to_poly_string(r2));
        return out;
    }
    if (!r.is_zero() || !r.precision().exact) {
        out.notes.push_back("preferred-form shift does not vanish exactly");
        return out;
    }
    auto bd = blowdown_construct(b, deg);
    if (!bd.H.precision().exact) {
        out.notes.push_back("blowdown series does not terminate; preimage only at precision");
        return out;
    }
    CurveIdeal q = make_curve(MultiSeries::zero(f, 2), bd.H);
    if (is_equimultiple(s, q, deg) != Verdict::Yes) {
        out.notes.push_back("blowdown candidate is not equimultiple");
        return out;
    }
    auto st = strict_transform_curve(LocusElement::curve_element(q), rec, deg);
    if (st.status != StrictTransformStatus::Ok ||
        locus_element_equal(*st.element, LocusElement::curve_element(tcurve), deg) !=
            Verdict::Yes) {
        out.notes.push_back("blowdown candidate does not pull back onto the curve");
        return out;
    }
    out.outcome = TangentPullback::Outcome::Matched;
    out.preimage = q;
    out.notes.push_back("preimage constructed by the blowdown series (ord " +
                        std::to_string(bd.lambda) + ")");
    return out;
}

}  // namespace detail

inline TheoremReport check_case_b(const Surface& s, const Direction& u,
                                  LocusBounds bounds, int deg = 16) {
    TheoremReport rep;
    rep.theorem_case = s.cone.plane ? "b2" : "b1";
    rep.surface = to_poly_string(s.F);
    rep.field = s.field.str();
    rep.direction = u.str();
    rep.bounds = bounds;
    rep.n_before = s.n;

    auto res = quadratic_transform(s, u, deg);
    rep.n_after = res.record.n_after;
    rep.multiplicity_dropped = res.record.multiplicity_dropped;
    if (res.record.multiplicity_dropped) {
        rep.verdict = ReportVerdict::Inconclusive;
        rep.reason = "multiplicity dropped; outside the theorem's hypothesis";
        return rep;
    }
    DiscoveredLocus before = discover_locus(s, bounds, deg);
    DiscoveredLocus after = discover_locus(*res.surface, bounds, deg);
    rep.search_certified = before.smooth_exhaustive && after.smooth_exhaustive;
    rep.locus_before = before.elements;
    rep.locus_after = after.elements;
    for (const auto& nte : before.notes) rep.notes.push_back("before: " + nte);
    for (const auto& nte : after.notes) rep.notes.push_back("after: " + nte);

    std::vector<LocusElement> before_smooth = detail::curves_only(permitted_part(before));
    std::vector<LocusElement> after_smooth = detail::curves_only(permitted_part(after));

    if (!s.cone.plane) {
        // (b.1): E0(S') equals the strict transforms of E0(S); both
        // inclusions are certified per curve
        const Surface& s1 = *res.surface;
        bool undecided = false;
        std::vector<LocusElement> images;
        for (const auto& e : before_smooth) {
            auto st = strict_transform_curve(e, res.record, deg);
            if (st.status == StrictTransformStatus::NotPassingThrough) continue;
            if (st.status == StrictTransformStatus::Unsupported) {
                rep.verdict = ReportVerdict::Inconclusive;
                rep.reason = "a strict transform could not be normalized";
                return rep;
            }
            Verdict mem = is_permitted(s1, *st.element->curve, deg);
            if (mem == Verdict::No) {
                rep.verdict = ReportVerdict::Fail;
                rep.witness = "the permitted curve " + detail::element_str(e) +
                              " is erased by the quadratic transform";
                return rep;
            }
            if (mem == Verdict::Unknown) undecided = true;
            images.push_back(*st.element);
            MatchEntry m;
            m.kind = "via_strict";
            m.after = *st.element;
            m.preimage = e;
            rep.classification.push_back(std::move(m));
        }
        CurveIdeal lit = make_curve(MultiSeries::zero(s.field, 2),
                                    MultiSeries::variable(s.field, 2, 0));
        for (const auto& e : after_smooth) {
            bool matched = false;
            for (const auto& img : images)
                if (locus_element_equal(img, e, deg) == Verdict::Yes) {
                    matched = true;
                    break;
                }
            if (matched) continue;
            Tangency t = classify_tangency(*e.curve, deg);
            if (t == Tangency::IsExceptionalDivisor) {
                rep.verdict = ReportVerdict::Fail;
                rep.witness =
                    "the exceptional divisor is permitted after a non-plane transform";
                return rep;
            }
            if (t == Tangency::Transversal) {
                // a preimage may exist outside the bounds: reconstruct it
                auto cand = detail::transversal_preimage(*e.curve, res.record, deg);
                if (cand && cand->g.precision().exact && cand->h.precision().exact &&
                    is_permitted(s, *cand, deg) == Verdict::Yes) {
                    auto st = strict_transform_curve(LocusElement::curve_element(*cand),
                                                     res.record, deg);
                    if (st.status == StrictTransformStatus::Ok &&
                        locus_element_equal(*st.element, e, deg) == Verdict::Yes) {
                        MatchEntry m;
                        m.kind = "via_strict";
                        m.after = e;
                        m.preimage = LocusElement::curve_element(*cand);
                        m.notes.push_back("preimage lies outside the search bounds");
                        rep.classification.push_back(std::move(m));
                        continue;
                    }
                }
            } else if (is_permitted(s1, lit, deg) == Verdict::No) {
                // a tangent permitted curve forces the divisor in every case (b)
                rep.verdict = ReportVerdict::Fail;
                rep.witness = "tangent curve " + detail::element_str(e) +
                              " appears without the exceptional divisor";
                return rep;
            }
            undecided = true;
            rep.notes.push_back("no preimage found for " + detail::element_str(e) +
                                " within the search bounds");
        }
        if (undecided) {
            rep.verdict = ReportVerdict::Inconclusive;
            rep.reason = "some matches were not certified within the search bounds";
        } else {
            rep.verdict = ReportVerdict::Pass;
        }
        return rep;
    }

    // (b.2): classify each permitted curve of the transform
    if (res.record.divisor) {
        CurveIdeal lit = make_curve(MultiSeries::zero(s.field, 2),
                                    MultiSeries::variable(s.field, 2, 0));
        if (curve_ideal_equal(*res.record.divisor, lit, deg) != Verdict::Yes) {
            rep.verdict = ReportVerdict::Inconclusive;
            rep.reason = "exceptional divisor is not (Z, X) after renormalization";
            return rep;
        }
    }
    bool any_tangent = false;
    bool divisor_present = false;
    bool undecided = false;
    std::vector<std::string> unmatched;

    std::vector<LocusElement> before_singular;
    for (const auto& e : before.elements)
        if (!e.origin && !e.curve->smooth) before_singular.push_back(e);

    for (const auto& e : after_smooth) {
        const CurveIdeal& c = *e.curve;
        Tangency t = classify_tangency(c, deg);
        MatchEntry m;
        m.after = e;
        if (t == Tangency::IsExceptionalDivisor) {
            divisor_present = true;
            m.kind = "type_i";
            rep.classification.push_back(std::move(m));
            continue;
        }
        if (t == Tangency::Transversal) {
            m.kind = "type_iii";
            bool matched = false;
            // certified matching against discovered permitted curves
            for (const auto& q : before_smooth) {
                auto st = strict_transform_curve(q, res.record, deg);
                if (st.status != StrictTransformStatus::Ok) continue;
                if (locus_element_equal(*st.element, e, deg) != Verdict::Yes) continue;
                // nu(Q) lives in the chart: classify it in final coordinates
                auto nu = nu_image_in_final(q, res.record, deg);
                if (!nu || nu->origin ||
                    classify_tangency(*nu->curve, deg) != Tangency::Transversal) {
                    rep.verdict = ReportVerdict::Fail;
                    rep.witness = "type (iii) preimage " + detail::element_str(q) +
                                  " has a non-transversal renaming";
                    return rep;
                }
                m.preimage = q;
                m.notes.push_back("nu-image and strict transform both transversal");
                matched = true;
                break;
            }
            if (!matched) {
                // constructive pullback, then certify
                auto cand = detail::transversal_preimage(c, res.record, deg);
                if (cand && cand->g.precision().exact && cand->h.precision().exact &&
                    is_permitted(s, *cand, deg) == Verdict::Yes) {
                    auto lc = LocusElement::curve_element(*cand);
                    auto st = strict_transform_curve(lc, res.record, deg);
                    auto nu = nu_image_in_final(lc, res.record, deg);
                    if (st.status == StrictTransformStatus::Ok &&
                        locus_element_equal(*st.element, e, deg) == Verdict::Yes && nu &&
                        classify_tangency(*nu->curve, deg) == Tangency::Transversal) {
                        m.preimage = lc;
                        m.notes.push_back("preimage found constructively");
                        matched = true;
                    }
                }
            }
            if (!matched) {
                m.kind = "unmatched";
                unmatched.push_back(detail::element_str(e) + " (transversal)");
            }
            rep.classification.push_back(std::move(m));
            continue;
        }
        // tangent: needs a singular equimultiple preimage
        any_tangent = true;
        m.kind = "type_ii";
        bool matched = false;
        for (const auto& q : before_singular) {
            auto st = strict_transform_curve(q, res.record, deg);
            if (st.status != StrictTransformStatus::Ok) continue;
            if (locus_element_equal(*st.element, e, deg) == Verdict::Yes) {
                m.preimage = q;
                if (q.curve->irred == CurveIdeal::Irred::Unverified)
                    m.notes.push_back("preimage irreducibility unverified");
                matched = true;
                break;
            }
        }
        if (!matched) {
            auto pb = detail::tangent_blowdown_preimage(s, res.record, c, deg);
            if (pb.outcome == detail::TangentPullback::Outcome::LemmaViolated &&
                rep.search_certified) {
                rep.verdict = ReportVerdict::Fail;
                rep.witness = "tangent curve " + detail::element_str(e) +
                              " violates the preferred-form normalization";
                for (const auto& note : pb.notes) rep.witness += "; " + note;
                return rep;
            }
            if (pb.outcome == detail::TangentPullback::Outcome::Matched) {
                m.preimage = LocusElement::curve_element(*pb.preimage);
                m.notes.insert(m.notes.end(), pb.notes.begin(), pb.notes.end());
                matched = true;
            } else {
                m.notes.insert(m.notes.end(), pb.notes.begin(), pb.notes.end());
            }
        }
        if (!matched) {
            // a smooth preimage mapping onto a tangent curve would violate
            // the classification
            for (const auto& q : before_smooth) {
                auto st = strict_transform_curve(q, res.record, deg);
                if (st.status == StrictTransformStatus::Ok &&
                    locus_element_equal(*st.element, e, deg) == Verdict::Yes) {
                    rep.verdict = ReportVerdict::Fail;
                    rep.witness = "tangent curve " + detail::element_str(e) +
                                  " is the strict transform of the permitted curve " +
                                  detail::element_str(q);
                    return rep;
                }
            }
            undecided = true;
            m.notes.push_back("no singular preimage found within the search bounds");
        }
        if (!matched) {
            m.kind = "unmatched";
            unmatched.push_back(detail::element_str(e) + " (tangent)");
        }
        rep.classification.push_back(std::move(m));
    }

    if (any_tangent && !divisor_present) {
        CurveIdeal lit = make_curve(MultiSeries::zero(s.field, 2),
                                    MultiSeries::variable(s.field, 2, 0));
        // direct criterion check as a second opinion before failing
        if (is_permitted(*res.surface, lit, deg) == Verdict::Yes) {
            rep.verdict = ReportVerdict::Fail;
            rep.witness = "divisor is permitted but was not discovered";
        } else {
            rep.verdict = ReportVerdict::Fail;
            rep.witness = "a type (ii) curve is present but the divisor is not permitted";
        }
        return rep;
    }

    if (!unmatched.empty()) {
        std::string w;
        for (const auto& x : unmatched) w += (w.empty() ? "" : "; ") + x;
        if (undecided || !rep.search_certified) {
            rep.verdict = ReportVerdict::Inconclusive;
            rep.reason = "unmatched permitted curves: " + w;
        } else {
            rep.verdict = ReportVerdict::Fail;
            rep.witness = "unmatched permitted curves: " + w;
        }
        return rep;
    }
    rep.verdict = ReportVerdict::Pass;
    return rep;
}

// ---------------------------------------------------------------------
// Seeded random surfaces.

enum class Recipe { PlaneCone, NotPlaneCone, Planted, NotPlaneMonoidal };

struct GeneratedSurface {
    Surface surface;
    std::optional<CurveIdeal> planted;
    Recipe recipe;
};

namespace detail {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}
    std::uint64_t next(std::uint64_t bound) { return eng_() % bound; }
    Scalar scalar(const FieldSpec& f) {
        if (f.is_rationals()) {
            long v = static_cast<long>(next(9)) - 4;
            return Scalar::of(f, v);
        }
        return Scalar::residue(f, next(f.characteristic()));
    }
    Scalar nonzero_scalar(const FieldSpec& f) {
        if (f.is_rationals()) {
            long v = static_cast<long>(next(8)) - 4;
            if (v >= 0) ++v;
            return Scalar::of(f, v);
        }
        return Scalar::residue(f, 1 + next(f.characteristic() - 1));
    }

private:
    std::mt19937_64 eng_;
};

inline MultiSeries random_bivariate(Rng& rng, const FieldSpec& f, unsigned min_ord,
                                    unsigned max_deg, unsigned max_terms) {
    MultiSeries r = MultiSeries::zero(f, 2);
    if (min_ord > max_deg) return r;
    unsigned terms = 1 + static_cast<unsigned>(rng.next(max_terms));
    for (unsigned t = 0; t < terms; ++t) {
        unsigned d = min_ord + static_cast<unsigned>(rng.next(max_deg - min_ord + 1));
        unsigned i = static_cast<unsigned>(rng.next(d + 1));
        r.set_coeff(ExpVec(i, d - i), rng.nonzero_scalar(f));
    }
    return r;
}

inline MultiSeries random_univariate(Rng& rng, const FieldSpec& f, int var,
                                     unsigned min_ord, unsigned max_deg,
                                     unsigned max_terms) {
    MultiSeries r = MultiSeries::zero(f, 2);
    if (min_ord > max_deg) return r;
    unsigned terms = 1 + static_cast<unsigned>(rng.next(max_terms));
    for (unsigned t = 0; t < terms; ++t) {
        unsigned d = min_ord + static_cast<unsigned>(rng.next(max_deg - min_ord + 1));
        ExpVec ev;
        ev.e[var] = static_cast<std::uint16_t>(d);
        r.set_coeff(ev, rng.nonzero_scalar(f));
    }
    return r;
}

inline MultiSeries assemble_equation(const FieldSpec& f, unsigned n,
                                     const std::vector<MultiSeries>& a) {
    MultiSeries F = MultiSeries::monomial(f, 3, ExpVec(0, 0, n), Scalar::one(f));
    for (unsigned k = 0; k < n; ++k) {
        if (a[k].is_zero()) continue;
        F = F + a[k].inserted_var(2).times_monomial(ExpVec(0, 0, k));
    }
    return F;
}

}  // namespace detail

// Deterministic seeded surface generator. The same parameters and seed
// always produce the same surface.
inline GeneratedSurface generate_surface(const FieldSpec& field, unsigned n,
                                         unsigned deg_bound, std::uint64_t seed,
                                         Recipe recipe, int deg = 16) {
    if (n < 2) throw error("generator needs multiplicity >= 2");
    if (deg_bound < n) throw error("degree bound must be at least the multiplicity");
    std::uint64_t mix = seed * 0x9e3779b97f4a7c15ull + n * 1009 + deg_bound * 101 +
                        field.characteristic() + static_cast<std::uint64_t>(recipe);
    detail::Rng rng(mix);
    const FieldSpec& f = field;
    GeneratedSurface out;
    out.recipe = recipe;

    if (recipe == Recipe::PlaneCone || recipe == Recipe::NotPlaneCone) {
        for (int attempt = 0; attempt < 64; ++attempt) {
            std::vector<MultiSeries> a;
            for (unsigned k = 0; k < n; ++k) {
                bool skip = rng.next(3) == 0;
                unsigned min_ord = n - k + (recipe == Recipe::PlaneCone ? 1 : 0);
                a.push_back(skip ? MultiSeries::zero(f, 2)
                                 : detail::random_bivariate(rng, f, min_ord, deg_bound, 3));
            }
            if (recipe == Recipe::NotPlaneCone) {
                unsigned k0 = static_cast<unsigned>(rng.next(n));
                unsigned d = n - k0;
                unsigned i = static_cast<unsigned>(rng.next(d + 1));
                a[k0].set_coeff(ExpVec(i, d - i), rng.nonzero_scalar(f));
            }
            MultiSeries F = detail::assemble_equation(f, n, a);
            Surface s = new_surface(F, deg);
            if (recipe == Recipe::PlaneCone && !s.cone.plane) continue;
            if (recipe == Recipe::NotPlaneCone && s.cone.plane) continue;
            if (s.n != n) continue;
            out.surface = std::move(s);
            return out;
        }
        throw internal_error("surface generator failed to hit the requested cone shape");
    }

    if (recipe == Recipe::NotPlaneMonoidal) {
        // cone Z^{n-1}(Z - X), with (Z, X) planted as a permitted curve
        for (int attempt = 0; attempt < 64; ++attempt) {
            std::vector<MultiSeries> a;
            auto X = MultiSeries::variable(f, 2, 0);
            for (unsigned k = 0; k < n; ++k) {
                MultiSeries r = detail::random_bivariate(rng, f, 1, deg_bound - (n - k), 2);
                MultiSeries base = (k == n - 1)
                                       ? MultiSeries::constant(f, 2, -Scalar::one(f)) + r
                                       : r;
                a.push_back(X.pow(n - k) * base);
            }
            MultiSeries F = detail::assemble_equation(f, n, a);
            Surface s = new_surface(F, deg);
            if (s.cone.plane || s.n != n) continue;
            CurveIdeal center = make_curve(MultiSeries::zero(f, 2), X);
            if (is_permitted(s, center, deg) != Verdict::Yes) continue;
            out.surface = std::move(s);
            out.planted = center;
            return out;
        }
        throw internal_error("monoidal generator failed");
    }

    // Planted: a_k = h^{n-k} r_k, then an optional shift Z -> Z + g.
    for (int attempt = 0; attempt < 64; ++attempt) {
        unsigned kind = static_cast<unsigned>(rng.next(4));
        MultiSeries h;
        if (kind == 0) {
            h = MultiSeries::variable(f, 2, 1) +
                detail::random_univariate(rng, f, 0, 1, 3, 2);  // Y + b(X)
        } else if (kind == 1) {
            h = MultiSeries::variable(f, 2, 0) +
                detail::random_univariate(rng, f, 1, 2, 3, 2);  // X + b(Y)
        } else if (kind == 2) {
            h = MultiSeries::variable(f, 2, 0);  // the plain divisor shape
        } else {
            // singular menu: Y^2 - X^m or X^2 - Y^m
            unsigned m = 3 + static_cast<unsigned>(rng.next(std::max(1u, deg_bound - 2)));
            ExpVec sq = rng.next(2) ? ExpVec(0, 2) : ExpVec(2, 0);
            ExpVec tail = (sq.e[0] == 0) ? ExpVec(m, 0) : ExpVec(0, m);
            h = MultiSeries::monomial(f, 2, sq, Scalar::one(f)) -
                MultiSeries::monomial(f, 2, tail, Scalar::one(f));
        }
        MultiSeries g = MultiSeries::zero(f, 2);
        if (rng.next(3) == 0) g = detail::random_bivariate(rng, f, 1, 2, 2);
        unsigned hdeg = static_cast<unsigned>(std::max(h.max_degree(), 1));
        std::vector<MultiSeries> a;
        bool any = false;
        for (unsigned k = 0; k < n; ++k) {
            unsigned need = (n - k) * hdeg;
            if (need > deg_bound || rng.next(3) == 0) {
                a.push_back(MultiSeries::zero(f, 2));
                continue;
            }
            MultiSeries r = detail::random_bivariate(rng, f, 0, deg_bound - need, 2);
            if (r.is_zero()) {
                a.push_back(r);
                continue;
            }
            any = true;
            a.push_back(h.pow(n - k) * r);
        }
        if (!any) continue;
        MultiSeries F = detail::assemble_equation(f, n, a);
        if (!g.is_zero()) {
            MultiSeries z3 = MultiSeries::variable(f, 3, 2) + g.inserted_var(2);
            F = F.substituted({MultiSeries::variable(f, 3, 0),
                               MultiSeries::variable(f, 3, 1), z3});
        }
        Surface s = new_surface(F, deg);
        if (s.n != n) continue;
        CurveIdeal planted = make_curve(g, h);
        // carry the curve through the normalization changes
        std::optional<CurveIdeal> tracked = planted;
        for (const auto& he : s.history) {
            if (!tracked) break;
            tracked = detail::map_curve(he.change, *tracked, deg);
        }
        if (!tracked) continue;
        if (is_equimultiple(s, *tracked, deg) != Verdict::Yes) continue;
        out.surface = std::move(s);
        out.planted = tracked;
        return out;
    }
    throw internal_error("planted generator failed");
}

inline Surface random_surface(const FieldSpec& field, unsigned n, unsigned deg_bound,
                              std::uint64_t seed, int deg = 16) {
    Recipe r = static_cast<Recipe>(seed % 3);
    return generate_surface(field, n, deg_bound, seed, r, deg).surface;
}

// Planted (Z, X) surfaces for the monoidal fuzz: cone Z^n, both theorem
// branches reachable (drop = the planted curve disappears downstairs).
inline GeneratedSurface generate_case_a_surface(const FieldSpec& field, unsigned n,
                                                unsigned deg_bound, std::uint64_t seed,
                                                bool drop_branch, int deg = 16) {
    std::uint64_t mix = seed * 0x9e3779b97f4a7c15ull + n * 131 + deg_bound * 17 +
                        field.characteristic() + (drop_branch ? 7 : 0);
    detail::Rng rng(mix);
    const FieldSpec& f = field;
    auto X = MultiSeries::variable(f, 2, 0);
    for (int attempt = 0; attempt < 64; ++attempt) {
        std::vector<MultiSeries> a;
        bool any = false;
        for (unsigned k = 0; k < n; ++k) {
            if (rng.next(3) == 0 && k + 1 < n) {
                a.push_back(MultiSeries::zero(f, 2));
                continue;
            }
            MultiSeries rk;
            if (!drop_branch) {
                // r_k divisible by X^{n-k}: the curve survives upstairs
                unsigned need = 2 * (n - k);
                if (need + 1 > deg_bound) {
                    a.push_back(MultiSeries::zero(f, 2));
                    continue;
                }
                rk = X.pow(n - k) * detail::random_bivariate(rng, f, 1, deg_bound - need, 2);
            } else {
                // r_k with a pure-Y lowest part: the curve is erased
                rk = detail::random_univariate(rng, f, 1, n - k, deg_bound - (n - k), 2);
            }
            if (rk.is_zero()) {
                a.push_back(rk);
                continue;
            }
            any = true;
            a.push_back(X.pow(n - k) * rk);
        }
        if (!any) continue;
        MultiSeries F = detail::assemble_equation(f, n, a);
        Surface s = new_surface(F, deg);
        if (s.n != n || !s.cone.plane) continue;
        // track the planted center through the normalization changes and
        // insist that it stays in the literal (Z, X) form
        std::optional<CurveIdeal> center = make_curve(MultiSeries::zero(f, 2), X);
        for (const auto& he : s.history) {
            if (!center) break;
            center = detail::map_curve(he.change, *center, deg);
        }
        if (!center || !center->g.is_zero() || !center->h.same_terms(X)) continue;
        if (is_permitted(s, *center, deg) != Verdict::Yes) continue;
        GeneratedSurface out;
        out.surface = std::move(s);
        out.planted = center;
        out.recipe = Recipe::Planted;
        return out;
    }
    throw internal_error("case (a) generator failed");
}

}  // namespace equimult

#endif
