#ifndef EQUIMULT_TRANSFORM_HPP
#define EQUIMULT_TRANSFORM_HPP

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "equimult/discover.hpp"

namespace equimult {

class lemma_violation : public internal_error {
public:
    lemma_violation()
        : internal_error("monoidal transform of a non-plane cone kept its multiplicity") {}
};

// A point of the exceptional P^2 (or the P^1 over a monoidal center),
// normalized so the first nonzero coordinate is 1; that coordinate is the
// privileged chart.
struct Direction {
    std::array<Scalar, 3> coords;
    int privileged = 0;
    bool monoidal = false;

    std::string str() const {
        return coords[0].str() + ":" + coords[1].str() + ":" + coords[2].str();
    }
    bool operator==(const Direction& o) const {
        return coords == o.coords && privileged == o.privileged && monoidal == o.monoidal;
    }
};

inline Direction make_direction(const std::array<Scalar, 3>& raw, bool monoidal = false) {
    int k = 0;
    while (k < 3 && raw[k].is_zero()) ++k;
    if (k == 3) throw error("direction must have a nonzero coordinate");
    if (monoidal && !raw[1].is_zero())
        throw error("monoidal directions have a zero middle coordinate");
    Direction d;
    d.privileged = k;
    d.monoidal = monoidal;
    Scalar inv = raw[k].inv();
    for (int i = 0; i < 3; ++i) d.coords[i] = raw[i] * inv;
    return d;
}

enum class TransformKind { Quadratic, Monoidal };

struct TransformRecord {
    TransformKind kind = TransformKind::Quadratic;
    Direction u;
    std::optional<CurveIdeal> center;  // monoidal only
    std::vector<MultiSeries> hom;      // images of X, Y, Z under the chart map
    int chart_var = 0;                 // divisor variable in chart coordinates
    // chart coordinates -> final (renormalized) coordinates; includes the
    // X/Y swap for beta-privileged charts
    VariableChange post;
    bool post_is_identity = true;
    std::optional<CurveIdeal> divisor;  // exceptional divisor in final coordinates
    unsigned n_before = 0;
    unsigned n_after = 0;
    bool multiplicity_dropped = false;
};

// The renormalized surface is absent in one corner case: a transform that
// drops the multiplicity may land on an equation whose cone vanishes at
// every rational direction, so no Weierstrass normalization exists over
// the base field. Multiplicity-preserving transforms always carry one.
struct TransformResult {
    std::optional<Surface> surface;
    TransformRecord record;
};

namespace detail {

inline Scalar eval_initial_form(const Surface& s, const std::array<Scalar, 3>& u) {
    MultiSeries fbar = s.F.initial_form().with_precision(Precision::make_exact());
    return fbar.evaluated({u[0], u[1], u[2]});
}

// Chart homomorphism of the quadratic transform at u.
inline std::vector<MultiSeries> quadratic_hom(const FieldSpec& f, const Direction& u) {
    auto var = [&](int v) { return MultiSeries::variable(f, 3, v); };
    int pv = u.privileged;
    std::vector<MultiSeries> hom(3, MultiSeries::zero(f, 3));
    for (int v = 0; v < 3; ++v) {
        if (v == pv) {
            hom[v] = var(pv);
        } else {
            hom[v] = var(pv) * (var(v) + MultiSeries::constant(f, 3, u.coords[v]));
        }
    }
    return hom;
}

// Chart homomorphism of the monoidal transform with center (Z,X) at
// u = (1:0:gamma): X -> X1, Y -> Y1, Z -> X1 (Z1 + gamma).
inline std::vector<MultiSeries> monoidal_hom(const FieldSpec& f, const Direction& u) {
    auto var = [&](int v) { return MultiSeries::variable(f, 3, v); };
    return {var(0), var(1),
            var(0) * (var(2) + MultiSeries::constant(f, 3, u.coords[2]))};
}

inline VariableChange swap_xy_change(const FieldSpec& f) {
    return VariableChange({MultiSeries::variable(f, 3, 1), MultiSeries::variable(f, 3, 0),
                           MultiSeries::variable(f, 3, 2)});
}

// Applies a variable change to curve generators and renormalizes.
inline std::optional<CurveIdeal> map_curve(const VariableChange& ch, const CurveIdeal& c,
                                           int deg);

struct CurveFromGenerators {
    enum class Status { Ok, ContainsUnit, NotACurve, Unsupported } status;
    std::optional<CurveIdeal> curve;
};

inline CurveFromGenerators curve_from_generators(const MultiSeries& u0,
                                                 const MultiSeries& v0, int deg) {
    using St = CurveFromGenerators::Status;
    if (u0.is_unit() || v0.is_unit()) return {St::ContainsUnit, std::nullopt};
    const FieldSpec& f = u0.field();
    ExpVec ez(0, 0, 1);
    const MultiSeries* w = nullptr;
    const MultiSeries* o = nullptr;
    if (!u0.is_zero() && !u0.coeff(ez).is_zero()) {
        w = &u0;
        o = &v0;
    } else if (!v0.is_zero() && !v0.coeff(ez).is_zero()) {
        w = &v0;
        o = &u0;
    } else {
        return {St::Unsupported, std::nullopt};
    }
    MultiSeries gt;
    // fast path: already Z + g(X,Y)
    if (w->coeff(ez).is_one() && w->degree_in_var(2) == 1 &&
        w->coeff_in_var(2, 1).is_constant()) {
        gt = w->coeff_in_var(2, 0);
    } else {
        auto prep = weierstrass_prepare(*w, 2, deg);
        gt = prep.distinguished.coeff_in_var(2, 0);
    }
    MultiSeries h = o->substituted({MultiSeries::variable(f, 2, 0),
                                    MultiSeries::variable(f, 2, 1), -gt});
    if (h.is_zero() && h.precision().exact) return {St::NotACurve, std::nullopt};
    if (h.is_unit()) return {St::ContainsUnit, std::nullopt};
    if (h.is_zero()) return {St::Unsupported, std::nullopt};  // zero at precision
    if (!gt.is_zero() && gt.precision().exact && h.precision().exact)
        gt = reduce_mod_curve(gt, h, deg);  // canonical shift representative
    return {St::Ok, make_curve(gt, h)};
}

inline std::optional<CurveIdeal> map_curve(const VariableChange& ch, const CurveIdeal& c,
                                           int deg) {
    MultiSeries gen1 = MultiSeries::variable(c.g.field(), 3, 2) + c.g.inserted_var(2);
    MultiSeries gen2 = c.h.inserted_var(2);
    auto r = curve_from_generators(ch.apply(gen1), ch.apply(gen2), deg);
    if (r.status != CurveFromGenerators::Status::Ok) return std::nullopt;
    return r.curve;
}

}  // namespace detail

// All rational directions on the cone (with their cone multiplicities):
// every point of the exceptional P^2 with Fbar = 0 over GF(p); a bounded
// height search over Q.
inline std::vector<std::pair<Direction, unsigned>> enumerate_directions(
    const Surface& s, TransformKind kind) {
    const FieldSpec& f = s.field;
    std::vector<std::pair<Direction, unsigned>> out;
    auto consider = [&](const std::array<Scalar, 3>& raw) {
        if (kind == TransformKind::Monoidal && !raw[1].is_zero()) return;
        if (!detail::eval_initial_form(s, raw).is_zero()) return;
        Direction d = make_direction(raw, kind == TransformKind::Monoidal);
        out.emplace_back(d, cone_multiplicity_at(s, d.coords, d.privileged));
    };
    if (!f.is_rationals()) {
        std::uint64_t p = f.characteristic();
        auto S = [&](std::uint64_t v) { return Scalar::residue(f, v); };
        if (kind == TransformKind::Quadratic) {
            for (std::uint64_t b = 0; b < p; ++b)
                for (std::uint64_t c = 0; c < p; ++c)
                    consider({Scalar::one(f), S(b), S(c)});
            for (std::uint64_t c = 0; c < p; ++c) consider({Scalar::zero(f), Scalar::one(f), S(c)});
            consider({Scalar::zero(f), Scalar::zero(f), Scalar::one(f)});
        } else {
            for (std::uint64_t c = 0; c < p; ++c)
                consider({Scalar::one(f), Scalar::zero(f), S(c)});
            consider({Scalar::zero(f), Scalar::zero(f), Scalar::one(f)});
        }
        return out;
    }
    const int H = 20;
    auto coprime3 = [](int a, int b, int c) {
        int g = std::gcd(std::gcd(std::abs(a), std::abs(b)), std::abs(c));
        return g == 1;
    };
    for (int a = 0; a <= H; ++a)
        for (int b = (a == 0 ? 0 : -H); b <= H; ++b)
            for (int c = -H; c <= H; ++c) {
                if (a == 0 && b == 0) continue;  // (0:0:1) handled below
                if (!coprime3(a, b, c)) continue;
                consider({Scalar::of(f, a), Scalar::of(f, b), Scalar::of(f, c)});
            }
    consider({Scalar::zero(f), Scalar::zero(f), Scalar::one(f)});
    return out;
}

namespace detail {

// Shared tail of both transforms: divide the substituted equation by the
// chart variable power, renormalize, and assemble the record.
inline TransformResult finish_transform(const Surface& s, TransformRecord rec,
                                        const MultiSeries& substituted, int deg) {
    const FieldSpec& f = s.field;
    const int pv = rec.chart_var;  // 0 or 1; the Z chart never meets a monic cone
    MultiSeries f1 = substituted.divided_by_var_power(pv, s.n);
    // chart uniformity: make the divisor coordinate X
    VariableChange post = VariableChange::identity(f, 3);
    bool post_id = true;
    if (pv == 1) {
        post = swap_xy_change(f);
        f1 = post.apply(f1);
        post_id = false;
        rec.chart_var = 0;
    }
    const unsigned raw_order = static_cast<unsigned>(f1.order_finite());
    Surface ns;
    try {
        ns = new_surface(f1, deg);
    } catch (const no_regular_direction&) {
        if (raw_order >= s.n) throw;
        // dropped multiplicity and no rational normalization: report the
        // drop without a renormalized surface
        rec.post = post_id ? VariableChange::identity(f, 3) : post;
        rec.post_is_identity = post_id;
        rec.n_before = s.n;
        rec.n_after = raw_order;
        rec.multiplicity_dropped = true;
        return {std::nullopt, std::move(rec)};
    }
    for (const auto& he : ns.history) {
        post = post_id ? he.change : compose_changes(post, he.change);
        post_id = false;
    }
    rec.post = post_id ? VariableChange::identity(f, 3) : post;
    rec.post_is_identity = post_id;
    rec.n_before = s.n;
    rec.n_after = ns.n;
    rec.multiplicity_dropped = ns.n < s.n;
    if (ns.n > s.n) throw internal_error("multiplicity increased under a transform");
    // track the exceptional divisor (Z, chart variable) into final coordinates
    CurveIdeal div0 = make_curve(MultiSeries::zero(f, 2), MultiSeries::variable(f, 2, pv));
    if (rec.post_is_identity) {
        rec.divisor = div0;
    } else {
        rec.divisor = detail::map_curve(rec.post, div0, deg);
    }
    return {std::move(ns), std::move(rec)};
}

}  // namespace detail

// Quadratic transform (blow-up of the origin) in the chart of direction u.
inline TransformResult quadratic_transform(const Surface& s, const Direction& u,
                                           int deg = 16) {
    if (!detail::eval_initial_form(s, u.coords).is_zero()) throw direction_not_on_cone();
    TransformRecord rec;
    rec.kind = TransformKind::Quadratic;
    rec.u = u;
    rec.hom = detail::quadratic_hom(s.field, u);
    rec.chart_var = u.privileged;  // 0 or 1; the Z chart never meets the cone
    MultiSeries g = s.F.substituted(rec.hom);
    return detail::finish_transform(s, std::move(rec), g, deg);
}

// Monoidal transform with permitted center (Z, X) at direction (1:0:gamma).
inline TransformResult monoidal_transform(const Surface& s, const CurveIdeal& center,
                                          const Direction& u, int deg = 16) {
    const FieldSpec& f = s.field;
    if (!center.g.is_zero() || !center.h.same_terms(MultiSeries::variable(f, 2, 0)))
        throw error("monoidal center must be given in the normalized form (Z, X)");
    if (is_permitted(s, center, deg) != Verdict::Yes) throw center_not_permitted();
    if (u.privileged != 0)
        throw direction_not_on_cone();  // (0:0:1) never lies on a monic cone
    if (!detail::eval_initial_form(s, u.coords).is_zero()) throw direction_not_on_cone();
    TransformRecord rec;
    rec.kind = TransformKind::Monoidal;
    rec.u = u;
    rec.center = center;
    rec.hom = detail::monoidal_hom(f, u);
    rec.chart_var = 0;
    MultiSeries g = s.F.substituted(rec.hom);
    auto res = detail::finish_transform(s, std::move(rec), g, deg);
    if (!s.cone.plane && !res.record.multiplicity_dropped) throw lemma_violation();
    return res;
}

// The renaming X -> X1, Y -> Y1, Z -> Z1; data is unchanged.
inline LocusElement nu_map(const LocusElement& e) { return e; }

enum class StrictTransformStatus { Ok, NotPassingThrough, Unsupported };

struct StrictTransformResult {
    StrictTransformStatus status;
    std::optional<LocusElement> element;
};

// Strict transform of a curve: apply the chart homomorphism, divide each
// generator by the exact power of the divisor variable it carries, and
// renormalize into curve form (in the final coordinates of the transform).
inline StrictTransformResult strict_transform_curve(const LocusElement& q,
                                                    const TransformRecord& rec,
                                                    int deg = 16) {
    if (q.origin) throw error("strict transform is defined for curves, not the origin");
    const CurveIdeal& c = *q.curve;
    const FieldSpec& f = c.h.field();
    int pv = rec.kind == TransformKind::Quadratic ? rec.u.privileged : 0;
    MultiSeries gen1 = (MultiSeries::variable(f, 3, 2) + c.g.inserted_var(2)).substituted(rec.hom);
    MultiSeries gen2 = c.h.inserted_var(2).substituted(rec.hom);
    unsigned d1 = gen1.min_exponent_of(pv);
    unsigned d2 = gen2.min_exponent_of(pv);
    if (rec.kind == TransformKind::Quadratic) {
        if (d1 != 1 || d2 != static_cast<unsigned>(c.h.order_finite()))
            throw internal_error("unexpected divisor valuation in a strict transform");
    }
    MultiSeries q1 = gen1.divided_by_var_power(pv, d1);
    MultiSeries q2 = gen2.divided_by_var_power(pv, d2);
    if (!rec.post_is_identity) {
        q1 = rec.post.apply(q1);
        q2 = rec.post.apply(q2);
    }
    auto r = detail::curve_from_generators(q1, q2, deg);
    using St = detail::CurveFromGenerators::Status;
    switch (r.status) {
        case St::Ok:
            return {StrictTransformStatus::Ok, LocusElement::curve_element(*r.curve)};
        case St::ContainsUnit:
            return {StrictTransformStatus::NotPassingThrough, std::nullopt};
        default:
            return {StrictTransformStatus::Unsupported, std::nullopt};
    }
}

// Maps a curve through the renaming nu and the recorded renormalization,
// expressing it in the final coordinates of the transform.
inline std::optional<LocusElement> nu_image_in_final(const LocusElement& q,
                                                     const TransformRecord& rec,
                                                     int deg = 16) {
    if (q.origin) return LocusElement::origin_element();
    if (rec.post_is_identity) return q;
    auto c = detail::map_curve(rec.post, *q.curve, deg);
    if (!c) return std::nullopt;
    return LocusElement::curve_element(*c);
}

struct InducedChange {
    Direction u_image;
    VariableChange psi;
};

// The unique change psi with psi . pi_u = pi_{u'} . phi (quadratic charts):
// u' is the inverse image of u under the linear part of phi; psi is solved
// from the chart equations.
inline InducedChange induced_change(const VariableChange& phi, const Direction& u,
                                    int deg = 16) {
    const FieldSpec& f = phi.field();
    auto A = phi.linear_matrix();
    auto Ainv = detail::matrix_inverse(A);
    std::array<Scalar, 3> up{Scalar::zero(f), Scalar::zero(f), Scalar::zero(f)};
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) up[r] = up[r] + Ainv[r][c] * u.coords[c];
    Direction u2 = make_direction(up, false);
    auto pi2 = detail::quadratic_hom(f, u2);
    int i = u.privileged;
    int j2 = u2.privileged;

    // psi(chart var of the privileged coordinate) = pi'(phi(var_i))
    MultiSeries Ri = phi.image(i).substituted(pi2);
    MultiSeries base = Ri.divided_by_var_power(j2, 1).truncated_to(deg);
    if (!base.is_unit()) throw internal_error("induced change: privileged image is not a unit");
    MultiSeries base_inv = series_inverse(base, deg);

    std::vector<MultiSeries> psi(3, MultiSeries::zero(f, 3));
    psi[i] = MultiSeries::variable(f, 3, j2).truncated_to(deg) * base;
    for (int v = 0; v < 3; ++v) {
        if (v == i) continue;
        MultiSeries Rv = phi.image(v).substituted(pi2);
        MultiSeries num = Rv.divided_by_var_power(j2, 1).truncated_to(deg);
        psi[v] = num * base_inv - MultiSeries::constant(f, 3, u.coords[v]).truncated_to(deg);
    }
    // exact upgrade when the square closes with polynomial images
    auto pi1 = detail::quadratic_hom(f, u);
    if (phi.precision().exact) {
        std::vector<MultiSeries> cand;
        for (int v = 0; v < 3; ++v) cand.push_back(psi[v].with_precision(Precision::make_exact()));
        bool closes = true;
        for (int v = 0; v < 3 && closes; ++v) {
            MultiSeries lhs = pi1[v].substituted(cand);
            MultiSeries rhs = phi.image(v).substituted(pi2);
            if (!(lhs - rhs).is_zero()) closes = false;
        }
        if (closes) psi = std::move(cand);
    }
    InducedChange out{u2, VariableChange(psi)};
    // the commuting square is the defining property; verify it at precision
    for (int v = 0; v < 3; ++v) {
        MultiSeries lhs = pi1[v].substituted(out.psi.images()).truncated_to(deg);
        MultiSeries rhs = phi.image(v).substituted(pi2).truncated_to(deg);
        if (!(lhs - rhs).is_zero())
            throw internal_error("induced change does not close the commuting square");
    }
    return out;
}

struct BlowdownSeries {
    MultiSeries H;      // bivariate, ord = lambda, regular in Y of order lambda
    MultiSeries unit;   // u(X,Y) with unit constant term
    unsigned lambda = 0;
    bool min_order_case = false;  // ord(G) == 2, the boundary of the guaranteed range
};

// Constructive blowdown: given G(Y) with ord(G) = lambda >= 2, produce H
// and a unit u with H(X, XY)/X^lambda = u(X,Y) (X + G(Y)) through degree
// `deg`. Free coefficients are fixed deterministically (u(0,0) = 1, all
// other free coefficients zero).
inline BlowdownSeries blowdown_construct(const MultiSeries& G, int deg = 16) {
    const FieldSpec& f = G.field();
    if (G.is_zero()) throw zero_series();
    if (G.degree_in_var(0) != 0) throw error("blowdown input must be a series in Y alone");
    const unsigned lambda = static_cast<unsigned>(G.order_finite());
    if (lambda < 2) throw error("blowdown input must have order >= 2");
    auto alpha = [&](unsigned m) { return G.coeff(ExpVec(0, m)); };
    Scalar al_inv = alpha(lambda).inv();

    const int gamma_deg = 2 * deg + static_cast<int>(lambda);
    const unsigned maxm = G.degree_in_var(1);
    std::vector<std::vector<Scalar>> gam(gamma_deg + 1);
    auto gat = [&](int a, int j) -> Scalar {
        if (a < 0 || j < 0 || a > gamma_deg || a + j > gamma_deg)
            return Scalar::zero(f);
        return gam[a][static_cast<std::size_t>(j)];
    };
    for (int a = 0; a <= gamma_deg; ++a) {
        gam[a].assign(static_cast<std::size_t>(gamma_deg - a + 1), Scalar::zero(f));
        for (int j = 0; j <= gamma_deg - a; ++j) {
            if (j <= a) {
                gam[a][j] = (a == 0 && j == 0) ? Scalar::one(f) : Scalar::zero(f);
                continue;
            }
            // constraint at (a, b = j + lambda):
            // 0 = gamma[a-1][b] + sum_m alpha_m gamma[a][b - m]
            Scalar acc = gat(a - 1, j + static_cast<int>(lambda));
            for (unsigned m = lambda + 1; m <= maxm && static_cast<int>(m) <= j + static_cast<int>(lambda); ++m)
                acc = acc + alpha(m) * gat(a, j + static_cast<int>(lambda) - static_cast<int>(m));
            gam[a][j] = -(al_inv * acc);
        }
    }

    MultiSeries u = MultiSeries::zero(f, 2, Precision::truncated(deg));
    for (int a = 0; a <= deg; ++a)
        for (int j = 0; a + j <= deg; ++j)
            if (!gat(a, j).is_zero()) u.set_coeff(ExpVec(a, j), gat(a, j));

    MultiSeries H = MultiSeries::zero(f, 2, Precision::truncated(deg + static_cast<int>(lambda)));
    for (int a = 0; a <= gamma_deg; ++a) {
        for (int b = 0; a + b <= gamma_deg; ++b) {
            int i = a + static_cast<int>(lambda) - b;
            if (i < 0) continue;
            if (i + b > deg + static_cast<int>(lambda)) continue;
            Scalar beta = gat(a - 1, b);
            for (unsigned m = lambda; m <= maxm && static_cast<int>(m) <= b; ++m)
                beta = beta + alpha(m) * gat(a, b - static_cast<int>(m));
            if (!beta.is_zero()) H.set_coeff(ExpVec(i, b), beta);
        }
    }

    BlowdownSeries out{H, u, lambda, lambda == 2};
    if (H.is_zero() || H.order_finite() != static_cast<int>(lambda))
        throw internal_error("blowdown series has the wrong order");
    if (H.coeff(ExpVec(0, lambda)).is_zero())
        throw internal_error("blowdown series is not Y-regular of the stated order");
    // exact upgrade when the construction terminates
    if (G.precision().exact) {
        MultiSeries Hx = H.with_precision(Precision::make_exact());
        MultiSeries ux = u.with_precision(Precision::make_exact());
        MultiSeries X = MultiSeries::variable(f, 2, 0);
        MultiSeries lhs = Hx.substituted({X, X * MultiSeries::variable(f, 2, 1)})
                              .divided_by_var_power(0, lambda);
        MultiSeries rhs = ux * (X + G);
        if ((lhs - rhs).is_zero()) {
            out.H = Hx;
            out.unit = ux;
        }
    }
    return out;
}

}  // namespace equimult

#endif
