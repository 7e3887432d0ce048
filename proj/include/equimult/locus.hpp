#ifndef EQUIMULT_LOCUS_HPP
#define EQUIMULT_LOCUS_HPP

#include <optional>
#include <string>
#include <vector>

#include "equimult/gcd.hpp"
#include "equimult/surface.hpp"

namespace equimult {

// A curve through the origin in the ideal form (Z + g(X,Y), h(X,Y)).
struct CurveIdeal {
    MultiSeries g;  // bivariate shift, possibly zero
    MultiSeries h;  // bivariate, nonzero, ord >= 1
    bool smooth = false;

    enum class Form { None, Transversal, Tangent, Divisor };
    Form canonical = Form::None;

    // Irreducibility of (Z+g, h) as a prime of the local ring. Smooth
    // curves are always irreducible; singular candidates may only be
    // partially decided.
    enum class Irred { Irreducible, Unverified, CertifiedReducible };
    Irred irred = Irred::Unverified;
};

inline CurveIdeal make_curve(const MultiSeries& g, const MultiSeries& h) {
    if (h.is_zero()) throw zero_series();
    if (h.order_finite() < 1) throw error("curve generator h must have order >= 1");
    if (!g.is_zero() && g.order_finite() < 1)
        throw error("curve shift g must have order >= 1");
    CurveIdeal c;
    c.g = g;
    c.h = h;
    c.smooth = (h.order_finite() == 1);
    c.irred = c.smooth ? CurveIdeal::Irred::Irreducible : CurveIdeal::Irred::Unverified;
    return c;
}

struct LocusElement {
    bool origin = false;
    std::optional<CurveIdeal> curve;

    static LocusElement origin_element() {
        LocusElement e;
        e.origin = true;
        return e;
    }
    static LocusElement curve_element(CurveIdeal c) {
        LocusElement e;
        e.curve = std::move(c);
        return e;
    }
};

enum class Tangency { Transversal, Tangent, IsExceptionalDivisor };

namespace detail {

inline Scalar binomial_scalar(const FieldSpec& f, unsigned m, unsigned k) {
    mpz_class b;
    mpz_bin_uiui(b.get_mpz_t(), m, k);
    return Scalar::of(f, b);
}

}  // namespace detail

// Coefficients c_0..c_n of F(X, Y, Z - g) as a polynomial in Z, where
// F = Z^n + sum a_k Z^k. c_n = 1.
inline std::vector<MultiSeries> shifted_coefficients(const Surface& s,
                                                     const MultiSeries& g) {
    const FieldSpec& f = s.field;
    const unsigned n = s.n;
    std::vector<MultiSeries> pow_g;
    pow_g.push_back(MultiSeries::constant(f, 2, Scalar::one(f)).with_precision(g.precision()));
    for (unsigned i = 1; i <= n; ++i) pow_g.push_back(pow_g.back() * -g);
    std::vector<MultiSeries> c(n + 1, MultiSeries::zero(f, 2));
    for (unsigned k = 0; k <= n; ++k) {
        MultiSeries acc = MultiSeries::zero(f, 2, g.precision());
        for (unsigned m = k; m <= n; ++m) {
            const MultiSeries& am =
                (m == n) ? MultiSeries::constant(f, 2, Scalar::one(f)) : s.a[m];
            if (am.is_zero() && am.precision().exact) continue;
            Scalar bin = detail::binomial_scalar(f, m, k);
            if (bin.is_zero()) continue;
            acc = acc + (am * pow_g[m - k]).scaled(bin);
        }
        c[k] = acc;
    }
    return c;
}

namespace detail {

// Decomposition of a bivariate polynomial by the exponent of `var`; the
// entries keep both variable slots (the var one zeroed).
inline std::vector<MultiSeries> coeffs_in_var(const MultiSeries& w, int var) {
    std::vector<MultiSeries> out(w.degree_in_var(var) + 1,
                                 MultiSeries::zero(w.field(), w.arity()));
    for (const auto& [key, c] : w.terms()) {
        ExpVec ev = ExpVec::from_key(key);
        unsigned k = ev.e[var];
        ExpVec nv = ev;
        nv.e[var] = 0;
        out[k].set_coeff(nv, c);
    }
    return out;
}

// Repeated synthetic division for a divisor var + b (monic linear, b free
// of var): certified local divisibility of exact polynomials.
inline Verdict divides_power_monic_linear(const MultiSeries& b, int var,
                                          const MultiSeries& c, unsigned j) {
    MultiSeries w = c.with_precision(Precision::make_exact());
    const FieldSpec& f = c.field();
    for (unsigned rep = 0; rep < j; ++rep) {
        if (w.is_zero()) return Verdict::Yes;
        auto coeffs = coeffs_in_var(w, var);
        const std::size_t d = coeffs.size() - 1;
        if (d == 0) return Verdict::No;  // var-free and nonzero: remainder != 0
        MultiSeries carry = coeffs[d];
        std::vector<MultiSeries> q(d, MultiSeries::zero(f, w.arity()));
        for (std::size_t k = d; k-- > 1;) {
            q[k] = carry;
            carry = coeffs[k] - b * carry;
        }
        q[0] = carry;
        MultiSeries r = coeffs[0] - b * carry;
        if (!r.is_zero()) return Verdict::No;
        MultiSeries next = MultiSeries::zero(f, w.arity());
        for (std::size_t k = 0; k < d; ++k) {
            ExpVec m;
            m.e[var] = static_cast<std::uint16_t>(k);
            next = next + q[k].times_monomial(m);
        }
        w = next;
    }
    return Verdict::Yes;
}

}  // namespace detail

// Local divisibility h^j | c in K[[X,Y]]. Uses Weierstrass division when h
// is regular in some variable (certified exact for polynomial data), and
// the gcd route otherwise.
inline Verdict divides_power(const MultiSeries& h, const MultiSeries& c, unsigned j,
                             int deg) {
    if (j == 0) return Verdict::Yes;
    if (c.is_zero()) return c.precision().exact ? Verdict::Yes : Verdict::Unknown;
    if (h.precision().exact && c.precision().exact) {
        for (int var : {1, 0}) {
            ExpVec lin;
            lin.e[var] = 1;
            if (h.degree_in_var(var) == 1 && h.coeff(lin).is_one() &&
                h.coeff_in_var(var, 1).is_constant()) {
                MultiSeries b = h - MultiSeries::variable(h.field(), h.arity(), var);
                return detail::divides_power_monic_linear(b, var, c, j);
            }
        }
        // regular-variable fast path
        for (int var = 1; var >= 0; --var) {
            unsigned srow = std::numeric_limits<unsigned>::max();
            for (const auto& [key, coef] : h.terms()) {
                (void)coef;
                ExpVec ev = ExpVec::from_key(key);
                if (ev.e[1 - var] == 0 && ev.e[var] < srow) srow = ev.e[var];
            }
            if (srow == std::numeric_limits<unsigned>::max()) continue;  // not var-regular
            MultiSeries w = c;
            bool exact_all = true;
            for (unsigned i = 0; i < j && exact_all; ++i) {
                auto dv = weierstrass_divide_by(w, h, var, srow, deg);
                if (!dv.quotient.precision().exact || !dv.remainder.precision().exact) {
                    exact_all = false;
                    break;
                }
                if (!dv.remainder.is_zero()) return Verdict::No;
                w = dv.quotient;
            }
            if (exact_all) return Verdict::Yes;
            break;  // fall through to the gcd route
        }
        return divide_exact(h.pow(j), c, deg).verdict;
    }
    return divide_exact(h.pow(j), c, deg).verdict;
}

// The equimultiplicity criterion: (Z+g, h) is equimultiple on S iff
// h^{n-k} divides c_k for all k, where the c_k are the Z-coefficients of
// the g-shifted equation.
inline Verdict is_equimultiple(const Surface& s, const CurveIdeal& p, int deg = 16,
                               bool strict = false) {
    auto c = shifted_coefficients(s, p.g);
    bool unknown = false;
    for (unsigned k = s.n; k-- > 0;) {
        Verdict v = divides_power(p.h, c[k], s.n - k, deg);
        if (v == Verdict::No) return Verdict::No;
        if (v == Verdict::Unknown) unknown = true;
    }
    if (unknown) {
        if (strict) throw precision_too_low();
        return Verdict::Unknown;
    }
    return Verdict::Yes;
}

inline Verdict is_permitted(const Surface& s, const CurveIdeal& p, int deg = 16,
                            bool strict = false) {
    if (!p.smooth) return Verdict::No;
    return is_equimultiple(s, p, deg, strict);
}

// Equality of curve ideals: (Z+g,h) = (Z+g',h') iff h and h' divide each
// other locally and g - g' lies in (h).
inline Verdict curve_ideal_equal(const CurveIdeal& a, const CurveIdeal& b, int deg = 16) {
    Verdict v1 = divides_power(a.h, b.h, 1, deg);
    if (v1 == Verdict::No) return Verdict::No;
    Verdict v2 = divides_power(b.h, a.h, 1, deg);
    if (v2 == Verdict::No) return Verdict::No;
    MultiSeries d = a.g - b.g;
    Verdict v3 = d.is_zero() && d.precision().exact
                     ? Verdict::Yes
                     : divides_power(a.h, d, 1, deg);
    if (v3 == Verdict::No) return Verdict::No;
    if (v1 == Verdict::Yes && v2 == Verdict::Yes && v3 == Verdict::Yes) return Verdict::Yes;
    return Verdict::Unknown;
}

inline Verdict locus_element_equal(const LocusElement& a, const LocusElement& b,
                                   int deg = 16) {
    if (a.origin != b.origin) return Verdict::No;
    if (a.origin) return Verdict::Yes;
    return curve_ideal_equal(*a.curve, *b.curve, deg);
}

// Rewrites a smooth curve into its canonical chart form. The ideal is
// unchanged; generators become (Z + a(X), Y + b(X)) when the tangent line
// leaves the plane X = 0, (Z + a(Y), X + b(Y)) with ord(b) >= 2 when it
// lies inside, and (Z, X) for the divisor itself.
inline CurveIdeal normalize_smooth_curve(const CurveIdeal& p, int deg = 16) {
    if (!p.smooth) throw not_smooth();
    const FieldSpec& f = p.h.field();
    Scalar ylin = p.h.coeff(ExpVec(0, 1));
    CurveIdeal out;
    if (!ylin.is_zero()) {
        auto prep = weierstrass_prepare(p.h, 1, deg);
        MultiSeries b = prep.distinguished - MultiSeries::variable(f, 2, 1);
        MultiSeries a = p.g.substituted({MultiSeries::variable(f, 2, 0), -b});
        out = make_curve(a, prep.distinguished);
        out.canonical = CurveIdeal::Form::Transversal;
    } else {
        auto prep = weierstrass_prepare(p.h, 0, deg);
        MultiSeries b = prep.distinguished - MultiSeries::variable(f, 2, 0);
        MultiSeries a = p.g.substituted({-b, MultiSeries::variable(f, 2, 1)});
        if (b.is_zero() && a.is_zero() && b.precision().exact && a.precision().exact) {
            out = make_curve(MultiSeries::zero(f, 2), MultiSeries::variable(f, 2, 0));
            out.canonical = CurveIdeal::Form::Divisor;
        } else {
            out = make_curve(a, prep.distinguished);
            out.canonical = CurveIdeal::Form::Tangent;
        }
    }
    out.irred = CurveIdeal::Irred::Irreducible;
    return out;
}

inline Tangency tangency_class(const CurveIdeal& p) {
    if (!p.smooth) throw not_smooth();
    switch (p.canonical) {
        case CurveIdeal::Form::Transversal: return Tangency::Transversal;
        case CurveIdeal::Form::Tangent: return Tangency::Tangent;
        case CurveIdeal::Form::Divisor: return Tangency::IsExceptionalDivisor;
        default: throw error("curve has not been normalized");
    }
}

// Exact tangency classification for polynomial curves, without series
// normalization: by the linear part of h and an ideal test against (Z,X).
inline Tangency classify_tangency(const CurveIdeal& p, int deg = 16) {
    if (!p.smooth) throw not_smooth();
    if (!p.h.coeff(ExpVec(0, 1)).is_zero()) return Tangency::Transversal;
    CurveIdeal divisor = make_curve(MultiSeries::zero(p.h.field(), 2),
                                    MultiSeries::variable(p.h.field(), 2, 0));
    Verdict eq = curve_ideal_equal(p, divisor, deg);
    if (eq == Verdict::Yes) return Tangency::IsExceptionalDivisor;
    if (eq == Verdict::No) return Tangency::Tangent;
    // undecidable at precision: normalize and read the tag
    return tangency_class(normalize_smooth_curve(p, deg));
}

// The change of variables taking a smooth curve to exactly (Z, X); the
// surface equation transforms by the same substitution.
inline VariableChange change_to_zx(const CurveIdeal& p, int deg = 16) {
    CurveIdeal c = (p.canonical == CurveIdeal::Form::None) ? normalize_smooth_curve(p, deg) : p;
    const FieldSpec& f = c.h.field();
    auto X3 = MultiSeries::variable(f, 3, 0);
    auto Y3 = MultiSeries::variable(f, 3, 1);
    auto Z3 = MultiSeries::variable(f, 3, 2);
    if (c.canonical == CurveIdeal::Form::Divisor) return VariableChange::identity(f, 3);
    if (c.canonical == CurveIdeal::Form::Tangent) {
        // g = a(Y), h = X + b(Y); embed the Y-series into three variables
        MultiSeries b3 = (c.h - MultiSeries::variable(f, 2, 0)).inserted_var(2);
        MultiSeries a3 = c.g.inserted_var(2);
        return VariableChange({X3 - b3, Y3, Z3 - a3});
    }
    // Transversal: (Z+a(X), Y+b(X)) -> (Z', Y'), then swap X and Y
    MultiSeries b3 = (c.h - MultiSeries::variable(f, 2, 1)).inserted_var(2);
    MultiSeries a3 = c.g.inserted_var(2);
    VariableChange phi({X3, Y3 - b3, Z3 - a3});
    VariableChange swap({Y3, X3, Z3});
    return compose_changes(phi, swap);
}

}  // namespace equimult

#endif
