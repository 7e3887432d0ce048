#ifndef EQUIMULT_WEIERSTRASS_HPP
#define EQUIMULT_WEIERSTRASS_HPP

#include <utility>

#include "equimult/series.hpp"

namespace equimult {

// Multiplicative inverse of a unit series, through total degree `deg`.
// Exact when the geometric series terminates exactly.
inline MultiSeries series_inverse(const MultiSeries& u, int deg) {
    Scalar c = u.constant_term();
    if (c.is_zero()) throw division_by_zero("inverse of a non-unit series");
    Precision work = Precision::weaker(u.precision(), Precision::truncated(deg));
    const FieldSpec& f = u.field();
    Scalar ci = c.inv();
    // u = c(1 - t), ord(t) >= 1: u^{-1} = ci * sum t^k
    MultiSeries t = (MultiSeries::constant(f, u.arity(), c) - u).scaled(ci).with_precision(work);
    MultiSeries acc = MultiSeries::constant(f, u.arity(), Scalar::one(f)).with_precision(work);
    MultiSeries pw = acc;
    while (true) {
        pw = pw * t;
        if (pw.is_zero()) break;
        acc = acc + pw;
    }
    acc = acc.scaled(ci);
    if (u.precision().exact && t.is_zero()) return acc.with_precision(Precision::make_exact());
    // termination with exact zero power means the inverse is a polynomial
    if (u.precision().exact) {
        MultiSeries chk = (acc.with_precision(Precision::make_exact()) * u) -
                          MultiSeries::constant(f, u.arity(), Scalar::one(f));
        if (chk.is_zero()) return acc.with_precision(Precision::make_exact());
    }
    return acc;
}

struct WeierstrassDivision {
    MultiSeries quotient;
    MultiSeries remainder;  // degree in the privileged variable < n
};

// Division g = q*f + r with deg_var(r) < n, for f var-regular of order n
// (the pure var^n coefficient of f is a unit). Computed through total
// degree `deg`; results are exact when the elimination terminates.
//
// The elimination can move a term of total degree t and var-degree v down
// to degree t - v(n-1)/n at worst, so the working bound is padded and the
// claimed precision of the result accounts for unknown tails of g.
inline WeierstrassDivision weierstrass_divide_by(const MultiSeries& g,
                                                 const MultiSeries& f, int var,
                                                 unsigned n, int deg) {
    const FieldSpec& fl = f.field();
    ExpVec pure;
    pure.e[var] = static_cast<std::uint16_t>(n);
    if (f.coeff(pure).is_zero())
        throw not_regular("divisor is not regular of the stated order in the privileged variable");

    const unsigned vg = g.degree_in_var(var);
    long pad = n >= 1 ? static_cast<long>(n - 1) * static_cast<long>(vg) : 0;
    const int B = deg + static_cast<int>(std::min<long>(pad, 3l * deg + 48));
    auto cap = [&](const MultiSeries& s) {
        return s.with_precision(Precision::truncated(B)).with_precision(Precision::make_exact());
    };

    MultiSeries low, high;
    cap(f).split_in_var(var, n, low, high);
    MultiSeries minv = cap(series_inverse(high, B));

    MultiSeries q = MultiSeries::zero(fl, f.arity());
    MultiSeries r = MultiSeries::zero(fl, f.arity());
    MultiSeries rem = cap(g);
    while (!rem.is_zero()) {
        MultiSeries rl, rh;
        rem.split_in_var(var, n, rl, rh);
        r = r + rl;
        if (rh.is_zero()) break;
        MultiSeries qinc = cap(rh * minv);
        q = q + qinc;
        rem = cap(-(qinc * low));
    }
    // Exact upgrade when the identity closes as polynomials.
    if (g.precision().exact && f.precision().exact) {
        if ((q * f + r - g).is_zero()) return {q, r};
    }
    int claim = deg;
    if (!f.precision().exact) claim = std::min(claim, f.precision().degree);
    if (!g.precision().exact) {
        int dg = g.precision().degree;
        claim = std::min(claim, (dg + 1) / std::max(1, static_cast<int>(n)) - 1);
    }
    return {q.truncated_to(claim), r.truncated_to(claim)};
}

struct WeierstrassPreparation {
    MultiSeries unit;
    MultiSeries distinguished;
};

// True when f = var^n + (terms of var-degree < n whose coefficients have
// positive order), i.e. f is already a distinguished polynomial.
inline bool is_distinguished(const MultiSeries& f, int var, unsigned n) {
    ExpVec pure;
    pure.e[var] = static_cast<std::uint16_t>(n);
    if (!f.coeff(pure).is_one()) return false;
    for (const auto& [key, c] : f.terms()) {
        (void)c;
        ExpVec ev = ExpVec::from_key(key);
        if (ev.e[var] >= n && !(ev == pure)) return false;
        if (ev.e[var] < n && ev.total() == ev.e[var]) return false;  // unit coefficient below var^n
    }
    return true;
}

// Division by a distinguished polynomial P in the privileged variable.
inline WeierstrassDivision weierstrass_divide(const MultiSeries& g,
                                              const MultiSeries& P, int deg,
                                              int var = 2) {
    unsigned n = P.degree_in_var(var);
    if (!is_distinguished(P, var, n)) throw not_distinguished();
    return weierstrass_divide_by(g, P, var, n, deg);
}

// Weierstrass preparation: f = unit * distinguished where the distinguished
// part is var^n + sum_{k<n} a_k var^k with ord(a_k) >= 1. Requires f
// var-regular of order n = ord(f).
inline WeierstrassPreparation weierstrass_prepare(const MultiSeries& f, int var, int deg) {
    if (f.is_zero()) throw zero_series();
    const unsigned n = static_cast<unsigned>(f.order_finite());
    ExpVec pure;
    pure.e[var] = static_cast<std::uint16_t>(n);
    if (f.initial_form().coeff(pure).is_zero())
        throw not_regular("series is not regular of its order in the privileged variable");

    if (is_distinguished(f, var, n)) {
        MultiSeries one = MultiSeries::constant(f.field(), f.arity(), Scalar::one(f.field()));
        return {one, f};
    }
    // divide var^n by f: var^n = q*f + r, so f = q^{-1} (var^n - r)
    MultiSeries vn = MultiSeries::monomial(f.field(), f.arity(), pure, Scalar::one(f.field()));
    auto div = weierstrass_divide_by(vn, f, var, n, deg);
    MultiSeries dist = vn.with_precision(div.remainder.precision()) - div.remainder;
    MultiSeries unit = series_inverse(div.quotient, deg);
    return {unit, dist};
}

}  // namespace equimult

#endif
