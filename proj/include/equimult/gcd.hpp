#ifndef EQUIMULT_GCD_HPP
#define EQUIMULT_GCD_HPP

#include <optional>
#include <utility>
#include <vector>

#include "equimult/weierstrass.hpp"

namespace equimult {

// Exact division in the polynomial ring, leading-term elimination in the
// graded order. Returns nothing when the division leaves a remainder.
inline std::optional<MultiSeries> poly_divide_exact(const MultiSeries& a,
                                                    const MultiSeries& h) {
    if (h.is_zero()) {
        if (a.is_zero()) return a;
        throw division_by_zero("polynomial division by zero");
    }
    const FieldSpec& f = a.field();
    MultiSeries q = MultiSeries::zero(f, a.arity());
    MultiSeries r = a;
    auto lead = [](const MultiSeries& s) { return std::prev(s.terms().end()); };
    ExpVec hl = ExpVec::from_key(lead(h)->first);
    Scalar hc = lead(h)->second;
    Scalar hci = hc.inv();
    while (!r.is_zero()) {
        auto lt = lead(r);
        ExpVec rl = ExpVec::from_key(lt->first);
        ExpVec m;
        for (int v = 0; v < 3; ++v) {
            if (rl.e[v] < hl.e[v]) return std::nullopt;
            m.e[v] = static_cast<std::uint16_t>(rl.e[v] - hl.e[v]);
        }
        MultiSeries t = MultiSeries::monomial(f, a.arity(), m, lt->second * hci);
        q = q + t;
        r = r - t * h;
    }
    return q;
}

namespace detail {

// Dense bivariate helpers used by gcd and square-free decomposition.
// UniPoly: coefficients in one variable; BiPoly: Y-coefficients in K[X].
using UniPoly = std::vector<Scalar>;

inline void uni_trim(UniPoly& p) {
    while (!p.empty() && p.back().is_zero()) p.pop_back();
}

inline int uni_deg(const UniPoly& p) { return static_cast<int>(p.size()) - 1; }

inline UniPoly uni_mul(const UniPoly& a, const UniPoly& b, const FieldSpec& f) {
    if (a.empty() || b.empty()) return {};
    UniPoly r(a.size() + b.size() - 1, Scalar::zero(f));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            r[i + j] = r[i + j] + a[i] * b[j];
    uni_trim(r);
    return r;
}

inline UniPoly uni_scale(const UniPoly& a, const Scalar& c) {
    if (c.is_zero()) return {};
    UniPoly r = a;
    for (auto& x : r) x = x * c;
    return r;
}

inline UniPoly uni_sub(const UniPoly& a, const UniPoly& b, const FieldSpec& f) {
    UniPoly r = a;
    if (r.size() < b.size()) r.resize(b.size(), Scalar::zero(f));
    for (std::size_t i = 0; i < b.size(); ++i) r[i] = r[i] - b[i];
    uni_trim(r);
    return r;
}

// Remainder of a by b (b nonzero), standard field division.
inline UniPoly uni_rem(UniPoly a, const UniPoly& b, const FieldSpec& f) {
    Scalar lci = b.back().inv();
    while (uni_deg(a) >= uni_deg(b)) {
        Scalar c = a.back() * lci;
        int shift = uni_deg(a) - uni_deg(b);
        for (std::size_t i = 0; i < b.size(); ++i)
            a[i + shift] = a[i + shift] - c * b[i];
        uni_trim(a);
        if (a.empty()) break;
    }
    return a;
}

inline UniPoly uni_divexact(const UniPoly& a, const UniPoly& b, const FieldSpec& f) {
    if (a.empty()) return {};
    UniPoly r = a, q(a.size(), Scalar::zero(f));
    Scalar lci = b.back().inv();
    while (uni_deg(r) >= uni_deg(b)) {
        Scalar c = r.back() * lci;
        int shift = uni_deg(r) - uni_deg(b);
        q[shift] = c;
        for (std::size_t i = 0; i < b.size(); ++i)
            r[i + shift] = r[i + shift] - c * b[i];
        uni_trim(r);
        if (r.empty()) break;
    }
    if (!r.empty()) throw internal_error("inexact univariate division");
    uni_trim(q);
    return q;
}

inline UniPoly uni_gcd(UniPoly a, UniPoly b, const FieldSpec& f) {
    uni_trim(a);
    uni_trim(b);
    while (!b.empty()) {
        UniPoly r = uni_rem(a, b, f);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty() && !a.back().is_one()) a = uni_scale(a, a.back().inv());
    return a;
}

struct BiPoly {
    std::vector<UniPoly> c;  // c[j]: coefficient of Y^j, a polynomial in X
    FieldSpec field;

    void trim() {
        while (!c.empty() && c.back().empty()) c.pop_back();
    }
    bool zero() const { return c.empty(); }
    int degY() const { return static_cast<int>(c.size()) - 1; }
    bool is_constant() const {
        return c.empty() || (c.size() == 1 && uni_deg(c[0]) <= 0);
    }
};

inline BiPoly bi_from_series(const MultiSeries& s) {
    BiPoly b;
    b.field = s.field();
    for (const auto& [key, coef] : s.terms()) {
        ExpVec ev = ExpVec::from_key(key);
        if (b.c.size() <= ev.e[1]) b.c.resize(ev.e[1] + 1);
        auto& row = b.c[ev.e[1]];
        if (row.size() <= ev.e[0]) row.resize(ev.e[0] + 1, Scalar::zero(s.field()));
        row[ev.e[0]] = coef;
    }
    for (auto& row : b.c) uni_trim(row);
    b.trim();
    return b;
}

inline MultiSeries bi_to_series(const BiPoly& b) {
    MultiSeries s = MultiSeries::zero(b.field, 2);
    for (std::size_t j = 0; j < b.c.size(); ++j)
        for (std::size_t i = 0; i < b.c[j].size(); ++i)
            if (!b.c[j][i].is_zero())
                s.set_coeff(ExpVec(static_cast<unsigned>(i), static_cast<unsigned>(j)),
                            b.c[j][i]);
    return s;
}

inline BiPoly bi_scale_uni(const BiPoly& a, const UniPoly& u) {
    BiPoly r;
    r.field = a.field;
    r.c.reserve(a.c.size());
    for (const auto& row : a.c) r.c.push_back(uni_mul(row, u, a.field));
    r.trim();
    return r;
}

inline BiPoly bi_sub(const BiPoly& a, const BiPoly& b) {
    BiPoly r = a;
    if (r.c.size() < b.c.size()) r.c.resize(b.c.size());
    for (std::size_t j = 0; j < b.c.size(); ++j) r.c[j] = uni_sub(r.c[j], b.c[j], a.field);
    r.trim();
    return r;
}

inline UniPoly bi_content(const BiPoly& a) {
    UniPoly g;
    for (const auto& row : a.c)
        if (!row.empty()) g = g.empty() ? row : uni_gcd(g, row, a.field);
    if (!g.empty() && !g.back().is_one()) g = uni_scale(g, g.back().inv());
    return g;
}

inline BiPoly bi_div_content(const BiPoly& a, const UniPoly& cont) {
    BiPoly r;
    r.field = a.field;
    r.c.reserve(a.c.size());
    for (const auto& row : a.c)
        r.c.push_back(row.empty() ? UniPoly{} : uni_divexact(row, cont, a.field));
    r.trim();
    return r;
}

// Pseudo-remainder of a by b with respect to Y.
inline BiPoly bi_prem(BiPoly a, const BiPoly& b) {
    const UniPoly& lcb = b.c.back();
    while (!a.zero() && a.degY() >= b.degY()) {
        int shift = a.degY() - b.degY();
        UniPoly lca = a.c.back();
        a = bi_scale_uni(a, lcb);
        BiPoly t;
        t.field = a.field;
        t.c.assign(shift, UniPoly{});
        for (const auto& row : b.c) t.c.push_back(uni_mul(row, lca, a.field));
        t.trim();
        a = bi_sub(a, t);
    }
    return a;
}

}  // namespace detail

// Canonical scalar normalization: makes the graded-lex leading coefficient 1.
inline MultiSeries monic_normalized(const MultiSeries& a) {
    if (a.is_zero()) return a;
    Scalar lc = std::prev(a.terms().end())->second;
    return a.scaled(lc.inv());
}

// Gcd in K[X,Y] for exact polynomials, canonically normalized.
inline MultiSeries poly_gcd_bivariate(const MultiSeries& A, const MultiSeries& B) {
    if (A.is_zero()) return monic_normalized(B);
    if (B.is_zero()) return monic_normalized(A);
    const FieldSpec& f = A.field();
    detail::BiPoly a = detail::bi_from_series(A);
    detail::BiPoly b = detail::bi_from_series(B);
    detail::UniPoly ca = detail::bi_content(a);
    detail::UniPoly cb = detail::bi_content(b);
    detail::UniPoly cg = detail::uni_gcd(ca, cb, f);
    a = detail::bi_div_content(a, ca);
    b = detail::bi_div_content(b, cb);
    if (a.degY() < b.degY()) std::swap(a, b);
    while (!b.zero()) {
        if (b.degY() == 0) {
            // primitive with Y-degree 0: a unit of K[X][Y] up to content
            b.c[0] = detail::UniPoly{Scalar::one(f)};
            a = b;
            break;
        }
        detail::BiPoly r = detail::bi_prem(a, b);
        if (!r.zero()) {
            detail::UniPoly cr = detail::bi_content(r);
            r = detail::bi_div_content(r, cr);
        }
        a = b;
        b = r;
    }
    detail::BiPoly g = detail::bi_scale_uni(a, cg);
    return monic_normalized(detail::bi_to_series(g));
}

enum class Verdict { Yes, No, Unknown };

struct DivisionResult {
    Verdict verdict = Verdict::Unknown;
    std::optional<MultiSeries> quotient;  // set when verdict == Yes
};

// Divisibility of `a` by `h` in the formal power series ring K[[X,Y]].
// For exact polynomial inputs the verdict is certified: h | a locally iff
// after cancelling the polynomial gcd the remaining factor of h is a unit.
// For truncated inputs the verdict may be Unknown; a No is always certified
// by a visible obstruction. `deg` bounds quotient computations.
inline DivisionResult divide_exact(const MultiSeries& h, const MultiSeries& a,
                                   int deg = 16) {
    const FieldSpec& f = h.field();
    if (a.is_zero() && a.precision().exact)
        return {Verdict::Yes, MultiSeries::zero(f, h.arity())};
    if (h.is_zero()) {
        if (h.precision().exact)
            throw division_by_zero("series division by exact zero");
        return {Verdict::Unknown, std::nullopt};
    }
    if (h.precision().exact && a.precision().exact) {
        MultiSeries g = poly_gcd_bivariate(h, a);
        auto hbar = poly_divide_exact(h, g);
        if (!hbar) throw internal_error("gcd does not divide its input");
        if (!hbar->is_unit()) return {Verdict::No, std::nullopt};
        auto abar = poly_divide_exact(a, g);
        if (!abar) throw internal_error("gcd does not divide its input");
        if (hbar->is_constant()) {
            return {Verdict::Yes, abar->scaled(hbar->constant_term().inv())};
        }
        // The quotient is a genuine power series: report it truncated.
        MultiSeries q = (*abar * series_inverse(*hbar, deg)).truncated_to(deg);
        return {Verdict::Yes, q};
    }
    // Truncated data: build the quotient degree by degree against the
    // initial form of h; a failing homogeneous division certifies No.
    int avail = std::min(h.precision().exact ? deg : h.precision().degree,
                         a.precision().exact ? deg : a.precision().degree);
    if (a.is_zero()) return {Verdict::Unknown, std::nullopt};
    int m = h.order_finite();
    int s = a.order_finite();
    if (s < m) return {Verdict::No, std::nullopt};
    MultiSeries hin = h.initial_form();
    MultiSeries q = MultiSeries::zero(f, h.arity(), Precision::truncated(avail - m));
    for (int k = s; k <= avail; ++k) {
        MultiSeries target = a.homogeneous_part(k) - (q * h).homogeneous_part(k);
        if (target.is_zero()) continue;
        auto piece = poly_divide_exact(target.with_precision(Precision::make_exact()),
                                       hin.with_precision(Precision::make_exact()));
        if (!piece) return {Verdict::No, std::nullopt};
        q = q + piece->with_precision(q.precision());
    }
    return {Verdict::Unknown, q};
}

struct SquareFreeFactor {
    MultiSeries factor;
    unsigned multiplicity;
};

struct SquareFreeDecomposition {
    Scalar unit;
    std::vector<SquareFreeFactor> factors;
};

namespace detail {

inline MultiSeries pth_root_poly(const MultiSeries& a) {
    const FieldSpec& f = a.field();
    unsigned p = static_cast<unsigned>(f.characteristic());
    MultiSeries r = MultiSeries::zero(f, a.arity());
    for (const auto& [key, c] : a.terms()) {
        ExpVec ev = ExpVec::from_key(key);
        ExpVec nv;
        for (int v = 0; v < 3; ++v) {
            if (ev.e[v] % p != 0)
                throw internal_error("p-th root of a polynomial that is not a p-th power");
            nv.e[v] = static_cast<std::uint16_t>(ev.e[v] / p);
        }
        auto root = c.nth_root(p);
        if (!root) throw internal_error("coefficient has no p-th root in the prime field");
        r.set_coeff(nv, *root);
    }
    return r;
}

inline void emit_factor(std::vector<SquareFreeFactor>& out, const MultiSeries& z,
                        unsigned mult) {
    // split off monomial parts so coordinate factors appear individually
    MultiSeries rest = z;
    unsigned ex = rest.min_exponent_of(0);
    unsigned ey = rest.min_exponent_of(1);
    const FieldSpec& f = z.field();
    if (ex > 0) {
        rest = rest.divided_by_var_power(0, ex);
        out.push_back({MultiSeries::variable(f, 2, 0), mult * ex});
    }
    if (ey > 0) {
        rest = rest.divided_by_var_power(1, ey);
        out.push_back({MultiSeries::variable(f, 2, 1), mult * ey});
    }
    if (!rest.is_constant()) out.push_back({monic_normalized(rest), mult});
}

inline void squarefree_rec(const MultiSeries& a, unsigned scale,
                           std::vector<SquareFreeFactor>& out) {
    if (a.is_constant()) return;
    const FieldSpec& f = a.field();
    MultiSeries ax = a.derivative(0);
    MultiSeries ay = a.derivative(1);
    if (ax.is_zero() && ay.is_zero()) {
        unsigned p = static_cast<unsigned>(f.characteristic());
        squarefree_rec(pth_root_poly(a), scale * p, out);
        return;
    }
    MultiSeries g = poly_gcd_bivariate(poly_gcd_bivariate(a, ax), ay);
    auto w0 = poly_divide_exact(a, g);
    if (!w0) throw internal_error("squarefree: gcd does not divide");
    MultiSeries w = *w0;
    MultiSeries c = g;
    unsigned i = 1;
    while (!w.is_constant()) {
        MultiSeries y = poly_gcd_bivariate(w, c);
        auto z = poly_divide_exact(w, y);
        if (!z) throw internal_error("squarefree: inexact step");
        if (!z->is_constant()) emit_factor(out, *z, scale * i);
        auto cnext = poly_divide_exact(c, y);
        if (!cnext) throw internal_error("squarefree: inexact step");
        c = *cnext;
        w = y;
        ++i;
    }
    if (!c.is_constant()) {
        unsigned p = static_cast<unsigned>(f.characteristic());
        if (p == 0) throw internal_error("squarefree: leftover in characteristic 0");
        squarefree_rec(pth_root_poly(c), scale * p, out);
    }
}

}  // namespace detail

// Square-free decomposition of an exact bivariate polynomial: a equals
// unit * prod factor^multiplicity with pairwise coprime square-free factors,
// monic in the graded order, monomial factors split per variable.
inline SquareFreeDecomposition squarefree_decompose(const MultiSeries& a) {
    if (a.is_zero()) throw zero_series();
    if (!a.precision().exact) throw precision_too_low();
    SquareFreeDecomposition dec;
    detail::squarefree_rec(a, 1, dec.factors);
    std::sort(dec.factors.begin(), dec.factors.end(),
              [](const SquareFreeFactor& x, const SquareFreeFactor& y) {
                  if (x.multiplicity != y.multiplicity)
                      return x.multiplicity < y.multiplicity;
                  auto kx = x.factor.terms().rbegin()->first;
                  auto ky = y.factor.terms().rbegin()->first;
                  return kx > ky;  // X before Y
              });
    // the residual scalar: a / prod factor^mult
    MultiSeries prod = MultiSeries::constant(a.field(), 2, Scalar::one(a.field()));
    for (const auto& sf : dec.factors) prod = prod * sf.factor.pow(sf.multiplicity);
    auto u = poly_divide_exact(a, prod);
    if (!u || !u->is_constant())
        throw internal_error("squarefree: decomposition does not reconstitute input");
    dec.unit = u->constant_term();
    return dec;
}

}  // namespace equimult

#endif
