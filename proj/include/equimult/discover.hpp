#ifndef EQUIMULT_DISCOVER_HPP
#define EQUIMULT_DISCOVER_HPP

#include <functional>
#include <string>
#include <vector>

#include "equimult/locus.hpp"

namespace equimult {

struct LocusBounds {
    unsigned h_degree = 4;
    unsigned g_degree = 3;
};

struct DiscoveredLocus {
    std::vector<LocusElement> elements;  // the origin first, then curves
    LocusBounds bounds;
    // all smooth curves with canonical parameters within the degree bounds
    // were enumerated (finite fields on exact data)
    bool smooth_exhaustive = false;
    // over Q discovery is candidate-driven only
    bool heuristic_only = false;
    std::vector<std::string> notes;

    std::vector<CurveIdeal> curves() const {
        std::vector<CurveIdeal> out;
        for (const auto& e : elements)
            if (!e.origin) out.push_back(*e.curve);
        return out;
    }
};

namespace detail {

// Enumerates univariate polynomials sum_{i=lo}^{hi} c_i T^i over GF(p),
// emitted as bivariate series in variable `var`.
inline void enumerate_univariate(const FieldSpec& f, int var, unsigned lo, unsigned hi,
                                 const std::function<void(const MultiSeries&)>& emit) {
    std::uint64_t p = f.characteristic();
    unsigned slots = hi >= lo ? hi - lo + 1 : 0;
    std::uint64_t count = 1;
    for (unsigned i = 0; i < slots; ++i) count *= p;
    for (std::uint64_t idx = 0; idx < count; ++idx) {
        MultiSeries b = MultiSeries::zero(f, 2);
        std::uint64_t rest = idx;
        for (unsigned i = 0; i < slots; ++i) {
            std::uint64_t c = rest % p;
            rest /= p;
            if (c != 0) {
                ExpVec ev;
                ev.e[var] = static_cast<std::uint16_t>(lo + i);
                b.set_coeff(ev, Scalar::residue(f, c));
            }
        }
        emit(b);
    }
}

// Initial-form screen for primality of (Z+g, h) with singular h: a coprime
// splitting of the initial form certifies reducibility (Hensel); repeated
// factors in h itself certify it as well.
inline CurveIdeal::Irred screen_singular_primality(const MultiSeries& h) {
    const FieldSpec& f = h.field();
    MultiSeries hx = h.derivative(0);
    MultiSeries hy = h.derivative(1);
    if (hx.is_zero() && hy.is_zero()) return CurveIdeal::Irred::CertifiedReducible;
    MultiSeries g3 = poly_gcd_bivariate(poly_gcd_bivariate(h, hx), hy);
    if (!g3.is_constant()) return CurveIdeal::Irred::CertifiedReducible;

    MultiSeries init = h.initial_form().with_precision(Precision::make_exact());
    unsigned ax = init.min_exponent_of(0);
    unsigned ay = init.min_exponent_of(1);
    MultiSeries r = init;
    if (ax) r = r.divided_by_var_power(0, ax);
    if (ay) r = r.divided_by_var_power(1, ay);
    unsigned parts = (ax ? 1u : 0u) + (ay ? 1u : 0u);
    unsigned rdeg = r.is_constant() ? 0 : static_cast<unsigned>(r.order_finite());
    if (rdeg > 0) {
        // count distinct rational roots of r(1,t)
        unsigned roots = 0, root_mult_sum = 0;
        auto count_root = [&](const Scalar& t) {
            std::vector<Scalar> pt = {Scalar::one(f), t};
            if (!r.evaluated(pt).is_zero()) return;
            ++roots;
            // multiplicity via derivative tests
            MultiSeries d = r;
            unsigned m = 0;
            while (d.evaluated(pt).is_zero() && !d.is_zero()) {
                ++m;
                d = d.derivative(1);
            }
            root_mult_sum += m;
        };
        if (!f.is_rationals()) {
            for (std::uint64_t t = 0; t < f.characteristic(); ++t)
                count_root(Scalar::residue(f, t));
        } else {
            for (long num = -8; num <= 8; ++num)
                for (long den = 1; den <= 4; ++den)
                    if (std::gcd(std::abs(num), den) == 1) count_root(Scalar::rational(num, den));
        }
        parts += roots;
        if (root_mult_sum < rdeg) parts += 1;  // a factor without rational roots remains
        // In characteristic p the derivative-based multiplicity count can
        // undershoot; only coprime splits are treated as certificates.
    }
    if (parts >= 2) return CurveIdeal::Irred::CertifiedReducible;
    return CurveIdeal::Irred::Unverified;
}

// Reduce g modulo h when h is regular in some variable, for canonical output.
inline MultiSeries reduce_mod_curve(const MultiSeries& g, const MultiSeries& h, int deg) {
    if (g.is_zero()) return g;
    for (int var : {1, 0}) {
        unsigned srow = std::numeric_limits<unsigned>::max();
        for (const auto& [key, coef] : h.terms()) {
            (void)coef;
            ExpVec ev = ExpVec::from_key(key);
            if (ev.e[1 - var] == 0 && ev.e[var] < srow) srow = ev.e[var];
        }
        if (srow == std::numeric_limits<unsigned>::max() || srow == 0) continue;
        auto dv = weierstrass_divide_by(g, h, var, srow, deg);
        if (dv.remainder.precision().exact) return dv.remainder;
    }
    return g;
}

}  // namespace detail

// Bounded discovery of the equimultiple locus. The origin is always
// present. Over GF(p) all smooth curves whose canonical chart parameters
// are polynomials within the degree bounds are enumerated; singular
// candidates come from the square-free structure of the surface
// coefficients. Over Q discovery is heuristic.
inline DiscoveredLocus discover_locus(const Surface& s, LocusBounds bounds, int deg = 16) {
    DiscoveredLocus out;
    out.bounds = bounds;
    out.elements.push_back(LocusElement::origin_element());
    const FieldSpec& f = s.field;
    const std::uint64_t p = f.characteristic();
    const unsigned n = s.n;
    const bool exact_surface = s.F.precision().exact;
    const bool shiftable = (p == 0) || (n % p != 0);

    MultiSeries gshift = MultiSeries::zero(f, 2);
    std::vector<MultiSeries> cks;
    if (shiftable) {
        gshift = s.a[n - 1].scaled(Scalar::of(f, static_cast<long>(n)).inv());
        cks = shifted_coefficients(s, gshift);
    }

    auto passes = [&](const std::vector<MultiSeries>& c, const MultiSeries& h) {
        for (unsigned k = n; k-- > 0;) {
            if (divides_power(h, c[k], n - k, deg) != Verdict::Yes) return false;
        }
        return true;
    };

    // Point-evaluation prefilter over GF(p): a candidate Y + b(X) can only
    // divide c when c(x, -b(x)) = 0 at every rational x (and symmetrically
    // for X + b(Y)). Rejections are certain; survivors still run the real
    // division.
    struct PointFilter {
        bool active = false;
        std::vector<std::vector<Scalar>> rows;  // rows[v]: dense coeffs in the free var
    };
    auto build_filter = [&](const MultiSeries& c, int fixed_var) {
        PointFilter pf;
        if (p == 0 || c.is_zero()) return pf;
        pf.active = true;
        pf.rows.assign(p, {});
        std::vector<Scalar> powtab(static_cast<std::size_t>(c.max_degree()) + 1,
                                   Scalar::zero(f));
        for (std::uint64_t v = 0; v < p; ++v) {
            Scalar sv = Scalar::residue(f, v);
            powtab[0] = Scalar::one(f);
            for (std::size_t e = 1; e < powtab.size(); ++e) powtab[e] = powtab[e - 1] * sv;
            auto& row = pf.rows[v];
            for (const auto& [key, coef] : c.terms()) {
                ExpVec ev = ExpVec::from_key(key);
                unsigned fixed_e = ev.e[fixed_var];
                unsigned free_e = ev.e[1 - fixed_var];
                if (row.size() <= free_e) row.resize(free_e + 1, Scalar::zero(f));
                row[free_e] = row[free_e] + coef * powtab[fixed_e];
            }
        }
        return pf;
    };
    auto filter_accepts = [&](const PointFilter& pf, const MultiSeries& b, int param_var) {
        if (!pf.active) return true;
        for (std::uint64_t v = 0; v < p; ++v) {
            Scalar sv = Scalar::residue(f, v);
            Scalar bv = Scalar::zero(f);
            for (const auto& [key, coef] : b.terms()) {
                ExpVec ev = ExpVec::from_key(key);
                bv = bv + coef * sv.pow(ev.e[param_var]);
            }
            Scalar y = -bv;
            const auto& row = pf.rows[v];
            Scalar acc = Scalar::zero(f);
            for (std::size_t e = row.size(); e-- > 0;) acc = acc * y + row[e];
            if (!acc.is_zero()) return false;
        }
        return true;
    };

    std::vector<CurveIdeal> found;

    auto record_smooth = [&](const MultiSeries& g, const MultiSeries& h,
                             CurveIdeal::Form form) {
        CurveIdeal c = make_curve(g, h);
        c.canonical = form;
        c.irred = CurveIdeal::Irred::Irreducible;
        found.push_back(std::move(c));
    };

    if (p > 0 && exact_surface) {
        // transversal family: h = Y + b(X)
        detail::enumerate_univariate(f, 0, 1, bounds.h_degree, [&](const MultiSeries& b) {
            MultiSeries h = MultiSeries::variable(f, 2, 1) + b;
            if (shiftable) {
                if (passes(cks, h)) {
                    MultiSeries a = gshift.substituted({MultiSeries::variable(f, 2, 0), -b});
                    record_smooth(a, h, CurveIdeal::Form::Transversal);
                }
            } else {
                detail::enumerate_univariate(f, 0, 1, bounds.g_degree, [&](const MultiSeries& a) {
                    if (passes(shifted_coefficients(s, a), h))
                        record_smooth(a, h, CurveIdeal::Form::Transversal);
                });
            }
        });
        // tangent family: h = X + b(Y), ord(b) >= 2 (b = 0 is the divisor)
        detail::enumerate_univariate(f, 1, 2, bounds.h_degree, [&](const MultiSeries& b) {
            MultiSeries h = MultiSeries::variable(f, 2, 0) + b;
            auto form = [&](const MultiSeries& a) {
                return (b.is_zero() && a.is_zero()) ? CurveIdeal::Form::Divisor
                                                    : CurveIdeal::Form::Tangent;
            };
            if (shiftable) {
                if (passes(cks, h)) {
                    MultiSeries a = gshift.substituted({-b, MultiSeries::variable(f, 2, 1)});
                    record_smooth(a, h, form(a));
                }
            } else {
                detail::enumerate_univariate(f, 1, 1, bounds.g_degree, [&](const MultiSeries& a) {
                    if (passes(shifted_coefficients(s, a), h))
                        record_smooth(a, h, form(a));
                });
            }
        });
        out.smooth_exhaustive = true;
    } else {
        out.heuristic_only = true;
        out.notes.push_back(exact_surface ? "smooth search is candidate-driven over QQ"
                                          : "surface data truncated; discovery heuristic");
        std::vector<MultiSeries> pool = {MultiSeries::variable(f, 2, 0),
                                         MultiSeries::variable(f, 2, 1)};
        if (exact_surface && shiftable) {
            for (unsigned k = 0; k < n; ++k) {
                if (cks[k].is_zero()) continue;
                for (const auto& sf : squarefree_decompose(cks[k]).factors)
                    if (sf.factor.order_finite() == 1) pool.push_back(sf.factor);
            }
        }
        for (const auto& h : pool) {
            if (static_cast<unsigned>(h.max_degree()) > bounds.h_degree) continue;
            bool dup = false;
            for (const auto& c : found)
                if (c.h.same_terms(h)) dup = true;
            if (dup) continue;
            if (shiftable && exact_surface && passes(cks, h)) {
                CurveIdeal c = normalize_smooth_curve(make_curve(gshift, h), deg);
                c.irred = CurveIdeal::Irred::Irreducible;
                // keep only curves whose normalized data survived exactly
                found.push_back(std::move(c));
            }
        }
    }

    // singular candidates from the square-free structure of the shifted and
    // unshifted constant coefficients
    if (exact_surface && n >= 1) {
        std::vector<MultiSeries> pool;
        auto add_components = [&](const MultiSeries& src) {
            if (src.is_zero()) return;
            for (const auto& sf : squarefree_decompose(src).factors) {
                if (sf.factor.order_finite() < 2) continue;
                if (static_cast<unsigned>(sf.factor.max_degree()) > bounds.h_degree) continue;
                bool dup = false;
                for (const auto& q : pool)
                    if (q.same_terms(sf.factor)) dup = true;
                if (!dup) pool.push_back(sf.factor);
            }
        };
        add_components(s.a[0]);
        if (shiftable)
            for (unsigned k = 0; k < n; ++k) add_components(cks[k]);

        for (const auto& h : pool) {
            auto irred = detail::screen_singular_primality(h);
            if (irred == CurveIdeal::Irred::CertifiedReducible) continue;
            if (shiftable) {
                if (passes(cks, h)) {
                    CurveIdeal c = make_curve(detail::reduce_mod_curve(gshift, h, deg), h);
                    c.irred = irred;
                    found.push_back(std::move(c));
                }
            } else {
                // k = n-1 constraint is independent of g; gate before the g-search
                if (divides_power(h, s.a[n - 1], 1, deg) != Verdict::Yes) continue;
                std::vector<CurveIdeal> hits;
                // enumerate bivariate g of total degree <= g_degree, ord >= 1
                std::vector<ExpVec> monos;
                for (unsigned d = 1; d <= bounds.g_degree; ++d)
                    for (unsigned i = 0; i <= d; ++i) monos.push_back(ExpVec(i, d - i));
                std::uint64_t count = 1;
                for (std::size_t i = 0; i < monos.size(); ++i) count *= p;
                for (std::uint64_t idx = 0; idx < count; ++idx) {
                    MultiSeries g = MultiSeries::zero(f, 2);
                    std::uint64_t rest = idx;
                    for (const auto& mv : monos) {
                        std::uint64_t c = rest % p;
                        rest /= p;
                        if (c) g.set_coeff(mv, Scalar::residue(f, c));
                    }
                    if (!passes(shifted_coefficients(s, g), h)) continue;
                    CurveIdeal cand = make_curve(detail::reduce_mod_curve(g, h, deg), h);
                    cand.irred = irred;
                    bool dup = false;
                    for (const auto& prev : hits)
                        if (curve_ideal_equal(prev, cand, deg) == Verdict::Yes) dup = true;
                    if (!dup) hits.push_back(std::move(cand));
                }
                for (auto& c : hits) found.push_back(std::move(c));
            }
        }
        out.notes.push_back("singular candidates drawn from square-free components");
    }

    // re-verify everything through the generic criterion
    for (const auto& c : found) {
        if (is_equimultiple(s, c, deg) != Verdict::Yes)
            throw internal_error("discovered curve fails re-verification");
        if (!c.smooth)
            out.notes.push_back("singular curve membership uses the divisibility criterion");
        out.elements.push_back(LocusElement::curve_element(c));
    }
    return out;
}

// Smooth elements (the permitted locus core): origin plus smooth curves.
inline std::vector<LocusElement> permitted_part(const DiscoveredLocus& d) {
    std::vector<LocusElement> out;
    for (const auto& e : d.elements)
        if (e.origin || e.curve->smooth) out.push_back(e);
    return out;
}

}  // namespace equimult

#endif
