#ifndef EQUIMULT_SURFACE_HPP
#define EQUIMULT_SURFACE_HPP

#include <array>
#include <string>
#include <vector>

#include "equimult/change.hpp"
#include "equimult/print.hpp"
#include "equimult/weierstrass.hpp"

namespace equimult {

// One normalization or transform step applied while building a surface;
// enough to replay the computation.
struct HistoryEntry {
    std::string kind;    // "regular_direction", "cone_normalize", "chart_swap", ...
    std::string detail;  // human-readable parameters
    VariableChange change;
};

struct TangentCone {
    bool plane = false;
    // for a plane cone: initial form = linear_form^n in the coordinates
    // current when classification ran; after normalization it is Z^n
    MultiSeries linear_form;
    VariableChange normalizer;  // identity when no shear was needed
};

// An algebroid surface in Weierstrass form: F = Z^n + sum a_k(X,Y) Z^k
// with ord(a_k) >= n-k, tangent cone classified and (when a plane) pinned
// to Z^n.
struct Surface {
    FieldSpec field;
    unsigned n = 0;
    MultiSeries F;                  // trivariate, distinguished in Z
    std::vector<MultiSeries> a;     // bivariate coefficients a_0..a_{n-1}
    TangentCone cone;
    std::vector<HistoryEntry> history;

    const MultiSeries& coefficient(unsigned k) const { return a.at(k); }
    MultiSeries initial_form() const { return F.initial_form(); }
};

inline unsigned multiplicity(const Surface& s) { return s.n; }

inline std::vector<ExpVec> newton_set(const Surface& s) {
    std::vector<ExpVec> out;
    out.reserve(s.F.term_count());
    for (const auto& [key, c] : s.F.terms()) {
        (void)c;
        out.push_back(ExpVec::from_key(key));
    }
    return out;
}

namespace detail {

// Candidate recovery for the plane-cone test: if Fbar = (Z + sX + tY)^n
// then s and t are readable off single coefficients of Fbar, in every
// characteristic (prime-field coefficients make the Frobenius the
// identity).
inline std::pair<Scalar, Scalar> plane_candidate(const MultiSeries& fbar, unsigned n,
                                                 const FieldSpec& field) {
    std::uint64_t p = field.characteristic();
    if (p == 0 || n % p != 0) {
        Scalar ninv = Scalar::of(field, static_cast<long>(n)).inv();
        Scalar s = fbar.coeff(ExpVec(1, 0, n - 1)) * ninv;
        Scalar t = fbar.coeff(ExpVec(0, 1, n - 1)) * ninv;
        return {s, t};
    }
    unsigned pe = 1;
    unsigned m = n;
    while (m % p == 0) {
        m /= static_cast<unsigned>(p);
        pe *= static_cast<unsigned>(p);
    }
    if (m == 1) {
        return {fbar.coeff(ExpVec(pe, 0, 0)), fbar.coeff(ExpVec(0, pe, 0))};
    }
    Scalar minv = Scalar::of(field, static_cast<long>(m)).inv();
    Scalar s = fbar.coeff(ExpVec(pe, 0, pe * (m - 1))) * minv;
    Scalar t = fbar.coeff(ExpVec(0, pe, pe * (m - 1))) * minv;
    return {s, t};
}

inline MultiSeries linear_form(const FieldSpec& f, const Scalar& s, const Scalar& t) {
    MultiSeries L = MultiSeries::variable(f, 3, 2);
    L.set_coeff(ExpVec(1, 0, 0), s);
    L.set_coeff(ExpVec(0, 1, 0), t);
    return L;
}

// Enumerates directions v with Fbar(v) != 0, deterministically: the
// privileged axis first, then projective representatives in graded order.
// Over Q integer vectors of height <= 5 are tried.
inline std::optional<std::vector<Scalar>> find_regular_direction(const MultiSeries& fbar,
                                                                 const FieldSpec& f) {
    auto test = [&](const std::vector<Scalar>& v) {
        return !fbar.evaluated(v).is_zero();
    };
    std::vector<Scalar> axis = {Scalar::zero(f), Scalar::zero(f), Scalar::one(f)};
    if (test(axis)) return axis;
    if (!f.is_rationals()) {
        std::uint64_t p = f.characteristic();
        // (a:b:1), (a:1:0), (1:0:0)
        for (std::uint64_t a = 0; a < p; ++a)
            for (std::uint64_t b = 0; b < p; ++b) {
                std::vector<Scalar> v = {Scalar::residue(f, a), Scalar::residue(f, b),
                                         Scalar::one(f)};
                if (test(v)) return v;
            }
        for (std::uint64_t a = 0; a < p; ++a) {
            std::vector<Scalar> v = {Scalar::residue(f, a), Scalar::one(f), Scalar::zero(f)};
            if (test(v)) return v;
        }
        std::vector<Scalar> v = {Scalar::one(f), Scalar::zero(f), Scalar::zero(f)};
        if (test(v)) return v;
        return std::nullopt;
    }
    const int bound = 5;
    for (int hmax = 1; hmax <= bound; ++hmax)
        for (int a = -hmax; a <= hmax; ++a)
            for (int b = -hmax; b <= hmax; ++b)
                for (int c = -hmax; c <= hmax; ++c) {
                    if (std::max({std::abs(a), std::abs(b), std::abs(c)}) != hmax) continue;
                    std::vector<Scalar> v = {Scalar::of(f, a), Scalar::of(f, b),
                                             Scalar::of(f, c)};
                    if (test(v)) return v;
                }
    return std::nullopt;
}

// Linear change whose Z'-column is v (so the new Z-axis points along v),
// completed with standard basis vectors.
inline VariableChange direction_change(const std::vector<Scalar>& v, const FieldSpec& f) {
    int k = 2;
    while (k >= 0 && v[k].is_zero()) --k;
    if (k < 0) throw internal_error("zero direction vector");
    int i1 = (k == 0) ? 1 : 0;
    int i2 = (k == 2) ? 1 : 2;
    std::vector<MultiSeries> images;
    for (int r = 0; r < 3; ++r) {
        MultiSeries im = MultiSeries::zero(f, 3);
        ExpVec ex;
        ex.e[0] = 1;
        if (r == i1) im.set_coeff(ex, Scalar::one(f));
        ExpVec ey;
        ey.e[1] = 1;
        if (r == i2) im.set_coeff(ey, Scalar::one(f));
        ExpVec ez;
        ez.e[2] = 1;
        if (!v[r].is_zero()) im.set_coeff(ez, v[r]);
        images.push_back(im);
    }
    return VariableChange(std::move(images));
}

}  // namespace detail

// Builds a normalized surface from a nonzero trivariate series: finds a
// Z-regular direction, applies Weierstrass preparation, classifies the
// tangent cone and pins plane cones to Z^n.
inline Surface new_surface(const MultiSeries& f0, int deg = 16) {
    if (f0.is_zero()) throw zero_series();
    if (f0.arity() != 3) throw arity_mismatch();
    const FieldSpec field = f0.field();
    Surface s;
    s.field = field;
    MultiSeries f = f0;
    unsigned n = static_cast<unsigned>(f.order_finite());
    s.n = n;

    ExpVec pure(0, 0, n);
    if (f.initial_form().coeff(pure).is_zero()) {
        auto v = detail::find_regular_direction(f.initial_form(), field);
        if (!v)
            throw no_regular_direction(
                field.is_rationals()
                    ? "no Z-regular direction of height <= 5 found"
                    : "tangent cone vanishes at every rational direction");
        VariableChange ch = detail::direction_change(*v, field);
        f = ch.apply(f);
        std::string d = "v=(" + (*v)[0].str() + ":" + (*v)[1].str() + ":" + (*v)[2].str() + ")";
        s.history.push_back({"regular_direction", d, ch});
    }

    auto prep = weierstrass_prepare(f, 2, deg);
    f = prep.distinguished;

    MultiSeries fbar = f.initial_form();
    auto [cs, ct] = detail::plane_candidate(fbar, n, field);
    MultiSeries L = detail::linear_form(field, cs, ct);
    bool plane = L.pow(n).same_terms(fbar);
    s.cone.plane = plane;
    s.cone.normalizer = VariableChange::identity(field, 3);
    if (plane) {
        s.cone.linear_form = L;
        if (!cs.is_zero() || !ct.is_zero()) {
            // Z -> Z' - s X' - t Y' turns L into Z'
            MultiSeries imz = MultiSeries::variable(field, 3, 2);
            imz.set_coeff(ExpVec(1, 0, 0), -cs);
            imz.set_coeff(ExpVec(0, 1, 0), -ct);
            VariableChange shear({MultiSeries::variable(field, 3, 0),
                                  MultiSeries::variable(field, 3, 1), imz});
            f = shear.apply(f);
            s.cone.normalizer = shear;
            s.history.push_back({"cone_normalize", "L=" + cs.str() + "*X+" + ct.str() + "*Y+Z",
                                 shear});
            if (!is_distinguished(f, 2, n)) {
                auto prep2 = weierstrass_prepare(f, 2, deg);
                f = prep2.distinguished;
            }
        }
    } else {
        s.cone.linear_form = MultiSeries::zero(field, 3);
    }

    // Tschirnhausen shift (characteristic prime to n): eliminate the
    // Z^{n-1} coefficient, so that every equimultiple curve contains Z.
    if ((field.characteristic() == 0 || n % field.characteristic() != 0)) {
        MultiSeries an1 = f.coeff_in_var(2, n - 1);
        if (!an1.is_zero()) {
            MultiSeries w = an1.scaled(Scalar::of(field, static_cast<long>(n)).inv());
            MultiSeries imz = MultiSeries::variable(field, 3, 2) - w.inserted_var(2);
            VariableChange shift({MultiSeries::variable(field, 3, 0),
                                  MultiSeries::variable(field, 3, 1), imz});
            f = shift.apply(f);
            s.history.push_back({"tschirnhausen", "w=" + to_poly_string(w), shift});
            if (!f.coeff_in_var(2, n - 1).is_zero())
                throw internal_error("Tschirnhausen shift failed to clear the coefficient");
        }
    }

    s.F = f;
    for (unsigned k = 0; k < n; ++k) {
        MultiSeries ak = f.coeff_in_var(2, k);
        auto ord = ak.order();
        if (ord.kind == OrderVal::Finite && ord.value < static_cast<int>(n - k))
            throw internal_error("Weierstrass coefficient condition violated");
        s.a.push_back(ak);
    }
    if (!f.coeff(pure).is_one())
        throw internal_error("prepared equation is not monic in Z");
    if (s.cone.plane && !f.initial_form().same_terms(
                            MultiSeries::monomial(field, 3, pure, Scalar::one(field))))
        throw internal_error("plane cone not normalized to Z^n");
    return s;
}

// Multiplicity of the projectivized tangent cone at a point u (coordinates
// normalized with the privileged one equal to 1): the order of Fbar
// recentered at u in its affine chart; 0 when Fbar(u) != 0.
inline unsigned cone_multiplicity_at(const Surface& s, const std::array<Scalar, 3>& u,
                                     int privileged) {
    const FieldSpec& f = s.field;
    MultiSeries fbar = s.F.initial_form().with_precision(Precision::make_exact());
    int v1 = -1, v2 = -1;
    for (int v = 0; v < 3; ++v) {
        if (v == privileged) continue;
        (v1 < 0 ? v1 : v2) = v;
    }
    MultiSeries g = MultiSeries::zero(f, 2);
    for (const auto& [key, c] : fbar.terms()) {
        ExpVec ev = ExpVec::from_key(key);
        MultiSeries t = MultiSeries::constant(f, 2, c);
        MultiSeries lin1 = MultiSeries::variable(f, 2, 0) +
                           MultiSeries::constant(f, 2, u[v1]);
        MultiSeries lin2 = MultiSeries::variable(f, 2, 1) +
                           MultiSeries::constant(f, 2, u[v2]);
        t = t * lin1.pow(ev.e[v1]) * lin2.pow(ev.e[v2]);
        g = g + t;
    }
    if (g.is_zero()) throw internal_error("tangent cone restricts to zero in a chart");
    return static_cast<unsigned>(g.order_finite());
}

}  // namespace equimult

#endif
