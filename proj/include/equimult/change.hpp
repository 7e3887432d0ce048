#ifndef EQUIMULT_CHANGE_HPP
#define EQUIMULT_CHANGE_HPP

#include <vector>

#include "equimult/series.hpp"

namespace equimult {

// An automorphism of the formal power series ring, given by the images of
// the variables. Images have order >= 1 and an invertible linear part.
class VariableChange {
public:
    VariableChange() = default;

    explicit VariableChange(std::vector<MultiSeries> images)
        : images_(std::move(images)) {
        validate();
    }

    static VariableChange identity(const FieldSpec& f, int arity) {
        std::vector<MultiSeries> im;
        for (int v = 0; v < arity; ++v)
            im.push_back(MultiSeries::variable(f, arity, v));
        return VariableChange(std::move(im));
    }

    int arity() const { return static_cast<int>(images_.size()); }
    const FieldSpec& field() const { return images_.at(0).field(); }
    const std::vector<MultiSeries>& images() const { return images_; }
    const MultiSeries& image(int v) const { return images_.at(v); }

    bool is_identity() const {
        for (int v = 0; v < arity(); ++v)
            if (!(images_[v] == MultiSeries::variable(field(), arity(), v)))
                return false;
        return true;
    }

    MultiSeries apply(const MultiSeries& f) const { return f.substituted(images_); }

    // Matrix of the linear parts: row v = coefficients of the image of
    // variable v.
    std::vector<std::vector<Scalar>> linear_matrix() const {
        const int n = arity();
        std::vector<std::vector<Scalar>> m(n, std::vector<Scalar>(n, Scalar::zero(field())));
        for (int v = 0; v < n; ++v)
            for (int w = 0; w < n; ++w) {
                ExpVec ev;
                ev.e[w] = 1;
                m[v][w] = images_[v].coeff(ev);
            }
        return m;
    }

    Precision precision() const {
        Precision p = Precision::make_exact();
        for (const auto& im : images_) p = Precision::weaker(p, im.precision());
        return p;
    }

private:
    void validate() const {
        if (images_.empty()) throw arity_mismatch();
        const int n = static_cast<int>(images_.size());
        for (const auto& im : images_) {
            if (im.arity() != n) throw arity_mismatch();
            if (im.is_zero() || im.order_finite() < 1) throw order_violation();
        }
    }

    std::vector<MultiSeries> images_;
};

namespace detail {

inline Scalar det2(const std::vector<std::vector<Scalar>>& m) {
    return m[0][0] * m[1][1] - m[0][1] * m[1][0];
}

inline Scalar det3(const std::vector<std::vector<Scalar>>& m) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

// Inverse of a 2x2 or 3x3 matrix over the field; throws when singular.
inline std::vector<std::vector<Scalar>> matrix_inverse(
    const std::vector<std::vector<Scalar>>& m) {
    const int n = static_cast<int>(m.size());
    const FieldSpec f = m[0][0].field();
    if (n == 2) {
        Scalar d = det2(m);
        if (d.is_zero()) throw not_invertible();
        Scalar di = d.inv();
        return {{m[1][1] * di, -m[0][1] * di}, {-m[1][0] * di, m[0][0] * di}};
    }
    Scalar d = det3(m);
    if (d.is_zero()) throw not_invertible();
    Scalar di = d.inv();
    auto cof = [&](int r, int c) {
        int r0 = (r + 1) % 3, r1 = (r + 2) % 3;
        int c0 = (c + 1) % 3, c1 = (c + 2) % 3;
        return m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0];
    };
    std::vector<std::vector<Scalar>> inv(3, std::vector<Scalar>(3, Scalar::zero(f)));
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c)
            inv[r][c] = cof(c, r) * di;  // adjugate transpose
    return inv;
}

}  // namespace detail

// Applies phi, then psi (composition of the ring maps psi o phi).
inline VariableChange compose_changes(const VariableChange& phi,
                                      const VariableChange& psi) {
    std::vector<MultiSeries> im;
    for (int v = 0; v < phi.arity(); ++v)
        im.push_back(phi.image(v).substituted(psi.images()));
    return VariableChange(std::move(im));
}

// Inverse automorphism, solved degree by degree through total degree `deg`.
// The result is exact when the composition closes exactly (e.g. linear
// changes), otherwise truncated at `deg`.
inline VariableChange invert_change(const VariableChange& phi, int deg) {
    const int n = phi.arity();
    const FieldSpec f = phi.field();
    auto inv = detail::matrix_inverse(phi.linear_matrix());

    Precision work = Precision::weaker(phi.precision(), Precision::truncated(deg));
    std::vector<MultiSeries> psi(n);
    for (int v = 0; v < n; ++v) {
        MultiSeries s = MultiSeries::zero(f, n, work);
        for (int w = 0; w < n; ++w)
            s = s + MultiSeries::variable(f, n, w).with_precision(work).scaled(inv[v][w]);
        psi[v] = s;
    }
    for (int d = 2; d <= deg; ++d) {
        std::vector<MultiSeries> err(n);
        bool any = false;
        for (int v = 0; v < n; ++v) {
            MultiSeries r = phi.image(v).substituted(psi) -
                            MultiSeries::variable(f, n, v).with_precision(work);
            err[v] = r.homogeneous_part(d);
            if (!err[v].is_zero()) any = true;
        }
        if (!any) continue;
        for (int v = 0; v < n; ++v) {
            MultiSeries delta = MultiSeries::zero(f, n, work);
            for (int w = 0; w < n; ++w)
                delta = delta + err[w].scaled(inv[v][w]);
            psi[v] = psi[v] - delta;
        }
    }
    // Detect exact closure so that polynomial pipelines stay exact.
    if (phi.precision().exact) {
        std::vector<MultiSeries> cand;
        bool closes = true;
        for (int v = 0; v < n; ++v) cand.push_back(psi[v].with_precision(Precision::make_exact()));
        for (int v = 0; v < n && closes; ++v) {
            MultiSeries r = phi.image(v).substituted(cand);
            if (!(r == MultiSeries::variable(f, n, v))) closes = false;
        }
        if (closes) return VariableChange(std::move(cand));
    }
    return VariableChange(std::move(psi));
}

}  // namespace equimult

#endif
