#ifndef EQUIMULT_SERIES_HPP
#define EQUIMULT_SERIES_HPP

#include <array>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "equimult/scalar.hpp"

namespace equimult {

// Precision marker: an exact polynomial, or a series whose terms are only
// known through a total degree bound.
struct Precision {
    bool exact = true;
    int degree = 0;  // meaningful when !exact

    static Precision make_exact() { return {true, 0}; }
    static Precision truncated(int d) { return {false, d}; }

    bool covers(int d) const { return exact || d <= degree; }

    static Precision weaker(const Precision& a, const Precision& b) {
        if (a.exact) return b;
        if (b.exact) return a;
        return truncated(std::min(a.degree, b.degree));
    }

    bool operator==(const Precision& o) const {
        return exact == o.exact && (exact || degree == o.degree);
    }
};

// Order of a series: a finite value, a lower bound (truncated zero), or
// infinite (the exact zero series).
struct OrderVal {
    enum Kind { Finite, AtLeast, Infinite } kind = Infinite;
    int value = 0;

    static OrderVal finite(int v) { return {Finite, v}; }
    static OrderVal at_least(int v) { return {AtLeast, v}; }
    static OrderVal infinite() { return {Infinite, 0}; }

    bool is_finite() const { return kind == Finite; }
    bool known_at_least(int v) const {
        return kind == Infinite || value >= v;
    }
    std::string str() const {
        if (kind == Finite) return std::to_string(value);
        if (kind == AtLeast) return ">=" + std::to_string(value);
        return "inf";
    }
};

// Exponent vector for up to three variables X, Y, Z.
struct ExpVec {
    std::array<std::uint16_t, 3> e{0, 0, 0};

    ExpVec() = default;
    ExpVec(unsigned i, unsigned j) {
        e[0] = static_cast<std::uint16_t>(i);
        e[1] = static_cast<std::uint16_t>(j);
    }
    ExpVec(unsigned i, unsigned j, unsigned k) {
        e[0] = static_cast<std::uint16_t>(i);
        e[1] = static_cast<std::uint16_t>(j);
        e[2] = static_cast<std::uint16_t>(k);
    }

    unsigned total() const { return unsigned(e[0]) + e[1] + e[2]; }

    bool operator==(const ExpVec& o) const { return e == o.e; }

    // Graded key: compares by total degree, then X, Y, Z exponents.
    std::uint64_t key() const {
        return (std::uint64_t(total()) << 48) | (std::uint64_t(e[0]) << 32) |
               (std::uint64_t(e[1]) << 16) | e[2];
    }
    static ExpVec from_key(std::uint64_t k) {
        ExpVec v;
        v.e[0] = static_cast<std::uint16_t>((k >> 32) & 0xffff);
        v.e[1] = static_cast<std::uint16_t>((k >> 16) & 0xffff);
        v.e[2] = static_cast<std::uint16_t>(k & 0xffff);
        return v;
    }
};

// Sparse multivariate series in 2 (X,Y) or 3 (X,Y,Z) variables with exact
// coefficients and an explicit precision marker. Values are immutable in
// spirit: all operations return new series.
class MultiSeries {
public:
    using TermMap = std::map<std::uint64_t, Scalar>;

    MultiSeries() : field_(), arity_(2), prec_(Precision::make_exact()) {}

    static MultiSeries zero(const FieldSpec& f, int arity,
                            Precision p = Precision::make_exact()) {
        MultiSeries s;
        s.field_ = f;
        s.arity_ = arity;
        s.prec_ = p;
        return s;
    }

    static MultiSeries constant(const FieldSpec& f, int arity, const Scalar& c) {
        MultiSeries s = zero(f, arity);
        if (!c.is_zero()) s.terms_.emplace(ExpVec().key(), c);
        return s;
    }

    static MultiSeries monomial(const FieldSpec& f, int arity, const ExpVec& ev,
                                const Scalar& c) {
        MultiSeries s = zero(f, arity);
        if (!c.is_zero()) s.terms_.emplace(ev.key(), c);
        return s;
    }

    static MultiSeries variable(const FieldSpec& f, int arity, int var) {
        ExpVec ev;
        ev.e[var] = 1;
        return monomial(f, arity, ev, Scalar::one(f));
    }

    const FieldSpec& field() const { return field_; }
    int arity() const { return arity_; }
    const Precision& precision() const { return prec_; }
    const TermMap& terms() const { return terms_; }
    std::size_t term_count() const { return terms_.size(); }

    bool is_zero() const { return terms_.empty(); }
    bool is_exact() const { return prec_.exact; }

    bool is_constant() const {
        return terms_.empty() ||
               (terms_.size() == 1 && terms_.begin()->first == ExpVec().key());
    }

    Scalar constant_term() const {
        auto it = terms_.find(ExpVec().key());
        return it == terms_.end() ? Scalar::zero(field_) : it->second;
    }

    bool is_unit() const { return !constant_term().is_zero(); }

    Scalar coeff(const ExpVec& ev) const {
        auto it = terms_.find(ev.key());
        return it == terms_.end() ? Scalar::zero(field_) : it->second;
    }

    MultiSeries with_precision(Precision p) const {
        MultiSeries r = *this;
        r.prec_ = p;
        if (!p.exact) r.drop_above(p.degree);
        return r;
    }

    MultiSeries truncated_to(int d) const {
        return with_precision(Precision::weaker(prec_, Precision::truncated(d)));
    }

    OrderVal order() const {
        if (terms_.empty()) {
            if (prec_.exact) return OrderVal::infinite();
            return OrderVal::at_least(prec_.degree + 1);
        }
        return OrderVal::finite(static_cast<int>(terms_.begin()->first >> 48));
    }

    // Smallest total degree among stored terms; requires a nonzero series.
    int order_finite() const {
        if (terms_.empty()) throw zero_series();
        return static_cast<int>(terms_.begin()->first >> 48);
    }

    int max_degree() const {
        if (terms_.empty()) return -1;
        return static_cast<int>(terms_.rbegin()->first >> 48);
    }

    MultiSeries initial_form() const {
        if (terms_.empty()) throw zero_series();
        int d = order_finite();
        return homogeneous_part(d);
    }

    MultiSeries homogeneous_part(int d) const {
        MultiSeries r = zero(field_, arity_, prec_);
        auto lo = terms_.lower_bound(std::uint64_t(d) << 48);
        auto hi = terms_.lower_bound(std::uint64_t(d + 1) << 48);
        for (auto it = lo; it != hi; ++it) r.terms_.insert(*it);
        return r;
    }

    MultiSeries operator-() const {
        MultiSeries r = *this;
        for (auto& [k, c] : r.terms_) c = -c;
        return r;
    }

    MultiSeries operator+(const MultiSeries& o) const {
        check_compat(o);
        MultiSeries r = zero(field_, arity_, Precision::weaker(prec_, o.prec_));
        r.terms_ = terms_;
        for (const auto& [k, c] : o.terms_) {
            auto it = r.terms_.find(k);
            if (it == r.terms_.end()) {
                r.terms_.emplace(k, c);
            } else {
                it->second = it->second + c;
                if (it->second.is_zero()) r.terms_.erase(it);
            }
        }
        if (!r.prec_.exact) r.drop_above(r.prec_.degree);
        return r;
    }

    MultiSeries operator-(const MultiSeries& o) const { return *this + (-o); }

    MultiSeries scaled(const Scalar& c) const {
        if (c.field() != field_) throw field_mismatch();
        MultiSeries r = zero(field_, arity_, prec_);
        if (c.is_zero()) return r;
        r.terms_ = terms_;
        for (auto& [k, v] : r.terms_) v = v * c;
        return r;
    }

    MultiSeries operator*(const MultiSeries& o) const {
        check_compat(o);
        Precision p = Precision::weaker(prec_, o.prec_);
        MultiSeries r = zero(field_, arity_, p);
        const int cap = p.exact ? std::numeric_limits<int>::max() : p.degree;
        for (const auto& [ka, ca] : terms_) {
            ExpVec ea = ExpVec::from_key(ka);
            if (static_cast<int>(ea.total()) > cap) break;
            for (const auto& [kb, cb] : o.terms_) {
                ExpVec eb = ExpVec::from_key(kb);
                int d = static_cast<int>(ea.total() + eb.total());
                if (d > cap) break;
                ExpVec ec;
                for (int v = 0; v < 3; ++v)
                    ec.e[v] = static_cast<std::uint16_t>(ea.e[v] + eb.e[v]);
                Scalar prod = ca * cb;
                if (prod.is_zero()) continue;
                auto it = r.terms_.find(ec.key());
                if (it == r.terms_.end()) {
                    r.terms_.emplace(ec.key(), prod);
                } else {
                    it->second = it->second + prod;
                    if (it->second.is_zero()) r.terms_.erase(it);
                }
            }
        }
        return r;
    }

    MultiSeries pow(unsigned e) const {
        MultiSeries r = constant(field_, arity_, Scalar::one(field_)).with_precision(prec_);
        if (e == 0) return r;
        MultiSeries b = *this;
        while (true) {
            if (e & 1) r = r * b;
            e >>= 1;
            if (!e) break;
            b = b * b;
        }
        return r;
    }

    MultiSeries derivative(int var) const {
        MultiSeries r = zero(field_, arity_,
                             prec_.exact ? prec_ : Precision::truncated(prec_.degree - 1));
        for (const auto& [k, c] : terms_) {
            ExpVec ev = ExpVec::from_key(k);
            if (ev.e[var] == 0) continue;
            Scalar nc = c * Scalar::of(field_, static_cast<long>(ev.e[var]));
            if (nc.is_zero()) continue;
            ExpVec nv = ev;
            nv.e[var] -= 1;
            r.terms_.emplace(nv.key(), nc);
        }
        return r;
    }

    // Coefficient of var^k as a series in the remaining variables (the
    // variable slot is removed). Precision weakens by k.
    MultiSeries coeff_in_var(int var, unsigned k) const {
        MultiSeries r = zero(field_, arity_ - 1,
                             prec_.exact ? prec_
                                         : Precision::truncated(prec_.degree - static_cast<int>(k)));
        for (const auto& [key, c] : terms_) {
            ExpVec ev = ExpVec::from_key(key);
            if (ev.e[var] != k) continue;
            ExpVec nv;
            int slot = 0;
            for (int v = 0; v < arity_; ++v)
                if (v != var) nv.e[slot++] = ev.e[v];
            r.terms_.emplace(nv.key(), c);
        }
        return r;
    }

    unsigned degree_in_var(int var) const {
        unsigned d = 0;
        for (const auto& [key, c] : terms_) {
            (void)c;
            ExpVec ev = ExpVec::from_key(key);
            if (ev.e[var] > d) d = ev.e[var];
        }
        return d;
    }

    // Inserts a fresh variable at `pos`, producing an (arity+1)-variate
    // series not involving it.
    MultiSeries inserted_var(int pos) const {
        MultiSeries r = zero(field_, arity_ + 1, prec_);
        for (const auto& [key, c] : terms_) {
            ExpVec ev = ExpVec::from_key(key);
            ExpVec nv;
            int slot = 0;
            for (int v = 0; v < arity_ + 1; ++v)
                nv.e[v] = (v == pos) ? 0 : ev.e[slot++];
            r.terms_.emplace(nv.key(), c);
        }
        return r;
    }

    MultiSeries swapped_vars(int a, int b) const {
        MultiSeries r = zero(field_, arity_, prec_);
        for (const auto& [key, c] : terms_) {
            ExpVec ev = ExpVec::from_key(key);
            std::swap(ev.e[a], ev.e[b]);
            r.terms_.emplace(ev.key(), c);
        }
        return r;
    }

    MultiSeries times_monomial(const ExpVec& m) const {
        MultiSeries r = zero(field_, arity_, prec_exact_shift(static_cast<int>(m.total())));
        for (const auto& [key, c] : terms_) {
            ExpVec ev = ExpVec::from_key(key);
            for (int v = 0; v < 3; ++v)
                ev.e[v] = static_cast<std::uint16_t>(ev.e[v] + m.e[v]);
            r.terms_.emplace(ev.key(), c);
        }
        return r;
    }

    // Exact division by var^k; requires every term to be divisible.
    MultiSeries divided_by_var_power(int var, unsigned k) const {
        MultiSeries r = zero(field_, arity_,
                             prec_.exact ? prec_ : Precision::truncated(prec_.degree - static_cast<int>(k)));
        for (const auto& [key, c] : terms_) {
            ExpVec ev = ExpVec::from_key(key);
            if (ev.e[var] < k)
                throw division_by_zero("term not divisible by variable power");
            ev.e[var] -= static_cast<std::uint16_t>(k);
            r.terms_.emplace(ev.key(), c);
        }
        return r;
    }

    unsigned min_exponent_of(int var) const {
        if (terms_.empty()) return 0;
        unsigned m = std::numeric_limits<unsigned>::max();
        for (const auto& [key, c] : terms_) {
            (void)c;
            ExpVec ev = ExpVec::from_key(key);
            if (ev.e[var] < m) m = ev.e[var];
            if (m == 0) break;
        }
        return m;
    }

    // Splits by var-degree: low = terms with var-exponent < n, high such
    // that f = low + var^n * high.
    void split_in_var(int var, unsigned n, MultiSeries& low, MultiSeries& high) const {
        low = zero(field_, arity_, prec_);
        high = zero(field_, arity_,
                    prec_.exact ? prec_ : Precision::truncated(prec_.degree - static_cast<int>(n)));
        for (const auto& [key, c] : terms_) {
            ExpVec ev = ExpVec::from_key(key);
            if (ev.e[var] < n) {
                low.terms_.emplace(key, c);
            } else {
                ExpVec nv = ev;
                nv.e[var] -= static_cast<std::uint16_t>(n);
                high.terms_.emplace(nv.key(), c);
            }
        }
    }

    // Composition f(images...). Every image must have order >= 1 in the
    // target variables; the result precision is the weakest of all inputs.
    MultiSeries substituted(const std::vector<MultiSeries>& images) const {
        if (static_cast<int>(images.size()) != arity_) throw arity_mismatch();
        Precision p = prec_;
        for (const auto& im : images) {
            if (im.field() != field_) throw field_mismatch();
            if (!im.is_zero() && im.order_finite() < 1) throw order_violation();
            p = Precision::weaker(p, im.precision());
        }
        return compose(images, p);
    }

    // Polynomial composition without order constraints (images may carry
    // constant terms); requires *this to be exact.
    MultiSeries composed_polynomial(const std::vector<MultiSeries>& images) const {
        if (static_cast<int>(images.size()) != arity_) throw arity_mismatch();
        if (!prec_.exact) throw precision_too_low();
        Precision p = Precision::make_exact();
        for (const auto& im : images) p = Precision::weaker(p, im.precision());
        return compose(images, p);
    }

    // Evaluation at a point (all variables replaced by scalars); requires
    // an exact polynomial.
    Scalar evaluated(const std::vector<Scalar>& point) const {
        if (static_cast<int>(point.size()) != arity_) throw arity_mismatch();
        Scalar acc = Scalar::zero(field_);
        for (const auto& [key, c] : terms_) {
            ExpVec ev = ExpVec::from_key(key);
            Scalar t = c;
            for (int v = 0; v < arity_; ++v)
                if (ev.e[v]) t = t * point[v].pow(ev.e[v]);
            acc = acc + t;
        }
        return acc;
    }

    bool operator==(const MultiSeries& o) const {
        return field_ == o.field_ && arity_ == o.arity_ && prec_ == o.prec_ &&
               terms_ == o.terms_;
    }

    // Term-map equality ignoring precision markers.
    bool same_terms(const MultiSeries& o) const { return terms_ == o.terms_; }

    void set_coeff(const ExpVec& ev, const Scalar& c) {
        if (c.is_zero())
            terms_.erase(ev.key());
        else
            terms_.insert_or_assign(ev.key(), c);
    }

private:
    void check_compat(const MultiSeries& o) const {
        if (field_ != o.field_) throw field_mismatch();
        if (arity_ != o.arity_) throw arity_mismatch();
    }

    Precision prec_exact_shift(int delta) const {
        return prec_.exact ? prec_ : Precision::truncated(prec_.degree + delta);
    }

    void drop_above(int d) {
        auto it = terms_.lower_bound(std::uint64_t(d + 1) << 48);
        terms_.erase(it, terms_.end());
    }

    MultiSeries compose(const std::vector<MultiSeries>& images, Precision p) const {
        const int out_arity = images.empty() ? arity_ : images[0].arity();
        for (const auto& im : images)
            if (im.arity() != out_arity) throw arity_mismatch();
        MultiSeries acc = zero(field_, out_arity, p);
        // memoized powers per variable
        std::vector<std::vector<MultiSeries>> pows(arity_);
        for (int v = 0; v < arity_; ++v)
            pows[v].push_back(constant(field_, out_arity, Scalar::one(field_)).with_precision(p));
        auto power = [&](int v, unsigned e) -> const MultiSeries& {
            auto& tab = pows[v];
            while (tab.size() <= e) tab.push_back(tab.back() * images[v]);
            return tab[e];
        };
        for (const auto& [key, c] : terms_) {
            ExpVec ev = ExpVec::from_key(key);
            MultiSeries t = constant(field_, out_arity, c).with_precision(p);
            for (int v = 0; v < arity_; ++v)
                if (ev.e[v]) t = t * power(v, ev.e[v]);
            acc = acc + t;
        }
        return acc;
    }

    FieldSpec field_;
    int arity_;
    Precision prec_;
    TermMap terms_;
};

}  // namespace equimult

#endif
