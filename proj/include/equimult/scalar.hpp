#ifndef EQUIMULT_SCALAR_HPP
#define EQUIMULT_SCALAR_HPP

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include <gmpxx.h>

#include "equimult/errors.hpp"

namespace equimult {

namespace detail {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    return static_cast<std::uint64_t>(
        static_cast<unsigned __int128>(a) * b % p);
}

inline std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
    std::uint64_t r = 1 % p;
    a %= p;
    while (e) {
        if (e & 1) r = mulmod(r, a, p);
        a = mulmod(a, a, p);
        e >>= 1;
    }
    return r;
}

inline bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// Prime factors of n (without multiplicity), by trial division.
inline std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
    std::vector<std::uint64_t> fs;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            fs.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) fs.push_back(n);
    return fs;
}

}  // namespace detail

// The coefficient field: Q (characteristic 0) or a prime field GF(p).
// Characteristics are capped below 2^31 so that group-theoretic root
// extraction stays exact and cheap.
class FieldSpec {
public:
    FieldSpec() : char_(0) {}

    static FieldSpec rationals() { return FieldSpec(); }

    static FieldSpec gf(std::uint64_t p) {
        if (p >= (std::uint64_t{1} << 31))
            throw error("prime characteristic must be below 2^31");
        if (!detail::is_prime_u64(p))
            throw error("characteristic " + std::to_string(p) + " is not prime");
        FieldSpec f;
        f.char_ = p;
        return f;
    }

    std::uint64_t characteristic() const { return char_; }
    bool is_rationals() const { return char_ == 0; }
    bool operator==(const FieldSpec& o) const { return char_ == o.char_; }
    bool operator!=(const FieldSpec& o) const { return char_ != o.char_; }

    std::string str() const {
        return char_ == 0 ? "QQ" : "GF:" + std::to_string(char_);
    }

private:
    std::uint64_t char_;
};

// An exact field element: a reduced rational over Q, a residue in [0,p)
// over GF(p). Immutable value type.
class Scalar {
public:
    Scalar() : field_(), v_(mpq_class(0)) {}

    static Scalar zero(const FieldSpec& f) { return of(f, 0); }
    static Scalar one(const FieldSpec& f) { return of(f, 1); }

    static Scalar of(const FieldSpec& f, long n) {
        return of(f, mpz_class(n));
    }

    static Scalar of(const FieldSpec& f, const mpz_class& n) {
        Scalar s;
        s.field_ = f;
        if (f.is_rationals()) {
            s.v_ = mpq_class(n);
        } else {
            mpz_class r = n % mpz_class(static_cast<unsigned long>(f.characteristic()));
            if (r < 0) r += static_cast<unsigned long>(f.characteristic());
            s.v_ = static_cast<std::uint64_t>(r.get_ui());
        }
        return s;
    }

    static Scalar rational(const mpq_class& q) {
        Scalar s;
        s.field_ = FieldSpec::rationals();
        mpq_class c = q;
        c.canonicalize();
        s.v_ = c;
        return s;
    }

    static Scalar rational(long num, long den) {
        if (den == 0) throw division_by_zero("rational with zero denominator");
        return rational(mpq_class(num, den));
    }

    static Scalar residue(const FieldSpec& f, std::uint64_t r) {
        if (f.is_rationals()) throw field_mismatch();
        Scalar s;
        s.field_ = f;
        s.v_ = r % f.characteristic();
        return s;
    }

    const FieldSpec& field() const { return field_; }

    bool is_zero() const {
        return field_.is_rationals() ? rat() == 0 : res() == 0;
    }

    bool is_one() const {
        return field_.is_rationals() ? rat() == 1 : res() == 1 % field_.characteristic();
    }

    Scalar operator+(const Scalar& o) const {
        check(o);
        if (field_.is_rationals()) return rational(rat() + o.rat());
        return residue(field_, (res() + o.res()) % field_.characteristic());
    }

    Scalar operator-(const Scalar& o) const { return *this + (-o); }

    Scalar operator-() const {
        if (field_.is_rationals()) return rational(-rat());
        std::uint64_t p = field_.characteristic();
        return residue(field_, (p - res()) % p);
    }

    Scalar operator*(const Scalar& o) const {
        check(o);
        if (field_.is_rationals()) return rational(rat() * o.rat());
        return residue(field_, detail::mulmod(res(), o.res(), field_.characteristic()));
    }

    Scalar inv() const {
        if (is_zero()) throw division_by_zero("inverse of zero");
        if (field_.is_rationals()) return rational(1 / rat());
        std::uint64_t p = field_.characteristic();
        return residue(field_, detail::powmod(res(), p - 2, p));
    }

    Scalar operator/(const Scalar& o) const { return *this * o.inv(); }

    Scalar pow(std::uint64_t e) const {
        if (field_.is_rationals()) {
            mpq_class r = 1;
            mpq_class b = rat();
            std::uint64_t k = e;
            while (k) {
                if (k & 1) r *= b;
                b *= b;
                k >>= 1;
            }
            return rational(r);
        }
        return residue(field_, detail::powmod(res(), e, field_.characteristic()));
    }

    // Exact m-th root in the base field, or nothing. Over Q an even m
    // requires a nonnegative radicand and yields the nonnegative root.
    std::optional<Scalar> nth_root(std::uint64_t m) const;

    // All m-th roots in the base field, sorted canonically.
    std::vector<Scalar> nth_roots_all(std::uint64_t m) const;

    bool operator==(const Scalar& o) const {
        if (field_ != o.field_) return false;
        return field_.is_rationals() ? rat() == o.rat() : res() == o.res();
    }
    bool operator!=(const Scalar& o) const { return !(*this == o); }

    // Total order used for deterministic sorting. Over Q: numeric; over
    // GF(p): residue value.
    bool operator<(const Scalar& o) const {
        check(o);
        return field_.is_rationals() ? rat() < o.rat() : res() < o.res();
    }

    std::string str() const {
        if (field_.is_rationals()) return rat().get_str();
        return std::to_string(res());
    }

    const mpq_class& rat() const { return std::get<mpq_class>(v_); }
    std::uint64_t res() const { return std::get<std::uint64_t>(v_); }

private:
    void check(const Scalar& o) const {
        if (field_ != o.field_) throw field_mismatch();
    }

    FieldSpec field_;
    std::variant<mpq_class, std::uint64_t> v_;
};

namespace detail {

// Smallest generator of GF(p)*.
inline std::uint64_t primitive_root(std::uint64_t p) {
    if (p == 2) return 1;
    std::uint64_t n = p - 1;
    auto qs = prime_factors(n);
    for (std::uint64_t h = 2; h < p; ++h) {
        bool ok = true;
        for (auto q : qs)
            if (powmod(h, n / q, p) == 1) { ok = false; break; }
        if (ok) return h;
    }
    throw internal_error("no primitive root found");
}

// Discrete log of a in base g modulo p (baby-step giant-step).
inline std::uint64_t discrete_log(std::uint64_t a, std::uint64_t g, std::uint64_t p) {
    std::uint64_t n = p - 1;
    std::uint64_t m = 1;
    while (m * m < n) ++m;
    std::unordered_map<std::uint64_t, std::uint64_t> baby;
    std::uint64_t cur = 1;
    for (std::uint64_t j = 0; j < m; ++j) {
        baby.emplace(cur, j);
        cur = mulmod(cur, g, p);
    }
    std::uint64_t giant = powmod(powmod(g, m, p), p - 2, p);  // g^(-m)
    cur = a % p;
    for (std::uint64_t i = 0; i <= m; ++i) {
        auto it = baby.find(cur);
        if (it != baby.end()) return (i * m + it->second) % n;
        cur = mulmod(cur, giant, p);
    }
    throw internal_error("discrete log not found");
}

}  // namespace detail

inline std::optional<Scalar> Scalar::nth_root(std::uint64_t m) const {
    if (m == 0) throw error("0-th root is undefined");
    if (m == 1) return *this;
    if (field_.is_rationals()) {
        mpq_class q = rat();
        bool neg = q < 0;
        if (neg && m % 2 == 0) return std::nullopt;
        mpz_class num = abs(q.get_num());
        mpz_class den = q.get_den();
        mpz_class rn, rd, chk;
        mpz_root(rn.get_mpz_t(), num.get_mpz_t(), static_cast<unsigned long>(m));
        mpz_pow_ui(chk.get_mpz_t(), rn.get_mpz_t(), static_cast<unsigned long>(m));
        if (chk != num) return std::nullopt;
        mpz_root(rd.get_mpz_t(), den.get_mpz_t(), static_cast<unsigned long>(m));
        mpz_pow_ui(chk.get_mpz_t(), rd.get_mpz_t(), static_cast<unsigned long>(m));
        if (chk != den) return std::nullopt;
        mpq_class r(neg ? -rn : rn, rd);
        r.canonicalize();
        return rational(r);
    }
    std::uint64_t p = field_.characteristic();
    if (is_zero()) return zero(field_);
    if (p == 2) return *this;
    std::uint64_t n = p - 1;
    std::uint64_t d = m % n;
    if (d == 0) {
        if (is_one()) return one(field_);
        return std::nullopt;
    }
    std::uint64_t g = std::gcd(d, n);
    if (detail::powmod(res(), n / g, p) != 1) return std::nullopt;
    if (g == 1) {
        // d invertible mod n: root = a^(d^{-1} mod n).
        std::int64_t t = 0, newt = 1;
        std::int64_t r = static_cast<std::int64_t>(n), newr = static_cast<std::int64_t>(d);
        while (newr != 0) {
            std::int64_t qq = r / newr;
            std::int64_t tmp = t - qq * newt; t = newt; newt = tmp;
            tmp = r - qq * newr; r = newr; newr = tmp;
        }
        if (t < 0) t += static_cast<std::int64_t>(n);
        return residue(field_, detail::powmod(res(), static_cast<std::uint64_t>(t), p));
    }
    std::uint64_t h = detail::primitive_root(p);
    std::uint64_t L = detail::discrete_log(res(), h, p);
    if (L % g != 0) return std::nullopt;
    // solve d*x == L (mod n)
    std::uint64_t n2 = n / g, d2 = (d / g) % n2, L2 = (L / g) % n2;
    std::int64_t t = 0, newt = 1;
    std::int64_t r = static_cast<std::int64_t>(n2), newr = static_cast<std::int64_t>(d2 % n2);
    while (newr != 0) {
        std::int64_t qq = r / newr;
        std::int64_t tmp = t - qq * newt; t = newt; newt = tmp;
        tmp = r - qq * newr; r = newr; newr = tmp;
    }
    if (t < 0) t += static_cast<std::int64_t>(n2);
    std::uint64_t x = detail::mulmod(L2, static_cast<std::uint64_t>(t), n2);
    return residue(field_, detail::powmod(h, x, p));
}

inline std::vector<Scalar> Scalar::nth_roots_all(std::uint64_t m) const {
    std::vector<Scalar> out;
    auto r0 = nth_root(m);
    if (!r0) return out;
    if (is_zero()) { out.push_back(*r0); return out; }
    if (field_.is_rationals()) {
        out.push_back(*r0);
        if (m % 2 == 0 && !r0->is_zero()) out.push_back(-*r0);
    } else {
        std::uint64_t p = field_.characteristic();
        if (p == 2) { out.push_back(*r0); return out; }
        std::uint64_t n = p - 1;
        std::uint64_t d = m % n;
        std::uint64_t g = (d == 0) ? n : std::gcd(d, n);
        std::uint64_t h = detail::primitive_root(p);
        std::uint64_t w = detail::powmod(h, n / g, p);  // generates the m-th roots of unity
        std::uint64_t cur = 1;
        for (std::uint64_t k = 0; k < g; ++k) {
            out.push_back(residue(field_, detail::mulmod(r0->res(), cur, p)));
            cur = detail::mulmod(cur, w, p);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace equimult

#endif
