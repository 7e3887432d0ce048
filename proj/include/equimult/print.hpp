#ifndef EQUIMULT_PRINT_HPP
#define EQUIMULT_PRINT_HPP

#include <string>

#include "equimult/series.hpp"

namespace equimult {

// Canonical rendering: terms in the graded order (degree, then X, Y, Z
// exponents), "Z^2 - X^2*Y" style. Re-parsing a printed polynomial yields
// the identical term map.
inline std::string to_poly_string(const MultiSeries& s) {
    if (s.is_zero()) return "0";
    static const char* names[3] = {"X", "Y", "Z"};
    std::string out;
    bool first = true;
    for (const auto& [key, c] : s.terms()) {
        ExpVec ev = ExpVec::from_key(key);
        std::string mono;
        for (int v = 0; v < s.arity(); ++v) {
            if (ev.e[v] == 0) continue;
            if (!mono.empty()) mono += "*";
            mono += names[v];
            if (ev.e[v] > 1) mono += "^" + std::to_string(ev.e[v]);
        }
        bool neg = false;
        std::string coeff;
        if (s.field().is_rationals()) {
            mpq_class q = c.rat();
            neg = q < 0;
            coeff = mpq_class(abs(q)).get_str();
        } else {
            coeff = c.str();
        }
        if (first) {
            if (neg) out += "-";
            first = false;
        } else {
            out += neg ? " - " : " + ";
        }
        if (mono.empty()) {
            out += coeff;
        } else if (coeff == "1") {
            out += mono;
        } else {
            out += coeff + "*" + mono;
        }
    }
    return out;
}

inline std::string to_string(const Precision& p) {
    return p.exact ? "exact" : "truncated:" + std::to_string(p.degree);
}

}  // namespace equimult

#endif
