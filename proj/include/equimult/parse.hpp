#ifndef EQUIMULT_PARSE_HPP
#define EQUIMULT_PARSE_HPP

#include <cctype>
#include <map>
#include <string>
#include <vector>

#include "equimult/series.hpp"

namespace equimult {

namespace detail {

// Recursive-descent parser for the expression grammar: integer literals,
// the ambient variables (X1/Y1/Z1 accepted as aliases of X/Y/Z), the
// operators + - * ^ and parentheses. Implicit multiplication is a syntax
// error.
class PolyParser {
public:
    PolyParser(const std::string& text, const FieldSpec& field, int arity)
        : text_(text), field_(field), arity_(arity) {}

    MultiSeries parse() {
        MultiSeries r = expr();
        skip_ws();
        if (pos_ != text_.size())
            throw syntax_error("unexpected trailing input", pos_);
        return r;
    }

private:
    MultiSeries expr() {
        skip_ws();
        bool neg = false;
        if (peek() == '-') {
            neg = true;
            ++pos_;
        } else if (peek() == '+') {
            ++pos_;
        }
        MultiSeries acc = term();
        if (neg) acc = -acc;
        while (true) {
            skip_ws();
            char c = peek();
            if (c == '+' || c == '-') {
                ++pos_;
                MultiSeries t = term();
                acc = (c == '+') ? acc + t : acc - t;
            } else {
                return acc;
            }
        }
    }

    MultiSeries term() {
        MultiSeries acc = factor();
        while (true) {
            skip_ws();
            if (peek() == '*') {
                ++pos_;
                acc = acc * factor();
            } else {
                char c = peek();
                if (c == '(' || std::isalnum(static_cast<unsigned char>(c)))
                    throw syntax_error("implicit multiplication is not allowed", pos_);
                return acc;
            }
        }
    }

    MultiSeries factor() {
        MultiSeries b = base();
        skip_ws();
        if (peek() == '^') {
            ++pos_;
            skip_ws();
            std::size_t at = pos_;
            if (!std::isdigit(static_cast<unsigned char>(peek())))
                throw syntax_error("exponent must be a non-negative integer literal", at);
            unsigned long e = 0;
            while (std::isdigit(static_cast<unsigned char>(peek()))) {
                e = e * 10 + static_cast<unsigned long>(peek() - '0');
                if (e > 0xffff) throw syntax_error("exponent too large", at);
                ++pos_;
            }
            return b.pow(static_cast<unsigned>(e));
        }
        return b;
    }

    MultiSeries base() {
        skip_ws();
        char c = peek();
        std::size_t at = pos_;
        if (c == '(') {
            ++pos_;
            MultiSeries r = expr();
            skip_ws();
            if (peek() != ')') throw syntax_error("expected ')'", pos_);
            ++pos_;
            return r;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::string digits;
            while (std::isdigit(static_cast<unsigned char>(peek()))) digits += text_[pos_++];
            return MultiSeries::constant(field_, arity_, Scalar::of(field_, mpz_class(digits)));
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::string name;
            while (std::isalnum(static_cast<unsigned char>(peek()))) name += text_[pos_++];
            int var = -1;
            if (name == "X" || name == "x" || name == "X1" || name == "x1") var = 0;
            else if (name == "Y" || name == "y" || name == "Y1" || name == "y1") var = 1;
            else if (name == "Z" || name == "z" || name == "Z1" || name == "z1") var = 2;
            if (var < 0 || var >= arity_)
                throw syntax_error("unknown variable '" + name + "'", at);
            return MultiSeries::variable(field_, arity_, var);
        }
        throw syntax_error("expected a literal, variable or '('", at);
    }

    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    const std::string& text_;
    FieldSpec field_;
    int arity_;
    std::size_t pos_ = 0;
};

}  // namespace detail

inline MultiSeries parse_poly(const std::string& text, const FieldSpec& field,
                              int arity = 3) {
    return detail::PolyParser(text, field, arity).parse();
}

inline FieldSpec parse_field(const std::string& text) {
    if (text == "QQ" || text == "Q" || text == "qq") return FieldSpec::rationals();
    if (text.rfind("GF:", 0) == 0 || text.rfind("gf:", 0) == 0)
        return FieldSpec::gf(std::stoull(text.substr(3)));
    if (text.rfind("GF(", 0) == 0 && text.back() == ')')
        return FieldSpec::gf(std::stoull(text.substr(3, text.size() - 4)));
    throw error("field must be QQ or GF:p, got '" + text + "'");
}

// A field element literal: an integer, or p/q over the rationals.
inline Scalar parse_scalar(const std::string& text, const FieldSpec& field) {
    auto slash = text.find('/');
    if (slash == std::string::npos) {
        return Scalar::of(field, mpz_class(text));
    }
    if (!field.is_rationals()) {
        mpz_class num(text.substr(0, slash)), den(text.substr(slash + 1));
        return Scalar::of(field, num) * Scalar::of(field, den).inv();
    }
    mpz_class num(text.substr(0, slash)), den(text.substr(slash + 1));
    if (den == 0) throw division_by_zero("rational literal with zero denominator");
    return Scalar::rational(mpq_class(num, den));
}

// Directions "a:b:c" (or "a:c" for a monoidal direction, meaning (a:0:c)).
inline std::array<Scalar, 3> parse_direction_coords(const std::string& text,
                                                    const FieldSpec& field) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : text) {
        if (c == ':') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    if (parts.size() == 2)
        return {parse_scalar(parts[0], field), Scalar::zero(field),
                parse_scalar(parts[1], field)};
    if (parts.size() != 3) throw error("direction must have 2 or 3 components");
    return {parse_scalar(parts[0], field), parse_scalar(parts[1], field),
            parse_scalar(parts[2], field)};
}

// key=value session files; '#' starts a comment.
inline std::map<std::string, std::string> parse_session(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::size_t start = 0;
    auto trim = [](std::string s) {
        std::size_t b = s.find_first_not_of(" \t\r");
        std::size_t e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        std::string line = text.substr(start, end == std::string::npos ? std::string::npos
                                                                       : end - start);
        start = end == std::string::npos ? text.size() + 1 : end + 1;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) throw error("session line is not key=value: " + line);
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return kv;
}

}  // namespace equimult

#endif
