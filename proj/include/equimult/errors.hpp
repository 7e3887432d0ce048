#ifndef EQUIMULT_ERRORS_HPP
#define EQUIMULT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace equimult {

// Base class for all errors thrown by the library.
class error : public std::runtime_error {
public:
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

class field_mismatch : public error {
public:
    field_mismatch() : error("operands belong to different fields") {}
};

class arity_mismatch : public error {
public:
    arity_mismatch() : error("operands have different variable counts") {}
};

class division_by_zero : public error {
public:
    explicit division_by_zero(const std::string& what = "division by zero")
        : error(what) {}
};

class zero_series : public error {
public:
    zero_series() : error("operation undefined on the zero series") {}
};

class order_violation : public error {
public:
    order_violation() : error("substitution image has a nonzero constant term") {}
};

class not_regular : public error {
public:
    explicit not_regular(const std::string& what) : error(what) {}
};

class not_distinguished : public error {
public:
    not_distinguished() : error("divisor is not a distinguished polynomial") {}
};

class not_invertible : public error {
public:
    not_invertible() : error("linear part of the variable change is singular") {}
};

class not_smooth : public error {
public:
    not_smooth() : error("curve is not smooth") {}
};

class precision_too_low : public error {
public:
    precision_too_low() : error("working precision too low to decide") {}
};

class no_regular_direction : public error {
public:
    explicit no_regular_direction(const std::string& what) : error(what) {}
};

class direction_not_on_cone : public error {
public:
    direction_not_on_cone() : error("tangent cone does not vanish at the chosen direction") {}
};

class center_not_permitted : public error {
public:
    center_not_permitted() : error("monoidal center is not a permitted curve") {}
};

// Indicates a broken internal invariant, not a user error.
class internal_error : public std::logic_error {
public:
    explicit internal_error(const std::string& msg) : std::logic_error(msg) {}
};

class syntax_error : public error {
public:
    syntax_error(const std::string& msg, std::size_t pos)
        : error(msg + " (at position " + std::to_string(pos) + ")"), position(pos) {}
    std::size_t position;
};

}  // namespace equimult

#endif
