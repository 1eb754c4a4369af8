// Exact rational scalar type and small helpers shared across the library.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdio>
#include <stdexcept>
#include <string>

namespace bifurcus {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

inline int sign_of(const Rational& q) {
    if (q > 0) return 1;
    if (q < 0) return -1;
    return 0;
}

/// Exact conversion of a decimal literal such as "0.5" or "12" to a rational.
/// Accepts an optional leading '-'. Throws std::invalid_argument on anything else.
inline Rational rational_from_decimal(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("empty numeric literal");
    std::size_t i = 0;
    bool negative = false;
    if (text[i] == '-') { negative = true; ++i; }
    BigInt numerator = 0;
    BigInt denominator = 1;
    bool saw_digit = false, saw_dot = false;
    for (; i < text.size(); ++i) {
        char c = text[i];
        if (c >= '0' && c <= '9') {
            numerator = numerator * 10 + (c - '0');
            if (saw_dot) denominator *= 10;
            saw_digit = true;
        } else if (c == '.' && !saw_dot) {
            saw_dot = true;
        } else {
            throw std::invalid_argument("bad numeric literal: " + text);
        }
    }
    if (!saw_digit) throw std::invalid_argument("bad numeric literal: " + text);
    Rational value(numerator, denominator);
    return negative ? Rational(-value) : value;
}

/// "3", "-1/2", ... — the exact textual form used in JSON output.
inline std::string rational_to_string(const Rational& q) {
    std::string s = numerator(q).str();
    if (denominator(q) != 1) s += "/" + denominator(q).str();
    return s;
}

inline Rational rational_from_string(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(BigInt(s));
    return Rational(BigInt(s.substr(0, slash)), BigInt(s.substr(slash + 1)));
}

/// Deterministic shortest-ish decimal for human-facing text (traces, SVG labels).
inline std::string format_double(double v, int significant = 6) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", significant, v);
    std::string s(buf);
    if (s == "-0") s = "0";
    return s;
}

}  // namespace bifurcus
