#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

#include "zerocurve/errors.hpp"

namespace zerocurve {

/// Exact arbitrary-precision rational coefficient type. All symbolic
/// identities in this library are verified with no rounding anywhere.
using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// Prints `p` or `p/q`, matching the expression text format.
inline std::string rational_to_string(const Rational& r) {
    if (denominator(r) == 1) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

/// Parses `p`, `p/q`, or a plain decimal like `0.25` into an exact rational.
inline Rational parse_rational(const std::string& text) {
    if (text.empty()) throw ParseError("empty rational literal");
    auto slash = text.find('/');
    try {
        if (slash != std::string::npos) {
            Integer num(text.substr(0, slash));
            Integer den(text.substr(slash + 1));
            if (den == 0) throw ParseError("zero denominator in '" + text + "'");
            return Rational(num, den);
        }
        auto dot = text.find('.');
        if (dot != std::string::npos) {
            std::string digits = text.substr(0, dot) + text.substr(dot + 1);
            std::size_t places = text.size() - dot - 1;
            Integer num(digits);
            Integer den = 1;
            for (std::size_t i = 0; i < places; ++i) den *= 10;
            return Rational(num, den);
        }
        return Rational(Integer(text));
    } catch (const std::exception&) {
        throw ParseError("bad rational literal '" + text + "'");
    }
}

} // namespace zerocurve
