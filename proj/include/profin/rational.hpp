#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

#include "profin/errors.hpp"

namespace profin {

/// Exact arithmetic backbone. Ultrametric comparisons, cylinder masses and
/// action values are all computed in arbitrary-precision rationals; floating
/// point enters only at the final conversion.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Rational pow2_inverse(unsigned k) {
    return Rational(BigInt(1), BigInt(1) << k);
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// Exact: every finite double is a dyadic rational.
inline Rational rational_from_double(double x) { return Rational(x); }

/// Prints "p/q", or just "p" for integers ("0", "1", ...).
inline std::string rational_to_string(const Rational& r) {
    if (boost::multiprecision::denominator(r) == 1)
        return boost::multiprecision::numerator(r).str();
    return boost::multiprecision::numerator(r).str() + "/" +
           boost::multiprecision::denominator(r).str();
}

/// Accepts "p/q" or a bare integer "p".
inline Rational parse_rational(const std::string& text) {
    auto slash = text.find('/');
    try {
        if (slash == std::string::npos) return Rational(BigInt(text));
        BigInt num(text.substr(0, slash));
        BigInt den(text.substr(slash + 1));
        if (den == 0) throw Error(ErrorKind::Usage, "zero denominator in '" + text + "'");
        return Rational(num, den);
    } catch (const Error&) {
        throw;
    } catch (const std::exception&) {
        throw Error(ErrorKind::Usage, "bad rational '" + text + "'");
    }
}

}  // namespace profin
