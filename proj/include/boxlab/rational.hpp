#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <stdexcept>
#include <string>

namespace boxlab {

using Integer = boost::multiprecision::cpp_int;

// Arbitrary-precision rational, canonical form (positive denominator,
// gcd-reduced) is maintained by the backend after every operation.
using Rational = boost::multiprecision::cpp_rational;

// 200-bit binary float, used wherever logarithms force a float path.
using BigFloat = boost::multiprecision::number<
    boost::multiprecision::cpp_bin_float<200, boost::multiprecision::digit_base_2>>;

inline Rational make_rational(long num, long den = 1) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    return Rational(num, den);
}

inline BigFloat to_bigfloat(const Rational& r) {
    return BigFloat(numerator(r)) / BigFloat(denominator(r));
}

inline double to_double(const Rational& r) {
    return static_cast<double>(to_bigfloat(r));
}

inline int sign(const Rational& r) { return r.sign(); }

inline Rational rat_abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }

// Integer power with rational base; exponent >= 0.
inline Rational rat_pow(const Rational& base, unsigned long e) {
    Rational acc(1);
    Rational b = base;
    while (e > 0) {
        if (e & 1u) acc *= b;
        b *= b;
        e >>= 1u;
    }
    return acc;
}

// "num/den" (canonical) or a bare integer string.
Rational rational_from_string(const std::string& s);
std::string rational_to_string(const Rational& r);

// Fixed-point style decimal rendering with the requested number of
// significant digits (17 for report columns).
std::string rational_to_decimal(const Rational& r, int digits = 17);
std::string bigfloat_to_decimal(const BigFloat& x, int digits = 17);

}  // namespace boxlab
