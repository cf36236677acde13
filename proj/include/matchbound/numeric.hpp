#pragma once

#include <cmath>
#include <algorithm>
#include <numbers>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace matchbound {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline constexpr double kLog2E = std::numbers::log2e;

/// log2 of a positive big integer, accurate to double rounding.
inline double log2_big(const BigInt& x) {
    if (x <= 0) throw std::domain_error("log2 of a non-positive integer");
    const std::size_t msb = boost::multiprecision::msb(x);
    if (msb < 1000) return std::log2(x.convert_to<double>());
    const std::size_t shift = msb - 60;
    const BigInt top = x >> shift;
    return std::log2(top.convert_to<double>()) + static_cast<double>(shift);
}

inline double log2_rational(const Rational& r) {
    return log2_big(boost::multiprecision::numerator(r)) - log2_big(boost::multiprecision::denominator(r));
}

inline double to_double(const Rational& r) {
    return boost::multiprecision::numerator(r).convert_to<double>() / boost::multiprecision::denominator(r).convert_to<double>();
}

inline BigInt factorial(unsigned n) {
    BigInt out = 1;
    for (unsigned k = 2; k <= n; ++k) out *= k;
    return out;
}

/// (d)_t = d (d-1) ... (d-t+1).
inline BigInt falling_factorial(unsigned d, unsigned t) {
    if (t > d) return 0;
    BigInt out = 1;
    for (unsigned k = 0; k < t; ++k) out *= d - k;
    return out;
}

inline BigInt binomial(unsigned n, unsigned k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    BigInt out = 1;
    for (unsigned i = 1; i <= k; ++i) {
        out *= n - k + i;
        out /= i;
    }
    return out;
}

inline std::string to_string(const BigInt& x) { return x.str(); }

/// "num/den" in lowest terms; integers are written as "num/1".
inline std::string to_string(const Rational& r) {
    return boost::multiprecision::numerator(r).str() + "/" + boost::multiprecision::denominator(r).str();
}

inline Rational parse_rational(const std::string& text) {
    const auto slash = text.find('/');
    if (slash == std::string::npos) return Rational(BigInt(text));
    return Rational(BigInt(text.substr(0, slash)), BigInt(text.substr(slash + 1)));
}

}  // namespace matchbound
