#pragma once

#include <cctype>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include "pir/errors.hpp"

namespace pir {

// Exact arithmetic types used throughout the hierarchy and geometry code.
// Inputs are small; intermediate values (power sums, iterated integrals)
// are not, so everything stays arbitrary precision.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt big_pow(const BigInt& base, unsigned exp) {
    return boost::multiprecision::pow(base, exp);
}

inline Rational rational_pow(const Rational& base, unsigned exp) {
    Rational r = 1;
    for (unsigned i = 0; i < exp; ++i) r *= base;
    return r;
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// Canonical "p/q" serialization (q > 0, gcd(p, q) = 1), e.g. "3/2", "-1/4", "16/1".
inline std::string format_rational(const Rational& r) {
    return numerator(r).str() + "/" + denominator(r).str();
}

/// Parses "p/q", a plain integer, or a decimal literal ("0.25" -> 1/4).
inline Rational parse_rational(std::string_view text) {
    auto fail = [&] { throw FormatError("cannot parse rational: '" + std::string(text) + "'"); };
    if (text.empty()) fail();

    const auto slash = text.find('/');
    try {
        if (slash != std::string_view::npos) {
            BigInt p(std::string(text.substr(0, slash)));
            BigInt q(std::string(text.substr(slash + 1)));
            if (q == 0) fail();
            return Rational(p, q);
        }
        const auto dot = text.find('.');
        if (dot == std::string_view::npos) return Rational(BigInt(std::string(text)));
        std::string digits(text.substr(0, dot));
        std::string frac(text.substr(dot + 1));
        for (char c : frac)
            if (!std::isdigit(static_cast<unsigned char>(c))) fail();
        const bool negative = !digits.empty() && digits[0] == '-';
        BigInt whole = digits.empty() || digits == "-" || digits == "+" ? BigInt(0)
                                                                        : BigInt(digits);
        BigInt scale = big_pow(BigInt(10), static_cast<unsigned>(frac.size()));
        BigInt num = whole * scale;
        BigInt f = frac.empty() ? BigInt(0) : BigInt(frac);
        num += negative ? -f : f;
        return Rational(num, scale);
    } catch (const std::runtime_error&) {
        fail();
    }
    return {}; // unreachable
}

} // namespace pir
