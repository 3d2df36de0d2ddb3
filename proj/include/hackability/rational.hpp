#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

#include "hackability/errors.hpp"

namespace hackability::core {

using Int = boost::multiprecision::cpp_int;
// Arbitrary-precision rational, always in lowest terms with positive denominator.
using Rational = boost::multiprecision::cpp_rational;

// Accepts "3", "-7/2", "+1/3", and exact decimals like "0.25" or "-1.5".
// No whitespace, no exponents. Denominator 0 is a ParseError.
inline Rational parse_rational(std::string_view text) {
    auto fail = [&]() -> Rational {
        throw ParseError("invalid rational: '" + std::string(text) + "'");
    };
    std::size_t i = 0;
    const std::size_t n = text.size();
    bool neg = false;
    if (i < n && (text[i] == '+' || text[i] == '-')) neg = text[i++] == '-';

    auto read_digits = [&](std::string& out) {
        std::size_t start = i;
        while (i < n && text[i] >= '0' && text[i] <= '9') out += text[i++];
        return i > start;
    };

    std::string whole;
    if (!read_digits(whole)) return fail();

    Rational value;
    if (i < n && text[i] == '/') {
        ++i;
        std::string den;
        if (!read_digits(den) || i != n) return fail();
        Int d(den);
        if (d == 0) return fail();
        value = Rational(Int(whole), d);
    } else if (i < n && text[i] == '.') {
        ++i;
        std::string frac;
        if (!read_digits(frac) || i != n) return fail();
        Int scale = 1;
        for (std::size_t k = 0; k < frac.size(); ++k) scale *= 10;
        value = Rational(Int(whole) * scale + Int(frac), scale);
    } else if (i == n) {
        value = Rational(Int(whole));
    } else {
        return fail();
    }
    return neg ? Rational(-value) : value;
}

// "p/q", or just "p" when the denominator is 1. Round-trips through parse_rational.
inline std::string format_rational(const Rational& q) {
    std::string out = numerator(q).str();
    if (denominator(q) != 1) {
        out += '/';
        out += denominator(q).str();
    }
    return out;
}

}  // namespace hackability::core
