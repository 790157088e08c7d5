#pragma once

#include <gmpxx.h>

#include <boost/multiprecision/mpfr.hpp>

#include <string>

#include "fmvol/errors.hpp"

namespace fmvol {

/// Exact rational carrier for all weights, volumes and thresholds.
using Rat = mpq_class;

/// High-precision float (~166-bit mantissa) for the final transcendental step.
using Real = boost::multiprecision::mpfr_float_50;

inline Rat rat(long num, long den = 1) {
    Rat r(num, den);
    r.canonicalize();
    return r;
}

/// Parses "p/q" or "p" with optional sign. Throws ParseError on garbage.
inline Rat parse_rat(const std::string& text) {
    if (text.empty())
        throw ParseError("empty rational literal");
    for (size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        bool ok = (c >= '0' && c <= '9') || c == '/' || (c == '-' && i == 0);
        if (!ok)
            throw ParseError("bad rational literal: " + text);
    }
    mpq_class r;
    if (r.set_str(text, 10) != 0)
        throw ParseError("bad rational literal: " + text);
    if (r.get_den() == 0)
        throw ParseError("zero denominator: " + text);
    r.canonicalize();
    return r;
}

inline std::string rat_str(const Rat& r) { return r.get_str(); }

/// base^e for integer e (negative e requires base != 0).
inline Rat rat_pow(const Rat& base, long e) {
    if (e == 0)
        return Rat(1);
    Rat b = base;
    if (e < 0) {
        if (b == 0)
            throw ArgumentError("rat_pow: zero base with negative exponent");
        b = Rat(1) / b;
        e = -e;
    }
    Rat acc(1);
    while (e > 0) {
        if (e & 1)
            acc *= b;
        b *= b;
        e >>= 1;
    }
    return acc;
}

inline Rat rat_abs(const Rat& r) { return r < 0 ? Rat(-r) : r; }

inline Real to_real(const Rat& r) {
    Real num(r.get_num().get_str());
    Real den(r.get_den().get_str());
    return num / den;
}

/// Rational upper bound on e, tight to 1e-9.
inline const Rat& e_upper() {
    static const Rat v(2718281829L, 1000000000L);
    return v;
}

/// Rational upper bound on e^4 (e^4 = 54.598...).
inline const Rat& e4_upper() {
    static const Rat v(273, 5);
    return v;
}

} // namespace fmvol
