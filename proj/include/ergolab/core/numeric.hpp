#pragma once

// Number types shared by every module:
//   real_t       - IEEE binary128 (113-bit significand) for piece values and
//                  quasi-norm accumulation
//   big_int      - GMP integers for convergents and exact sequences
//   big_rational - GMP rationals for enclosures and exact identities

#include <boost/multiprecision/float128.hpp>
#include <boost/multiprecision/gmp.hpp>

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>

#include "ergolab/core/error.hpp"

namespace ergolab {

using real_t = boost::multiprecision::float128;
using big_int = boost::multiprecision::mpz_int;
using big_rational = boost::multiprecision::mpq_rational;
using complex_t = std::complex<double>;

inline constexpr double two_pi = 2.0 * std::numbers::pi;

inline real_t real_pow(const real_t& base, double exponent) {
    if (base == 0) return exponent == 0 ? real_t(1) : real_t(0);
    return boost::multiprecision::pow(base, real_t(exponent));
}

inline real_t real_abs(const real_t& v) { return boost::multiprecision::abs(v); }
inline real_t real_abs(const complex_t& v) { return real_t(std::abs(v)); }

inline double to_double(const real_t& v) { return v.convert_to<double>(); }

inline big_int pow_int(const big_int& base, unsigned exponent) {
    return boost::multiprecision::pow(base, exponent);
}

inline big_int floor_div(const big_int& num, const big_int& den) {
    big_int q, r;
    boost::multiprecision::divide_qr(num, den, q, r);
    if (r != 0 && ((r < 0) != (den < 0))) --q;
    return q;
}

inline big_int floor(const big_rational& v) {
    return floor_div(boost::multiprecision::numerator(v), boost::multiprecision::denominator(v));
}

inline big_int isqrt(const big_int& v) {
    require(v >= 0, errc::out_of_range, "isqrt of a negative integer");
    return boost::multiprecision::sqrt(v);
}

/// Least integer c with c^k >= v, for v >= 0 and k >= 1.
inline big_int ceil_root(const big_int& v, unsigned k) {
    require(v >= 0 && k >= 1, errc::out_of_range, "ceil_root domain");
    if (k == 1 || v <= 1) return v;
    big_int root;
    mpz_root(root.backend().data(), v.backend().data(), k);
    if (pow_int(root, k) < v) ++root;
    return root;
}

/// Greatest integer c with c^k <= v, for v >= 0 and k >= 1.
inline big_int floor_root(const big_int& v, unsigned k) {
    require(v >= 0 && k >= 1, errc::out_of_range, "floor_root domain");
    if (k == 1 || v <= 1) return v;
    big_int root;
    mpz_root(root.backend().data(), v.backend().data(), k);
    return root;
}

/// log2 of a positive big integer, accurate to double precision.
inline double log2_big(const big_int& v) {
    require(v > 0, errc::out_of_range, "log2 of a nonpositive integer");
    long exp = 0;
    const double mant = mpz_get_d_2exp(&exp, v.backend().data());
    return std::log2(mant) + static_cast<double>(exp);
}

inline real_t to_real(const big_rational& v) {
    // Scale to keep 120 significant bits before the final division.
    const big_int num = boost::multiprecision::numerator(v);
    const big_int den = boost::multiprecision::denominator(v);
    if (num == 0) return 0;
    const long shift = 120 - static_cast<long>(msb(abs(num))) + static_cast<long>(msb(den));
    big_int q = shift >= 0 ? big_int((num << shift) / den) : big_int(num / (den << -shift));
    long e = 0;
    real_t out = 0;
    // q has about 120 bits: split into two 64-bit halves.
    const bool negative = q < 0;
    if (negative) q = -q;
    while (msb(q) >= 126) {
        q >>= 1;
        ++e;
    }
    const auto lo = static_cast<std::uint64_t>(q & big_int(std::numeric_limits<std::uint64_t>::max()));
    const auto hi = static_cast<std::uint64_t>(q >> 64);
    out = boost::multiprecision::ldexp(real_t(hi), 64) + real_t(lo);
    out = boost::multiprecision::ldexp(out, static_cast<int>(e - shift));
    return negative ? real_t(-out) : out;
}

/// Renders a double with 17 significant digits (round-trip exact).
inline std::string format_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace ergolab
