#pragma once

// Circle coordinates as 256-bit unsigned fractions: a value v stands for
// v / 2^256 in [0,1). Unsigned wraparound makes addition exactly mod 1.

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <string>

#include "ergolab/core/error.hpp"
#include "ergolab/core/numeric.hpp"

namespace ergolab {

using fixed_t = boost::multiprecision::uint256_t;

inline constexpr unsigned fixed_bits = 256;

/// A certified circle point: |true - value| <= err ulps (1 ulp = 2^-256).
struct circle_point {
    fixed_t value{0};
    std::uint64_t err{0};

    friend bool operator==(const circle_point&, const circle_point&) = default;
};

namespace fixed {

inline const fixed_t& half() {
    static const fixed_t h = fixed_t(1) << 255;
    return h;
}

/// Exact conversion of a double in [0,1).
inline fixed_t from_double(double d) {
    require(d >= 0.0 && d < 1.0, errc::out_of_range, "circle coordinate outside [0,1)");
    if (d == 0.0) return 0;
    int e = 0;
    const double m = std::frexp(d, &e);
    const auto mant = static_cast<std::uint64_t>(std::ldexp(m, 53));
    const int shift = e + static_cast<int>(fixed_bits) - 53;
    fixed_t v = mant;
    return shift >= 0 ? fixed_t(v << shift) : fixed_t(v >> -shift);
}

/// floor(frac(x) * 2^256) for an exact rational x.
inline fixed_t from_rational(const big_rational& x) {
    const big_rational f = x - big_rational(floor(x));
    const big_int scaled = floor(f * big_rational(big_int(1) << fixed_bits));
    return fixed_t(scaled);
}

inline big_int to_big(const fixed_t& v) { return big_int(v.str()); }

inline big_rational to_rational(const fixed_t& v) {
    return big_rational(to_big(v), big_int(1) << fixed_bits);
}

/// v / 2^256 rounded to double.
inline double to_double(const fixed_t& v) {
    if (v == 0) return 0.0;
    const int s = static_cast<int>(msb(v));
    const int low = s - 63;
    const auto top = low >= 0 ? static_cast<std::uint64_t>(v >> low) : static_cast<std::uint64_t>(v << -low);
    return std::ldexp(static_cast<double>(top), low - static_cast<int>(fixed_bits));
}

/// v / 2^256 rounded to binary128.
inline real_t to_real(const fixed_t& v) {
    if (v == 0) return 0;
    const int s = static_cast<int>(msb(v));
    const int low = s - 127;
    const fixed_t top = low >= 0 ? fixed_t(v >> low) : fixed_t(v << -low);
    const auto hi = static_cast<std::uint64_t>(top >> 64);
    const auto lo = static_cast<std::uint64_t>(top);
    const real_t out = boost::multiprecision::ldexp(real_t(hi), 64) + real_t(lo);
    return boost::multiprecision::ldexp(out, low - static_cast<int>(fixed_bits));
}

/// Signed representative of v in [-1/2, 1/2), as a double.
inline double centered(const fixed_t& v) {
    if (v >= half()) return -to_double(fixed_t(fixed_t(0) - v));
    return to_double(v);
}

/// Circle distance between two fixed points, as a fixed value in [0, 1/2].
inline fixed_t distance(const fixed_t& a, const fixed_t& b) {
    const fixed_t d = a - b;
    const fixed_t e = b - a;
    return d < e ? d : e;
}

/// Multiply a fixed value by a nonnegative integer, mod 1.
inline fixed_t times(const fixed_t& v, std::uint64_t k) { return v * fixed_t(k); }

inline fixed_t times(const fixed_t& v, const big_int& k) {
    const big_int m = (to_big(v) * k) & ((big_int(1) << fixed_bits) - 1);
    return fixed_t(m);
}

/// 2^-k as a fixed value (k in [1, 255]).
inline fixed_t dyadic(unsigned k) {
    require(k >= 1 && k < fixed_bits, errc::out_of_range, "dyadic exponent");
    return fixed_t(1) << (fixed_bits - k);
}

/// floor(num * 2^256 / den) for 0 <= num < den, i.e. the fraction num/den.
inline fixed_t fraction(const big_int& num, const big_int& den) {
    require(den > 0 && num >= 0 && num < den, errc::out_of_range, "fraction outside [0,1)");
    return fixed_t(big_int((num << fixed_bits) / den));
}

} // namespace fixed

/// The point frac(x + y), with errors added.
inline circle_point add(const circle_point& x, const circle_point& y) {
    return {x.value + y.value, x.err + y.err};
}

} // namespace ergolab
