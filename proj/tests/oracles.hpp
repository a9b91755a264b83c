#pragma once

// Independent reference computations for the test suites. Nothing here
// calls into the library's algorithms; only the number types are shared.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "ergolab/core/numeric.hpp"

namespace oracle {

using ergolab::big_int;
using ergolab::big_rational;

/// Partial quotients of (P + sqrt(D))/Q by the integer recurrence
///   a = floor((P + sqrt D)/Q), P' = aQ - P, Q' = (D - P'^2)/Q,
/// valid once Q divides D - P^2.
inline std::vector<big_int> surd_quotients(big_int P, big_int D, big_int Q, std::size_t count, big_int& a0) {
    if ((D - P * P) % Q != 0) {
        const big_int aq = Q < 0 ? big_int(-Q) : Q;
        P *= aq;
        D *= aq * aq;
        Q *= aq;
    }
    const big_int s = boost::multiprecision::sqrt(D);
    auto floor_div = [](const big_int& n, const big_int& d) {
        big_int q = n / d;
        if ((n % d != 0) && ((n < 0) != (d < 0))) --q;
        return q;
    };
    // floor((P + sqrt D)/Q) using floor(sqrt D) = s, valid for irrational sqrt D.
    auto next = [&](const big_int& p, const big_int& q) {
        return q > 0 ? floor_div(p + s, q) : floor_div(p + s + 1, q);
    };
    std::vector<big_int> out;
    big_int a = next(P, Q);
    a0 = a;
    for (std::size_t i = 0; i < count; ++i) {
        P = a * Q - P;
        Q = (D - P * P) / Q;
        a = next(P, Q);
        out.push_back(a);
    }
    return out;
}

/// Index of the first k in [0, limit] with frac(x + k alpha) <= bound, by
/// direct long-double scan; returns limit + 1 when none.
inline std::uint64_t scan_return(long double x, long double alpha, long double bound, std::uint64_t limit) {
    for (std::uint64_t k = 0; k <= limit; ++k) {
        long double y = std::fmod(x + static_cast<long double>(k) * alpha, 1.0L);
        if (y <= bound) return k;
    }
    return limit + 1;
}

/// Midpoint Riemann sum of |f|^r over n cells of [0,1).
template <class F>
double riemann(F&& f, double r, std::size_t n) {
    double s = 0;
    for (std::size_t i = 0; i < n; ++i) s += std::pow(std::abs(f((i + 0.5) / n)), r);
    return s / n;
}

} // namespace oracle
