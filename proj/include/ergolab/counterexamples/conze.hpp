#pragma once

// h = sum_n n^-2 q_n 1_[0, 2/q_n] for a rotation, truncated, and the
// certificates h(theta^j x)/j^r >= n^-2 q_n^{1-r} at return times j.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "ergolab/core/error.hpp"
#include "ergolab/core/numeric.hpp"
#include "ergolab/core/parallel.hpp"
#include "ergolab/diophantine.hpp"
#include "ergolab/step_function.hpp"

namespace ergolab {

/// r-metric bound on sum_{n > N} n^-2 q_n 1_[0,2/q_n]: by the r-triangle
/// inequality it is at most sum_{n>N} 2 n^{-2r} q_n^{r-1}. Terms past the
/// cached depth D use q_{D+2i} >= 2^i q_D. At r = 1 this is the L^1 tail
/// sum 2 n^-2 <= 2/N.
inline double conze_tail_bound(const rotation_number& alpha, std::size_t N, double r) {
    if (r >= 1.0) return 2.0 / static_cast<double>(N);
    const std::size_t D = alpha.depth();
    double s = 0;
    for (std::size_t n = N + 1; n <= D; ++n) {
        const double lq = log2_big(alpha.q(n));
        s += 2 * std::pow(static_cast<double>(n), -2 * r) * std::exp2((r - 1) * lq);
    }
    const std::size_t start = std::max(N, D);
    const double qd = std::exp2(log2_big(alpha.q(D)));
    const double first = 2 * std::pow(static_cast<double>(start + 1), -2 * r) * std::pow(qd, r - 1);
    // sum_{m >= 1} 2^{(r-1) floor(m/2)} <= 2 / (1 - 2^{r-1})
    s += first * 2 / (1 - std::exp2(r - 1));
    return s;
}

/// The truncation to terms n = 1..N_terms, supports clamped to the circle
/// when 2/q_n >= 1. Indexing follows q_0 = 1, q_1 = a_1.
inline step_function conze_function(const rotation_number& alpha, std::size_t N_terms) {
    require(N_terms >= 1, errc::out_of_range, "at least one term");
    require(N_terms <= alpha.depth(), errc::depth_exceeded,
            "conze_function needs q_" + std::to_string(N_terms) + " but depth is " + std::to_string(alpha.depth()));
    // Supports share the left end 0 and shrink with n, so the value on
    // [2/q_{n+1}, 2/q_n) is the sum of terms 1..n.
    std::vector<std::pair<fixed_t, real_t>> ends; // (right end, weight), right end 0 means full circle
    for (std::size_t n = 1; n <= N_terms; ++n) {
        const big_int& q = alpha.q(n);
        const real_t w = to_real(big_rational(q, big_int(n * n)));
        ends.emplace_back(q <= 2 ? fixed_t(0) : fixed::fraction(big_int(2), q), w);
    }
    real_t total = 0;
    for (const auto& e : ends) total += e.second;
    // Walk right ends upward: between consecutive ends the value drops.
    std::sort(ends.begin(), ends.end(), [](const auto& a, const auto& b) {
        if ((a.first == 0) != (b.first == 0)) return b.first == 0;
        return a.first < b.first;
    });
    std::vector<fixed_t> br{fixed_t(0)};
    std::vector<real_t> vals{total};
    real_t v = total;
    for (const auto& [end, w] : ends) {
        if (end == 0) break;
        v -= w;
        if (br.back() == end) {
            vals.back() = v;
        } else {
            br.push_back(end);
            vals.push_back(v);
        }
    }
    auto h = step_function::from_pieces(std::move(br), std::move(vals));
    h.set_tail([alpha, N_terms](double r) { return conze_tail_bound(alpha, N_terms, r); });
    return h;
}

/// 2 sum_{n <= N} n^-2, the integral of the untruncated supports.
inline real_t conze_integral_bound(std::size_t N) {
    real_t s = 0;
    for (std::size_t n = 1; n <= N; ++n) s += real_t(2) / real_t(n * n);
    return s;
}

struct conze_certificate {
    std::size_t n = 0;
    double r = 0;
    std::uint64_t j = 0;  // return time used (>= 1)
    bool forward = false; // true when return_time gave 0 and the next return was used
    real_t h_value = 0;   // h(theta^j x), a certified lower value
    real_t value = 0;     // h_value / j^r
    real_t lower_bound = 0; // n^-2 q_n^{1-r}
    bool pass = false;
};

/// h(theta^j x)/j^r at the first return j >= 1 into [0, 2/q_n]. h must have at
/// least n terms. h is nonincreasing on [0, 1), so evaluating at the upper
/// end of the certified enclosure gives a value no larger than the true one.
inline conze_certificate conze_blowup(const rotation_number& alpha, const step_function& h, const circle_point& x,
                                      std::size_t n, double r) {
    require(r > 0 && r <= 1, errc::out_of_range, "exponent r must lie in (0,1]");
    const big_int& qn = alpha.q(n);
    conze_certificate c;
    c.n = n;
    c.r = r;
    std::uint64_t j = return_time(alpha, x, n);
    if (j == 0) {
        j = forward_return_time(alpha, x, n);
        c.forward = true;
    }
    c.j = j;
    const circle_point y = alpha.orbit(x, j);
    // The exact point lies in [0, 2/q_n] and at or below y.value + err.
    const fixed_t top = y.value + fixed_t(y.err + 1);
    c.h_value = h(top);
    c.value = c.h_value / real_pow(real_t(j), r);
    c.lower_bound = to_real(big_rational(qn, big_int(n * n))) / real_pow(to_real(big_rational(qn)), r);
    c.pass = c.value >= c.lower_bound;
    return c;
}

/// max over 1 <= j <= J of h(theta^j x)/j^r.
inline real_t conze_sup_ratio(const rotation_number& alpha, const step_function& h, const circle_point& x,
                              std::uint64_t J, double r) {
    real_t best = 0;
    fixed_t y = x.value;
    for (std::uint64_t j = 1; j <= J; ++j) {
        y += alpha.value();
        const real_t v = h(y) / real_pow(real_t(j), r);
        if (v > best) best = v;
    }
    return best;
}

} // namespace ergolab
