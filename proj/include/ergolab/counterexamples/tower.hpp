#pragma once

// Tower functions h = sum_n n^-2 mu(B_n)^{-1/p} 1_{B_n} on the adding
// machine, with B_n = [0, 2^-n), and exact certificates on X_n \ B_n.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <type_traits>
#include <vector>

#include "ergolab/core/error.hpp"
#include "ergolab/core/numeric.hpp"
#include "ergolab/counterexamples/rate.hpp"
#include "ergolab/dynamics.hpp"
#include "ergolab/step_function.hpp"

namespace ergolab {

struct tower_function_data {
    step_function h;
    double p = 1;
    unsigned levels = 0;
    /// For p = 1 the exact values W(i) = sum_{n<=i} n^-2 2^n on
    /// [2^-(i+1), 2^-i) (index i = levels covers [0, 2^-levels)).
    std::vector<big_rational> exact;
    real_t pth_moment = 0;   // int h^p
    real_t norm_bound = 0;   // sum n^-2 >= ||h||_p
    real_t integral = 0;     // int h
};

/// sum_{n<=N} n^-2 2^{n/p} 1_[0, 2^-n), as an exact dyadic step function.
inline tower_function_data tower_function(unsigned N_levels, double p = 1.0) {
    require(N_levels >= 1, errc::out_of_range, "at least one level");
    require(N_levels <= 30, errc::level_too_deep, "tower levels beyond 30");
    require(p >= 1, errc::out_of_range, "p must be at least 1");
    tower_function_data d;
    d.p = p;
    d.levels = N_levels;
    std::vector<real_t> cum(N_levels + 1, real_t(0)); // cum[i] = value on the i-th shell
    if (p == 1.0) {
        big_rational w(0);
        d.exact.push_back(w);
        for (unsigned n = 1; n <= N_levels; ++n) {
            w += big_rational(big_int(1) << n, big_int(n) * n);
            d.exact.push_back(w);
            cum[n] = to_real(w);
        }
    } else {
        for (unsigned n = 1; n <= N_levels; ++n)
            cum[n] = cum[n - 1] + real_pow(real_t(2), n / p) / real_t(n * n);
    }
    // Breakpoints ascending: 0, 2^-N, ..., 2^-1.
    std::vector<fixed_t> br{fixed_t(0)};
    std::vector<real_t> vals{cum[N_levels]};
    for (unsigned i = N_levels; i >= 1; --i) {
        br.push_back(fixed::dyadic(i));
        vals.push_back(cum[i - 1]);
    }
    d.h = step_function::from_pieces(std::move(br), std::move(vals));
    for (std::size_t i = 0; i < d.h.size(); ++i) {
        d.pth_moment += real_pow(d.h.value(i), p) * d.h.length_real(i);
        d.integral += d.h.value(i) * d.h.length_real(i);
    }
    for (unsigned n = 1; n <= N_levels; ++n) d.norm_bound += real_t(1) / real_t(n * n);
    return d;
}

/// Least value of h on [lo, hi) for lo < hi, both 256-bit positions (hi = 0
/// reads as 1).
inline real_t min_on(const step_function& h, const fixed_t& lo, const fixed_t& hi) {
    std::size_t i = h.locate(lo);
    real_t m = h.value(i);
    for (++i; i < h.size() && (hi == 0 || h.breakpoint(i) < hi); ++i) m = std::min(m, h.value(i));
    return m;
}

namespace detail {

/// r = a/b with b <= 1024 when r is such a fraction in double precision.
inline std::optional<std::pair<unsigned, unsigned>> small_fraction(double r) {
    for (unsigned b = 1; b <= 1024; ++b) {
        const double a = std::round(r * b);
        if (a >= 1 && std::abs(a / b - r) < 1e-15) return std::make_pair(static_cast<unsigned>(a), b);
    }
    return std::nullopt;
}

} // namespace detail

struct tower_certificate {
    unsigned n = 0;
    double r = 0;
    real_t bound = 0;       // 2^{n(1-r)}/n^2
    real_t min_ratio = 0;   // min over levels j of (min of T^j h on level j)/j^r
    std::uint64_t levels_checked = 0;
    std::uint64_t levels_failed = 0;
    big_rational certified_measure{0};
    bool exact = false; // comparisons decided in integers
    bool pass = false;
};

/// For every level j in [1, 2^n - 1] of the height-2^n tower: theta^j maps
/// the level onto B_n (checked on cylinders), so T^j h >= min_{B_n} h there;
/// certifies min_{B_n} h / j^r >= 2^{n(1-r)}/n^2. With p = 1 and r a small
/// fraction a/b the comparison is W^b n^{2b} >= 2^{n(b-a)} j^a in integers.
inline tower_certificate tower_blowup(const tower_function_data& d, unsigned n, double r) {
    require(r > 0 && r < 1, errc::out_of_range, "r must lie in (0,1)");
    require(n >= 1 && n <= d.levels, errc::level_too_deep, "tower function has fewer levels than n");
    const auto tower = odometer_tower(n);
    tower_certificate c;
    c.n = n;
    c.r = r;
    c.bound = real_pow(real_t(2), n * (1 - r)) / real_t(n * n);
    const real_t minB = min_on(d.h, fixed_t(0), fixed::dyadic(n));

    const auto frac = detail::small_fraction(r);
    c.exact = frac.has_value() && !d.exact.empty();
    big_int lhs, rhs_scale;
    unsigned a = 0;
    if (c.exact) {
        a = frac->first;
        const unsigned b = frac->second;
        // min on B_n is W(n): the shell [2^-(n+1), 2^-n), or [0, 2^-n) when n = levels.
        const big_rational w = d.exact[n];
        big_rational l(pow_int(big_int(n), 2 * b));
        for (unsigned i = 0; i < b; ++i) l *= w;
        lhs = numerator(l);
        rhs_scale = (big_int(1) << (n * (b - a))) * denominator(l);
    }
    c.min_ratio = std::numeric_limits<double>::infinity();
    for (std::uint64_t j = 1; j < tower.height; ++j) {
        const auto lv = tower.level(j);
        bool ok = odometer::apply(lv.k, j, n) == 0;
        if (c.exact) {
            ok = ok && lhs >= rhs_scale * pow_int(big_int(j), a);
        } else {
            ok = ok && minB / real_pow(real_t(j), r) >= c.bound;
        }
        const real_t ratio = minB / real_pow(real_t(j), r);
        if (ratio < c.min_ratio) c.min_ratio = ratio;
        ++c.levels_checked;
        if (ok) {
            c.certified_measure += lv.length();
        } else {
            ++c.levels_failed;
        }
    }
    c.pass = c.levels_failed == 0;
    return c;
}

struct no_rate_level {
    unsigned n = 0;
    real_t min_excursion = 0; // min over X_n \ B_n of b_j/j |h - T^j h|
    std::uint64_t argmin_j = 0;
    bool above_threshold = false;
};

struct no_rate_report {
    rate_rule gamma_inverse; // b = 1/gamma
    double threshold = 0;
    std::vector<no_rate_level> levels;
    std::optional<unsigned> first_above; // least level with min excursion > threshold
    bool increasing = true;              // min excursion strictly increasing along levels
};

/// f = (I - T) h with h the p = 1 tower function; at x on level j of the
/// height-2^n tower, gamma_j^{-1} |M_j f(x)| = (b_j/j) |h(x) - h(theta^j x)|.
/// h(theta^j x) >= W(n) and h(x) = W(tz(j)), so the minimum over the level
/// set with tz(j) = t sits at the largest such j, J_t = 2^n - 2^t, because
/// b_j/j decreases. delta (if given) only gates validation: delta_n <= gamma_n.
template <class Delta = std::nullptr_t>
no_rate_report no_rate_coboundary(const rate_rule& b_rule, const std::vector<unsigned>& tower_levels, double threshold,
                                  Delta delta = nullptr, std::uint64_t horizon = default_rate_horizon) {
    b_rule.validate(horizon);
    if constexpr (!std::is_same_v<Delta, std::nullptr_t>) {
        for (std::uint64_t n = 1; n <= horizon; n = n < 1024 ? n + 1 : n * 2)
            require(delta(n) <= real_t(1) / b_rule.b(real_t(n)) * (1 + real_t(1e-30)), errc::invalid_rate,
                    "delta_n exceeds gamma_n at n = " + std::to_string(n));
    }
    unsigned top = 1;
    for (unsigned n : tower_levels) top = std::max(top, n);
    const auto d = tower_function(top);
    no_rate_report rep;
    rep.gamma_inverse = b_rule;
    rep.threshold = threshold;
    real_t prev = -1;
    for (unsigned n : tower_levels) {
        require(n >= 1 && n <= 30, errc::level_too_deep, "tower level must lie in [1, 30]");
        no_rate_level lv;
        lv.n = n;
        lv.min_excursion = std::numeric_limits<double>::infinity();
        const real_t Wn = to_real(d.exact[n]);
        for (unsigned t = 0; t < n; ++t) {
            const std::uint64_t J = (std::uint64_t(1) << n) - (std::uint64_t(1) << t);
            const real_t v = b_rule.b(real_t(J)) / real_t(J) * (Wn - to_real(d.exact[t]));
            if (v < lv.min_excursion) {
                lv.min_excursion = v;
                lv.argmin_j = J;
            }
        }
        lv.above_threshold = lv.min_excursion > threshold;
        if (lv.above_threshold && !rep.first_above) rep.first_above = n;
        if (!(lv.min_excursion > prev)) rep.increasing = false;
        prev = lv.min_excursion;
        rep.levels.push_back(lv);
    }
    return rep;
}

/// Brute-force counterpart of one no_rate level: every j in [1, 2^n - 1],
/// reading h on the level cylinder and the minimum of h on B_n.
inline real_t no_rate_min_bruteforce(const rate_rule& b_rule, const tower_function_data& d, unsigned n) {
    require(n <= 20, errc::level_too_deep, "brute force limited to n <= 20");
    const auto tower = odometer_tower(n);
    const real_t minB = min_on(d.h, fixed_t(0), fixed::dyadic(n));
    real_t best = std::numeric_limits<double>::infinity();
    for (std::uint64_t j = 1; j < tower.height; ++j) {
        const auto lv = tower.level(j);
        const fixed_t lo = fixed_t(lv.k) << (fixed_bits - n);
        const fixed_t hi = fixed_t(lv.k + 1) << (fixed_bits - n);
        const real_t hx = min_on(d.h, lo, hi); // h is constant on the level
        const real_t v = b_rule.b(real_t(j)) / real_t(j) * (minB - hx);
        best = std::min(best, v);
    }
    return best;
}

} // namespace ergolab
