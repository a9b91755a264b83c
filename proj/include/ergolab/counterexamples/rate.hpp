#pragma once

// Index machinery behind "no rate for L^1 coboundaries": a_n = n/b_n, its
// inverse c_n = min{m : a_m >= n}, J_n, l_n = J_n + 1 and tower heights
// k_n = c_{l_n}.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "ergolab/core/error.hpp"
#include "ergolab/core/numeric.hpp"

namespace ergolab {

/// A rate family b_n: either n^{p/q} with 0 < p/q <= 1, or n/log(n+1).
/// n^1 is representable so that it can be rejected.
struct rate_rule {
    enum class kind { power, log } k = kind::power;
    unsigned p = 1, q = 2;

    static rate_rule power(unsigned p, unsigned q) {
        require(q >= 1 && p >= 1, errc::invalid_rate, "power rate needs positive p and q");
        rate_rule r;
        r.p = p;
        r.q = q;
        return r;
    }
    static rate_rule sqrt_n() { return power(1, 2); }
    /// b_n = n^{1-r}, r = num/den in (0, 1).
    static rate_rule one_minus(unsigned num, unsigned den) {
        require(num >= 1 && num < den, errc::invalid_rate, "r must lie in (0,1)");
        return power(den - num, den);
    }
    static rate_rule n_over_log() {
        rate_rule r;
        r.k = kind::log;
        return r;
    }

    /// "sqrt", "log", "n", "power:p/q" or "one-minus:a/b".
    static rate_rule parse(const std::string& text) {
        if (text == "sqrt") return sqrt_n();
        if (text == "log") return n_over_log();
        if (text == "n") return power(1, 1);
        const auto colon = text.find(':');
        const auto slash = text.find('/');
        require(colon != std::string::npos && slash != std::string::npos && slash > colon, errc::config_invalid,
                "unknown rate rule '" + text + "'");
        const std::string head = text.substr(0, colon);
        const unsigned a = static_cast<unsigned>(std::stoul(text.substr(colon + 1, slash - colon - 1)));
        const unsigned b = static_cast<unsigned>(std::stoul(text.substr(slash + 1)));
        if (head == "power") return power(a, b);
        if (head == "one-minus") return one_minus(a, b);
        fail(errc::config_invalid, "unknown rate rule '" + text + "'");
    }

    std::string describe() const {
        if (k == kind::log) return "n/log(n+1)";
        if (p == q) return "n";
        return "n^(" + std::to_string(p) + "/" + std::to_string(q) + ")";
    }

    real_t b(const real_t& n) const {
        if (k == kind::log) return n / boost::multiprecision::log(n + 1);
        return boost::multiprecision::pow(n, real_t(p) / real_t(q));
    }
    real_t a(const real_t& n) const { return n / b(n); }

    /// b_n / n nonincreasing on [1, horizon] and strictly smaller at the
    /// horizon than at 1 (b_n/n must decrease to zero).
    void validate(std::uint64_t horizon) const {
        if (k == kind::power) {
            require(p < q, errc::invalid_rate,
                    "b_n = " + describe() + " has b_n/n constant; it must decrease to zero");
            return; // n^{p/q - 1} is strictly decreasing
        }
        // n/log(n+1) / n = 1/log(n+1): strictly decreasing, checked on a grid.
        real_t prev = b(real_t(1));
        for (std::uint64_t n = 2; n <= horizon; n = n < 1024 ? n + 1 : n * 2) {
            const real_t cur = b(real_t(n)) / real_t(n);
            require(cur <= prev, errc::invalid_rate, "b_n/n increases at n = " + std::to_string(n));
            prev = cur;
        }
    }

    /// c_n = min{m : a_m >= n}, exact.
    big_int c(const big_int& n) const {
        if (k == kind::power) {
            // a_m = m^{(q-p)/q} >= n  <=>  m^{q-p} >= n^q
            return ceil_root(pow_int(n, q), q - p);
        }
        // log(m+1) >= n  <=>  m >= e^n - 1, so c_n = ceil(e^n) - 1.
        const double nd = static_cast<double>(n);
        require(nd <= 70, errc::horizon_exceeded, "c_n = ceil(e^n) - 1 beyond binary128 resolution");
        const real_t e = boost::multiprecision::exp(real_t(nd));
        const real_t fl = boost::multiprecision::floor(e);
        require(e - fl > real_t(1e-9) && fl + 1 - e > real_t(1e-9), errc::insufficient_precision,
                "e^n too close to an integer");
        // ceil(e^n) - 1 = floor(e^n) < 2^102: assemble from two 64-bit halves.
        const real_t two64 = boost::multiprecision::ldexp(real_t(1), 64);
        const real_t hi = boost::multiprecision::floor(fl / two64);
        const real_t lo = fl - hi * two64;
        return (big_int(hi.convert_to<std::uint64_t>()) << 64) + big_int(lo.convert_to<std::uint64_t>());
    }
};

struct rate_row {
    std::uint64_t n = 0;
    big_int c_n;   // c_n
    big_int J;     // J_n
    big_int ell;   // l_n = J_n + 1
    big_int k;     // k_n = c_{l_n}
    big_rational growth; // k_n / (n^2 l_n)
    bool growth_exceeds_n = false;
    bool inverse_consistent = false; // a_{c_n} >= n and a_{c_n - 1} < n
};

struct rate_schedule_result {
    rate_rule rule;
    std::vector<rate_row> rows;
    bool c_nondecreasing = true;
    bool c_over_n_increasing = true; // c_n/n nondecreasing on the sampled range
};

namespace detail {

/// a_m >= n decided exactly.
inline bool a_at_least(const rate_rule& rule, const big_int& m, const big_int& n) {
    if (m <= 0) return false;
    if (rule.k == rate_rule::kind::power) return pow_int(m, rule.q - rule.p) >= pow_int(n, rule.q);
    // log(m+1) >= n  <=>  m >= c_n
    return m >= rule.c(n);
}

/// Least J with c_j/j > n^3 for every j > J.
inline big_int rate_J(const rate_rule& rule, std::uint64_t n, std::uint64_t horizon) {
    const big_int n3 = pow_int(big_int(n), 3);
    if (rule.k == rate_rule::kind::power) {
        // c_j > n^3 j  <=>  j^{q/(q-p)} > n^3 j  <=>  j^p > n^{3(q-p)}, monotone in j
        const big_int J = floor_root(pow_int(big_int(n), 3 * (rule.q - rule.p)), rule.p);
        require(J <= big_int(horizon), errc::horizon_exceeded,
                "J_" + std::to_string(n) + " = " + J.str() + " exceeds the search horizon");
        return J;
    }
    // (e^j - 1)/j is increasing and c_j >= e^j - 1: past the first j where the
    // lower bound clears n^3, every j qualifies. Then walk down.
    std::uint64_t j0 = 1;
    while (boost::multiprecision::exp(real_t(j0)) - 1 <= real_t(n3.str()) * real_t(j0)) {
        ++j0;
        require(j0 <= horizon, errc::horizon_exceeded, "J search leaves the horizon");
    }
    std::uint64_t J = j0 - 1;
    while (J >= 1 && rule.c(big_int(J)) > n3 * J) --J;
    return big_int(J);
}

} // namespace detail

inline constexpr std::uint64_t default_rate_horizon = 10'000'000;

/// Rows n = 1..n_max of the schedule, all integers exact.
inline rate_schedule_result rate_schedule(const rate_rule& rule, std::uint64_t n_max,
                                          std::uint64_t horizon = default_rate_horizon) {
    require(n_max >= 1, errc::out_of_range, "n_max must be positive");
    rule.validate(horizon);
    rate_schedule_result out;
    out.rule = rule;
    big_rational prev_ratio(0);
    for (std::uint64_t n = 1; n <= n_max; ++n) {
        rate_row row;
        row.n = n;
        row.c_n = rule.c(big_int(n));
        row.J = detail::rate_J(rule, n, horizon);
        row.ell = row.J + 1;
        row.k = rule.c(row.ell);
        row.growth = big_rational(row.k, big_int(n * n) * row.ell);
        row.growth_exceeds_n = row.growth > big_rational(big_int(n));
        row.inverse_consistent = detail::a_at_least(rule, row.c_n, big_int(n)) &&
                                 (row.c_n <= 1 || !detail::a_at_least(rule, row.c_n - 1, big_int(n)));
        if (!out.rows.empty() && row.c_n < out.rows.back().c_n) out.c_nondecreasing = false;
        const big_rational ratio(row.c_n, big_int(n));
        if (ratio < prev_ratio) out.c_over_n_increasing = false;
        prev_ratio = ratio;
        out.rows.push_back(std::move(row));
    }
    return out;
}

} // namespace ergolab
