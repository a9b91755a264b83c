#pragma once

// Pointwise behaviour of T^n g / n for g = 1/(1 - e^{2 pi i t}): lower bounds
// at return times and decay along geometric subsequences.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include <boost/multiprecision/float128.hpp>

#include "ergolab/core/error.hpp"
#include "ergolab/core/numeric.hpp"
#include "ergolab/diophantine.hpp"
#include "ergolab/dynamics.hpp"
#include "ergolab/hardy/pole_sum.hpp"
#include "ergolab/singular.hpp"

namespace ergolab {

struct return_ratio_result {
    std::size_t n = 0;
    big_int q_n;
    std::uint64_t ell = 0;
    bool forward = false;
    real_t ratio_lo = 0, ratio_hi = 0; // enclosure of 1/(ell |1 - e^{2 pi i y}|)
    real_t stated_bound = 0.5;
    real_t corrected_bound = 0; // q_n / (4 pi ell)
    bool stated_pass = false;     // ratio_lo >= 1/2
    bool corrected_pass = false; // ratio_lo >= q_n/(4 pi ell)
};

/// ell = first return of x into [0, 2/q_n] (next one when ell = 0) and
/// |g(x + ell alpha)| / ell = 1/(2 ell sin(pi y)). Since sin(pi y) <= 2 pi/q_n
/// on the target arc the ratio is at least q_n/(4 pi ell) >= 1/(4 pi); the
/// bound 1/2 needs y <= 1/(pi q_n), which returns into [0, 2/q_n] do not give.
inline return_ratio_result return_ratio(const rotation_number& alpha, const circle_point& x, std::size_t n) {
    return_ratio_result out;
    out.n = n;
    out.q_n = alpha.q(n);
    require(out.q_n >= 4, errc::out_of_range, "need q_n >= 4 so that the target arc lies in [0, 1/2]");
    std::uint64_t ell = return_time(alpha, x, n);
    if (ell == 0) {
        ell = forward_return_time(alpha, x, n);
        out.forward = true;
    }
    out.ell = ell;
    const circle_point y = alpha.orbit(x, ell);
    const fixed_t e = fixed_t(y.err) + 1;
    const real_t ylo = y.value > e ? fixed::to_real(fixed_t(y.value - e)) : real_t(0);
    const real_t yhi = fixed::to_real(fixed_t(y.value + e));
    const real_t pi = boost::multiprecision::acos(real_t(-1));
    const real_t l = real_t(ell);
    out.ratio_lo = 1 / (2 * l * boost::multiprecision::sin(pi * yhi));
    out.ratio_hi = ylo > 0 ? 1 / (2 * l * boost::multiprecision::sin(pi * ylo)) : real_t(std::numeric_limits<double>::infinity());
    out.corrected_bound = to_real(big_rational(out.q_n)) / (4 * pi * l);
    out.stated_pass = out.ratio_lo >= out.stated_bound;
    out.corrected_pass = out.ratio_lo >= out.corrected_bound;
    return out;
}

struct rho_subsequence_result {
    std::vector<big_int> n;          // n_j = floor(rho^j)
    std::vector<double> terms;       // int |T^{n_j} g / n_j|^r, numerically
    std::vector<double> term_errors;
    std::vector<double> partial;     // running sums of terms
    std::vector<double> bound;       // rho^r ||g||_r^r sum_{i<=j} rho^{-r i}
    double g_norm = 0;               // int |g|^r
    bool sums_within = true;
    std::vector<double> final_values; // |T^{n_J} g(x)| / n_J per sample point
    double final_max = 0;
};

/// g is the Cauchy kernel (or any pole sum); points x are drawn uniformly
/// with the given seed.
inline rho_subsequence_result rho_subsequence(const pole_sum& g, const rotation_number& alpha, const big_rational& rho,
                                              std::size_t J, double r, std::size_t points, std::uint64_t seed,
                                              const integration_options& opt = {}) {
    require(J >= 1, errc::out_of_range, "J must be positive");
    rho_subsequence_result out;
    out.n = subseq_indices(rho, J);
    out.g_norm = lr_quasinorm_singular(boundary_function(g), r, opt).value;
    const double rd = to_double(to_real(rho));
    double geo = 0, part = 0;
    for (std::size_t j = 1; j <= J; ++j) {
        const big_int& nj = out.n[j - 1];
        require(nj >= 1 && nj <= big_int(std::uint64_t(1) << 62), errc::out_of_range, "n_j out of range");
        const auto k = static_cast<std::uint64_t>(nj);
        const pole_sum shifted = g.koopman(alpha, k) * complex_t(1.0 / static_cast<double>(k));
        const auto q = lr_quasinorm_singular(boundary_function(shifted), r, opt);
        out.terms.push_back(q.value);
        out.term_errors.push_back(q.abs_error);
        part += q.value;
        geo += std::pow(rd, -r * static_cast<double>(j));
        out.partial.push_back(part);
        out.bound.push_back(std::pow(rd, r) * out.g_norm * geo);
        if (part - q.abs_error > out.bound.back()) out.sums_within = false;
    }
    std::mt19937_64 rng(seed);
    const auto kJ = static_cast<std::uint64_t>(out.n.back());
    const fixed_t shift = fixed::times(alpha.value(), kJ);
    for (std::size_t i = 0; i < points; ++i) {
        fixed_t x(0);
        for (int w = 0; w < 4; ++w) x = (x << 64) | fixed_t(rng());
        const complex_t v = g.boundary(fixed_t(x + shift), 0.0);
        const double val = std::abs(v) / static_cast<double>(kJ);
        out.final_values.push_back(val);
        out.final_max = std::max(out.final_max, val);
    }
    return out;
}

} // namespace ergolab
