#pragma once

// Symmetric s-stable samples (Chambers-Mallows-Stuck) and Monte Carlo
// estimates of E[|g|^r ; |g| > K] against C sigma^s K^{r-s}.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "ergolab/core/error.hpp"

namespace ergolab {

/// Scale sigma is that of the characteristic function exp(-|sigma t|^s);
/// s = 2 is N(0, 2 sigma^2) and s = 1 is Cauchy with scale sigma.
struct stable_sample_set {
    double s = 2;
    double sigma = 1;
    std::uint64_t seed = 0;
    std::vector<double> samples;

    std::size_t count() const { return samples.size(); }
};

namespace detail {

/// Uniform on (0, 1) from the top 53 bits, never 0 or 1.
inline double open_uniform(std::mt19937_64& rng) {
    return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

} // namespace detail

inline stable_sample_set stable_sample(double s, double sigma, std::uint64_t seed, std::size_t count) {
    require(s > 0 && s <= 2, errc::out_of_range, "stability exponent must lie in (0, 2]");
    require(sigma > 0, errc::out_of_range, "scale must be positive");
    require(count >= 1, errc::out_of_range, "count must be positive");
    stable_sample_set set{s, sigma, seed, {}};
    set.samples.reserve(count);
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < count; ++i) {
        const double V = std::numbers::pi * (detail::open_uniform(rng) - 0.5);
        const double W = -std::log(detail::open_uniform(rng));
        double x;
        if (s == 1.0) {
            x = std::tan(V);
        } else {
            x = std::sin(s * V) / std::pow(std::cos(V), 1 / s) * std::pow(std::cos(V - s * V) / W, (1 - s) / s);
        }
        set.samples.push_back(sigma * x);
    }
    return set;
}

struct tail_moment_result {
    double estimate = 0;
    double stderr_ = 0;
    double bound = 0;   // C sigma^s K^{r-s}
    double C = 0;       // max{2, 2r/(s-r)}
    std::size_t exceedances = 0;
    bool within = false; // estimate <= bound + 3 stderr
};

inline tail_moment_result stable_tail_moment(const stable_sample_set& set, double r, double K,
                                             std::size_t min_exceedances = 100) {
    require(r > 0 && r < set.s, errc::out_of_range, "need 0 < r < s");
    require(K > 0, errc::out_of_range, "K must be positive");
    tail_moment_result out;
    const double n = static_cast<double>(set.count());
    double sum = 0, sum2 = 0;
    for (double x : set.samples) {
        const double a = std::abs(x);
        if (a > K) {
            const double v = std::pow(a, r);
            sum += v;
            sum2 += v * v;
            ++out.exceedances;
        }
    }
    require(out.exceedances >= min_exceedances, errc::insufficient_samples,
            std::to_string(out.exceedances) + " exceedances of K, need " + std::to_string(min_exceedances));
    out.estimate = sum / n;
    const double var = std::max(0.0, sum2 / n - out.estimate * out.estimate);
    out.stderr_ = std::sqrt(var / n);
    out.C = std::max(2.0, 2 * r / (set.s - r));
    out.bound = out.C * std::pow(set.sigma, set.s) * std::pow(K, r - set.s);
    out.within = out.estimate <= out.bound + 3 * out.stderr_;
    return out;
}

} // namespace ergolab
