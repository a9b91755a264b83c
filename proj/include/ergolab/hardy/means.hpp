#pragma once

// Radial L^r means, the growth bound |f(z)| <= M (1-R)^{-1/r}, distances
// to analytic partial sums, and the mean ergodic theorem on H^r.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "ergolab/core/error.hpp"
#include "ergolab/core/numeric.hpp"
#include "ergolab/diophantine.hpp"
#include "ergolab/hardy/pole_sum.hpp"
#include "ergolab/hardy/series.hpp"
#include "ergolab/singular.hpp"

namespace ergolab {

struct radial_entry {
    double R = 0;
    quasi_norm_result result; // (1/2pi) int |f(R e^{it})|^r dt
};

struct radial_profile {
    double r = 0;
    std::vector<radial_entry> entries;
    double supremum = 0;
    bool monotone = true; // nondecreasing within twice the integration tolerance
};

/// |f(R e^{2 pi i t})|^r integrated with every pole declared: for R < 1 the
/// pole term is bounded by |c|/(4 sqrt(R) |t - p|), so panels grade toward
/// the pole positions and resolve the peak of width 1 - R.
inline quasi_norm_result radial_mean(const pole_sum& f, double r, double R, const integration_options& opt = {}) {
    require(R > 0 && R < 1, errc::out_of_range, "radius must lie in (0,1)");
    const pole_sum m = f.merged();
    singular_function<complex_t> g;
    g.eval = [m, R](const fixed_t& b, double o) { return m.disc_polar(R, b, o); };
    for (const auto& p : m.poles) g.anchors.push_back({p.pos, 1.0, std::abs(p.c) / (4 * std::sqrt(R))});
    g.name = f.name;
    return lr_quasinorm_singular(g, r, opt);
}

inline radial_profile hardy_quasinorm(const pole_sum& f, double r, const std::vector<double>& R_grid,
                                      const integration_options& opt = {}) {
    require(!R_grid.empty(), errc::out_of_range, "empty radius grid");
    for (std::size_t i = 0; i < R_grid.size(); ++i)
        require(R_grid[i] > 0 && R_grid[i] < 1 && (i == 0 || R_grid[i] > R_grid[i - 1]), errc::out_of_range,
                "radius grid must be increasing in (0,1)");
    radial_profile out;
    out.r = r;
    for (double R : R_grid) {
        radial_entry e{R, radial_mean(f, r, R, opt)};
        if (!out.entries.empty() && e.result.value + 2 * opt.tol < out.entries.back().result.value) out.monotone = false;
        out.supremum = std::max(out.supremum, e.result.value);
        out.entries.push_back(e);
    }
    return out;
}

/// (1/2pi) int |f(e^{it})|^r dt on the circle itself.
inline quasi_norm_result boundary_quasinorm(const pole_sum& f, double r, const integration_options& opt = {}) {
    return lr_quasinorm_singular(boundary_function(f), r, opt);
}

/// sqrt(2) B(1/4, 1/2) / (2 pi): the normalized int |1/(1 - e^{it})|^{1/2}.
inline double cauchy_half_moment() {
    return std::sqrt(2.0) * std::beta(0.25, 0.5) / two_pi;
}

/// Normalized int |1/(1 - e^{it})|^r = Gamma(1/2 - r/2) / (2^r sqrt(pi) Gamma(1 - r/2)).
inline double cauchy_moment(double r) {
    require(r > 0 && r < 1, errc::out_of_range, "need 0 < r < 1");
    return std::tgamma(0.5 - r / 2) / (std::pow(2.0, r) * std::sqrt(std::numbers::pi) * std::tgamma(1 - r / 2));
}

struct mso_result {
    double max_modulus = 0;
    double bound = 0;
    bool pass = false;
};

/// max over a grid of |z| = R (pole directions included) of |f(z)| against
/// M (1 - R)^{-1/r}.
inline mso_result mso_check(const pole_sum& f, double r, double R, double M, std::size_t grid = 4096) {
    require(R > 0 && R < 1, errc::out_of_range, "radius must lie in (0,1)");
    require(r > 0 && r <= 1, errc::out_of_range, "exponent r must lie in (0,1]");
    mso_result out;
    const pole_sum m = f.merged();
    for (std::size_t k = 0; k < grid; ++k)
        out.max_modulus = std::max(out.max_modulus, std::abs(m.disc_polar(R, fixed::fraction(big_int(k), big_int(grid)), 0.0)));
    for (const auto& p : m.poles) out.max_modulus = std::max(out.max_modulus, std::abs(m.disc_polar(R, p.pos, 0.0)));
    out.bound = M * std::pow(1 - R, -1 / r);
    out.pass = out.max_modulus <= out.bound;
    return out;
}

/// int |f - P_K|^r (Taylor) or int |f - sigma_K|^r (Cesaro) on the circle.
/// Taylor remainders of a pole have |f - P_K| = |f| for every K; Cesaro
/// means converge. The Cesaro mean of degree K equals (1/(K+1)) sum_{m<=K} P_m.
inline quasi_norm_result partial_sum_distance(const pole_sum& f, std::size_t K, double r,
                                              partial_sum_kind kind = partial_sum_kind::cesaro,
                                              const integration_options& opt = {}) {
    if (!f.has_poles()) {
        bool zero = true;
        for (std::size_t m = 0; m < f.poly.size(); ++m)
            if (f.poly[m] != 0.0 && (m > K || (kind == partial_sum_kind::cesaro && m > 0))) zero = false;
        if (zero) return {0.0, 0.0, r, measure_kind::normalized};
    }
    return lr_quasinorm_singular(remainder_function(f, K, kind), r, opt);
}

// ---------------------------------------------------------------------------
// Mean ergodic theorem: M_N f -> a_0 in H^r(T).
// ---------------------------------------------------------------------------

/// The constant term; this is phi(f) = lim_R (1/2pi) int f(R e^{it}) dt.
inline complex_t dual_functional_a0(const pole_sum& f) { return f.a0(); }

/// phi((I - T) g) = a_0(g) - a_0(T g). T keeps a_0 and every pole weight, so
/// the difference is formed from identical sums and is exactly 0.
inline complex_t dual_functional_a0(const pole_sum& g, const rotation_number& alpha) {
    return g.a0() - g.koopman(alpha, 1).a0();
}

/// (1/M) sum_k f(R e^{2 pi i k/M}) = a_0 + sum_{j>=1} a_{jM} R^{jM}.
inline complex_t dual_functional_numeric(const pole_sum& f, double R = 0.5, std::size_t M = 256) {
    require(R > 0 && R < 1, errc::out_of_range, "radius must lie in (0,1)");
    complex_t s(0);
    for (std::size_t k = 0; k < M; ++k) s += f.disc_polar(R, fixed::fraction(big_int(k), big_int(M)), 0.0);
    return s / static_cast<double>(M);
}

struct hardy_mean_entry {
    std::uint64_t N = 0;
    quasi_norm_result result; // int |M_N f - a_0|^r
    std::size_t declared = 0;  // singular points declared
    bool fast = false;         // fast boundary evaluator in use
};

struct hardy_mean_result {
    complex_t a0{0};
    std::vector<hardy_mean_entry> entries;
    bool decays = false; // last entry below the first
};

inline constexpr std::size_t default_singularity_cap = 20'000;

inline hardy_mean_result hardy_mean_theorem(const pole_sum& f, const rotation_number& alpha, double r,
                                            const std::vector<std::uint64_t>& N_list, const integration_options& opt = {},
                                            std::size_t singularity_cap = default_singularity_cap) {
    require(r > 0 && r <= 1, errc::out_of_range, "exponent r must lie in (0,1]");
    for (std::size_t i = 0; i < N_list.size(); ++i)
        require(N_list[i] >= 1 && (i == 0 || N_list[i] > N_list[i - 1]), errc::out_of_range,
                "N_list must be positive and increasing");
    hardy_mean_result out;
    out.a0 = dual_functional_a0(f);
    for (const auto N : N_list) {
        require(f.poles.size() * N <= singularity_cap, errc::size_limit,
                "M_" + std::to_string(N) + " declares " + std::to_string(f.poles.size() * N) +
                    " singular points, above the cap " + std::to_string(singularity_cap));
        pole_sum m = f.birkhoff_average(alpha, N);
        if (m.poly.empty()) m.poly.push_back(0.0);
        m.poly[0] -= out.a0;
        hardy_mean_entry e;
        e.N = N;
        if (!m.has_poles()) {
            // A trigonometric polynomial: |.|^r has no singularities.
            e.result = lr_quasinorm_singular(boundary_function(m), r, opt);
        } else {
            const auto bf = boundary_function(m);
            e.declared = bf.anchors.size();
            e.fast = m.poles.size() > cot_sum_evaluator::direct_limit;
            e.result = lr_quasinorm_singular(bf, r, opt);
        }
        out.entries.push_back(e);
    }
    if (!out.entries.empty()) out.decays = out.entries.back().result.value < out.entries.front().result.value;
    return out;
}

/// |a_1|^r |sin(N pi alpha) / (N sin(pi alpha))|^r: the profile of a_0 + a_1 z.
inline double dirichlet_profile(complex_t a1, const rotation_number& alpha, std::uint64_t N, double r) {
    const double num = std::sin(std::numbers::pi * fixed::centered(fixed::times(alpha.value(), N)));
    const double den = static_cast<double>(N) * std::sin(std::numbers::pi * fixed::centered(alpha.value()));
    return std::pow(std::abs(a1), r) * std::pow(std::abs(num / den), r);
}

// ---------------------------------------------------------------------------
// (gh) for a coboundary of 1/(1-z): (1/N) sum_{n=1}^N sum_{k<n} T^k (I-T) g
// telescopes to g - T M_N g.
// ---------------------------------------------------------------------------

struct hardy_gh_entry {
    std::uint64_t N = 0;
    quasi_norm_result value; // int |g - T M_N g|^r
    quasi_norm_result mean;  // int |M_N g|^r
};

struct hardy_gh_result {
    quasi_norm_result g_norm; // int |g|^r
    std::vector<hardy_gh_entry> entries;
    double bound = 0; // int |g|^r + max_N int |M_N g|^r
    bool within = true;
};

inline hardy_gh_result hardy_gh(const pole_sum& g, const rotation_number& alpha, double r,
                                const std::vector<std::uint64_t>& N_list, const integration_options& opt = {}) {
    hardy_gh_result out;
    out.g_norm = boundary_quasinorm(g, r, opt);
    double max_mean = 0;
    for (const auto N : N_list) {
        hardy_gh_entry e;
        e.N = N;
        const pole_sum m = g.birkhoff_average(alpha, N);
        e.mean = boundary_quasinorm(m, r, opt);
        e.value = boundary_quasinorm(g - m.koopman(alpha, 1), r, opt);
        max_mean = std::max(max_mean, e.mean.value + e.mean.abs_error);
        out.entries.push_back(e);
    }
    out.bound = out.g_norm.value + out.g_norm.abs_error + max_mean;
    for (const auto& e : out.entries)
        if (e.value.value - e.value.abs_error > out.bound) out.within = false;
    return out;
}

} // namespace ergolab
