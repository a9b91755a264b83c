#pragma once

// Truncated conjugate functions: for real g with Fourier coefficients
// ghat(k), h_K = g_K + i g~_K = ghat(0) + 2 sum_{0<k<=K} ghat(k) e^{2 pi i k t}
// is analytic, and h_K^2 carries |h_K|^2 >= g_K^2 at every point.

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <memory>
#include <numbers>
#include <vector>

#include "ergolab/core/error.hpp"
#include "ergolab/core/numeric.hpp"
#include "ergolab/diophantine.hpp"
#include "ergolab/hardy/pole_sum.hpp"
#include "ergolab/step_function.hpp"

namespace ergolab {

namespace detail {

struct fftw_deleter {
    void operator()(fftw_complex* p) const { fftw_free(p); }
};
using fftw_buffer = std::unique_ptr<fftw_complex[], fftw_deleter>;

inline fftw_buffer fftw_alloc(std::size_t n) {
    return fftw_buffer(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n)));
}

/// v_j = sum_k c_k e^{sign 2 pi i jk/M} for the first c.size() coefficients.
inline std::vector<complex_t> dft(const std::vector<complex_t>& c, std::size_t M, int sign) {
    auto in = fftw_alloc(M);
    auto out = fftw_alloc(M);
    for (std::size_t j = 0; j < M; ++j) {
        const complex_t v = j < c.size() ? c[j] : complex_t(0);
        in[j][0] = v.real();
        in[j][1] = v.imag();
    }
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(M), in.get(), out.get(), sign > 0 ? FFTW_BACKWARD : FFTW_FORWARD,
                                      FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
    std::vector<complex_t> v(M);
    for (std::size_t j = 0; j < M; ++j) v[j] = {out[j][0], out[j][1]};
    return v;
}

inline std::size_t pow2_at_least(std::size_t n) {
    std::size_t m = 1;
    while (m < n) m <<= 1;
    return m;
}

} // namespace detail

/// ghat(k) for k = 0..K in closed form from the jumps J_i at b_i:
/// ghat(k) = sum_i J_i e^{-2 pi i k b_i} / (2 pi i k).
inline std::vector<complex_t> step_fourier(const step_function& g, std::size_t K) {
    std::vector<complex_t> c(K + 1);
    c[0] = to_double(g.integral());
    const std::size_t n = g.size();
    std::vector<double> jump(n);
    for (std::size_t i = 0; i < n; ++i) jump[i] = to_double(g.value(i) - g.value((i + n - 1) % n));
    for (std::size_t k = 1; k <= K; ++k) {
        complex_t s(0);
        for (std::size_t i = 0; i < n; ++i)
            if (jump[i] != 0) s += jump[i] * std::conj(cis_multiple(g.breakpoint(i), 0.0, k));
        c[k] = s / complex_t(0, two_pi * static_cast<double>(k));
    }
    return c;
}

struct parseval_check_result {
    double partial = 0;    // sum_{|k|<=K} |ghat(k)|^2
    double exact = 0;      // int g^2
    double tail_bound = 0; // V^2 / (2 pi^2 K), V the total jump
    bool pass = false;     // exact - tail_bound <= partial <= exact, with rounding slack
};

inline parseval_check_result parseval_check(const step_function& g, std::size_t K) {
    require(K >= 1, errc::out_of_range, "need K >= 1");
    const auto c = step_fourier(g, K);
    parseval_check_result out;
    out.partial = std::norm(c[0]);
    for (std::size_t k = 1; k <= K; ++k) out.partial += 2 * std::norm(c[k]);
    real_t e = 0, V = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        e += g.value(i) * g.value(i) * g.length_real(i);
        V += real_abs(g.value(i) - g.value((i + g.size() - 1) % g.size()));
    }
    out.exact = to_double(e);
    out.tail_bound = to_double(V * V) / (2 * std::numbers::pi * std::numbers::pi * static_cast<double>(K));
    const double slack = 1e-12 * (1 + out.exact);
    out.pass = out.partial <= out.exact + slack && out.partial >= out.exact - out.tail_bound - slack;
    return out;
}

struct conjugate_result {
    std::size_t K = 0;
    std::vector<complex_t> ghat; // ghat(0..K)
    std::vector<complex_t> h;    // coefficients of h_K
    std::vector<complex_t> h2;   // coefficients of h_K^2, degree 2K
    double r = 0;
    double moment = 0;       // int |h_K^2|^r
    double moment_error = 0; // |trapezoid(M) - trapezoid(2M)|
    std::size_t grid = 0;

    complex_t h_at(double t) const {
        const complex_t z = cis_turns(t - std::floor(t));
        complex_t s(0);
        for (std::size_t k = h.size(); k-- > 0;) s = s * z + h[k];
        return s;
    }
    double g_at(double t) const { return h_at(t).real(); }
    double conj_at(double t) const { return h_at(t).imag(); }
};

namespace detail {

inline double trapezoid_power(const std::vector<complex_t>& h, std::size_t M, double r) {
    const auto v = dft(h, M, +1);
    double s = 0;
    for (const auto& x : v) s += std::pow(std::norm(x), r); // |h|^{2r} = |h^2|^r
    return s / static_cast<double>(M);
}

} // namespace detail

/// From the Fourier coefficients ghat(0..K) of a real function.
inline conjugate_result conjugate_truncation(std::vector<complex_t> ghat, double r) {
    require(!ghat.empty(), errc::out_of_range, "no coefficients");
    require(r > 0 && r <= 1, errc::out_of_range, "exponent r must lie in (0,1]");
    require(std::abs(ghat[0].imag()) <= 1e-14 * (1 + std::abs(ghat[0])), errc::degenerate_input,
            "ghat(0) must be real for a real function");
    conjugate_result out;
    out.K = ghat.size() - 1;
    out.r = r;
    out.ghat = std::move(ghat);
    out.h.resize(out.K + 1);
    out.h[0] = out.ghat[0].real();
    for (std::size_t k = 1; k <= out.K; ++k) out.h[k] = 2.0 * out.ghat[k];
    const std::size_t M = detail::pow2_at_least(std::max<std::size_t>(8 * (out.K + 1), 65536));
    out.grid = M;
    // h^2 on the grid, back to coefficients (M > 2K, no aliasing).
    auto v = detail::dft(out.h, M, +1);
    for (auto& x : v) x *= x;
    const auto c = detail::dft(v, M, -1);
    out.h2.assign(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(2 * out.K + 1));
    for (auto& x : out.h2) x /= static_cast<double>(M);
    const double a = detail::trapezoid_power(out.h, M, r);
    const double b = detail::trapezoid_power(out.h, 2 * M, r);
    out.moment = b;
    out.moment_error = std::abs(a - b);
    return out;
}

/// From a step function g >= 1 (shift by 1 beforehand if needed).
inline conjugate_result conjugate_truncation(const step_function& g, std::size_t K, double r) {
    real_t lo = g.value(0);
    for (std::size_t i = 0; i < g.size(); ++i) lo = std::min(lo, g.value(i));
    require(lo >= 1, errc::degenerate_input, "g must be bounded below by 1 (min " + format_g17(to_double(lo)) + ")");
    return conjugate_truncation(step_fourier(g, K), r);
}

struct transfer_row {
    std::size_t n = 0;
    std::uint64_t k = 0;    // return time of x into [0, 2/q_n]
    double g_value = 0;     // g(theta^k x), exact step value
    double g_trunc = 0;     // g_K(theta^k x)
    double h2_abs = 0;      // |h_K^2(theta^k x)|
    double lhs = 0;         // |h_K^2| / k
    double rhs = 0;         // g_K^2 / k
    double growth = 0;      // g^2 / k from the exact g
    bool pass = false;      // lhs >= rhs
};

/// |h_K^2(theta^k x)|/k >= g_K(theta^k x)^2/k at the return times k into
/// [0, 2/q_n] (next return when x is already there).
inline std::vector<transfer_row> blowup_transfer(const conjugate_result& c, const step_function& g,
                                                 const rotation_number& alpha, const circle_point& x,
                                                 const std::vector<std::size_t>& n_list) {
    std::vector<transfer_row> rows;
    for (const auto n : n_list) {
        transfer_row row;
        row.n = n;
        std::uint64_t k = return_time(alpha, x, n);
        if (k == 0) k = forward_return_time(alpha, x, n);
        row.k = k;
        const circle_point y = alpha.orbit(x, k);
        row.g_value = to_double(g(y.value));
        const complex_t h = c.h_at(fixed::to_double(y.value));
        row.g_trunc = h.real();
        row.h2_abs = std::norm(h);
        const double kd = static_cast<double>(k);
        row.lhs = row.h2_abs / kd;
        row.rhs = row.g_trunc * row.g_trunc / kd;
        row.growth = row.g_value * row.g_value / kd;
        row.pass = row.lhs >= row.rhs;
        rows.push_back(row);
    }
    return rows;
}

} // namespace ergolab
