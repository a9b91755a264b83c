#pragma once

// Truncated power series on the disc, with the closed form (when known)
// supplying the exact tail.

#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "ergolab/core/error.hpp"
#include "ergolab/core/numeric.hpp"
#include "ergolab/hardy/pole_sum.hpp"

namespace ergolab {

struct power_series {
    std::vector<complex_t> coeffs; // a_0 .. a_K
    std::optional<pole_sum> closed;
    std::string name;

    std::size_t degree() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }

    static power_series polynomial(std::vector<complex_t> a, std::string name = "polynomial") {
        power_series s;
        s.coeffs = std::move(a);
        s.closed = pole_sum::polynomial(s.coeffs, name);
        s.name = std::move(name);
        return s;
    }
    /// The first K + 1 Taylor coefficients of f, with f kept as the tail rule.
    static power_series from(const pole_sum& f, std::size_t K) {
        power_series s;
        for (std::size_t k = 0; k <= K; ++k) s.coeffs.push_back(f.coefficient(k));
        s.closed = f;
        s.name = f.name;
        return s;
    }
    static power_series geometric(std::size_t K = 64) { return from(pole_sum::cauchy(), K); }

    /// sum_{k > K} |a_k| R^k; infinite when no closed form is attached.
    double tail_bound(double R) const {
        if (!closed) return std::numeric_limits<double>::infinity();
        return closed->tail_bound(R, degree());
    }

    complex_t horner(complex_t z) const {
        complex_t s(0);
        for (std::size_t m = coeffs.size(); m-- > 0;) s = s * z + coeffs[m];
        return s;
    }
};

struct disc_value {
    complex_t value;
    double error = 0;      // rounding bound on value
    complex_t truncated;   // Horner sum alone
    double tail_bound = 0; // bound on |value - truncated|
};

inline constexpr double disc_guard = 1e-6;

/// Horner on a_0..a_K plus the closed-form tail
/// sum_j c_j (z w_j)^{K+1}/(1 - z w_j) + (polynomial terms above K).
inline disc_value eval_disc(const power_series& f, complex_t z) {
    require(std::abs(z) <= 1 - disc_guard, errc::too_close_to_boundary,
            "|z| = " + format_g17(std::abs(z)) + " is inside the guard band 1 - 1e-6");
    disc_value out;
    out.truncated = f.horner(z);
    const double R = std::abs(z);
    double mag = 0;
    for (std::size_t m = f.coeffs.size(); m-- > 0;) mag = mag * R + std::abs(f.coeffs[m]);
    complex_t tail(0);
    if (f.closed) {
        const std::size_t K = f.degree();
        const auto& g = *f.closed;
        for (std::size_t m = K + 1; m < g.poly.size(); ++m) tail += g.poly[m] * std::pow(z, static_cast<double>(m));
        for (const auto& p : g.poles) {
            const complex_t zw = z * cis_multiple(fixed_t(fixed_t(0) - p.pos), 0.0, 1);
            tail += p.c * std::pow(zw, static_cast<double>(K + 1)) / (1.0 - zw);
        }
        out.tail_bound = f.tail_bound(R);
    }
    out.value = out.truncated + tail;
    const double eps = std::numeric_limits<double>::epsilon();
    out.error = 4 * eps * static_cast<double>(f.coeffs.size() + 2) * (mag + std::abs(tail));
    return out;
}

} // namespace ergolab
