#pragma once

// The sequence 1/eps_j = floor(1/sqrt(eps_0 ... eps_{j-1})) + 1 and its
// summability against the geometric bound sum eps_0^{j(1-3r)/2}.

#include <cstdint>
#include <string>
#include <vector>

#include "ergolab/core/error.hpp"
#include "ergolab/core/numeric.hpp"

namespace ergolab {

/// eps_0 = num/den and eps_j = 1/m_j for j >= 1. The running product of the
/// m_j roughly squares its bit length every two steps, so the recursion is
/// carried exactly until the product exceeds bit_cap bits and then stops;
/// `complete` tells whether all requested terms were produced.
struct epsilon_sequence_result {
    big_rational eps0;
    std::vector<big_int> inverse; // m_1, m_2, ...
    std::size_t requested = 0;
    bool complete = false;
    std::string stop_reason;

    std::size_t count() const { return inverse.size() + 1; } // terms 0..count-1
    big_rational eps(std::size_t j) const {
        if (j == 0) return eps0;
        require(j <= inverse.size(), errc::out_of_range, "epsilon index beyond computed range");
        return big_rational(big_int(1), inverse[j - 1]);
    }
    double log2_inverse(std::size_t j) const { return j == 0 ? 0.0 : log2_big(inverse[j - 1]); }
};

inline constexpr std::size_t default_epsilon_bit_cap = std::size_t(1) << 23;

/// Terms eps_0..eps_J (fewer if the bit cap is reached first).
inline epsilon_sequence_result epsilon_sequence(const big_rational& eps0, std::size_t J,
                                                std::size_t bit_cap = default_epsilon_bit_cap) {
    require(eps0 > big_rational(1, 2) && eps0 < 1, errc::out_of_range, "eps_0 must lie in (1/2, 1)");
    epsilon_sequence_result out;
    out.eps0 = eps0;
    out.requested = J;
    const big_int p = numerator(eps0), q = denominator(eps0);
    // prod_{k<j} eps_k = p / (q * M) with M = m_1 ... m_{j-1}.
    big_int M(1);
    for (std::size_t j = 1; j <= J; ++j) {
        if (msb(M) + 1 > bit_cap) {
            out.stop_reason = "product of inverses exceeds " + std::to_string(bit_cap) + " bits at j = " +
                              std::to_string(j);
            return out;
        }
        // floor(sqrt(qM/p)) = isqrt(floor(qM/p))
        const big_int m = isqrt(floor_div(q * M, p)) + 1;
        out.inverse.push_back(m);
        M *= m;
    }
    out.complete = true;
    return out;
}

struct epsilon_check {
    std::size_t checked = 0;        // terms j = 1..checked verified
    bool square_below_product = true; // eps_j^2 < prod_{k<j} eps_k
    bool product_geometric = true;    // prod_{k<=j} eps_k <= eps_0^{j+1}
    bool nonincreasing = true;        // eps_{j+1} <= eps_j for j >= 1
    bool strictly_decreasing = true;  // eps_{j+1} < eps_j for j >= 1
    std::size_t first_violation = 0;
};

/// The invariants checked in integer arithmetic.
inline epsilon_check check_epsilon_invariants(const epsilon_sequence_result& s) {
    epsilon_check c;
    const big_int p = numerator(s.eps0), q = denominator(s.eps0);
    big_int M(1), pj(p), qj(q); // pj = p^j, qj = q^j after step j
    for (std::size_t j = 1; j <= s.inverse.size(); ++j) {
        const big_int& m = s.inverse[j - 1];
        // 1/m^2 < p/(q M)  <=>  q M < p m^2
        if (!(q * M < p * m * m)) {
            if (c.square_below_product) c.first_violation = j;
            c.square_below_product = false;
        }
        M *= m;
        // p/(q M) <= p^{j+1}/q^{j+1}  <=>  q^j <= p^j M
        if (!(qj <= pj * M)) {
            if (c.product_geometric && c.square_below_product) c.first_violation = j;
            c.product_geometric = false;
        }
        pj *= p;
        qj *= q;
        if (j >= 2) {
            const big_int& prev = s.inverse[j - 2];
            if (m < prev) c.nonincreasing = false;
            if (!(m > prev)) c.strictly_decreasing = false;
        }
        c.checked = j;
    }
    return c;
}

struct epsilon_summability_row {
    std::size_t j = 0;
    real_t term = 0;    // eps_j^{1-3r}
    real_t partial = 0; // sum_{i<=j} eps_i^{1-3r}
    real_t bound = 0;   // sum_{i<=j} eps_0^{i(1-3r)/2}
    real_t full_bound = 0; // the whole geometric series
    bool termwise_exact = true; // eps_j^2 <= eps_0^j, decided in integers
};

/// Partial sums of eps_j^{1-3r} against the geometric majorant for 0 < r < 1/3.
/// Termwise domination is decided exactly (it is equivalent to
/// eps_j^2 <= eps_0^j); the partial sums themselves are binary128.
inline std::vector<epsilon_summability_row> epsilon_summability(const epsilon_sequence_result& s, double r) {
    require(r > 0 && r < 1.0 / 3.0, errc::out_of_range, "summability needs 0 < r < 1/3");
    const double e = 1 - 3 * r;
    const real_t e0 = to_real(s.eps0);
    const real_t ratio = real_pow(e0, e / 2);
    const real_t full = 1 / (1 - ratio);
    const big_int p = numerator(s.eps0), q = denominator(s.eps0);
    std::vector<epsilon_summability_row> rows;
    real_t partial = 0, bound = 0, geo = 1;
    big_int pj(1), qj(1);
    for (std::size_t j = 0; j < s.count(); ++j) {
        epsilon_summability_row row;
        row.j = j;
        if (j == 0) {
            row.term = real_pow(e0, e);
        } else {
            // eps_j^e = 2^{-e log2 m_j}; m_j may be far beyond binary128 range.
            const big_int& m = s.inverse[j - 1];
            const double lg = log2_big(m);
            row.term = lg * e > 16000 ? real_t(0) : real_pow(real_t(2), -e * lg);
            // 1/m^2 <= p^j/q^j  <=>  q^j <= p^j m^2
            row.termwise_exact = qj <= pj * m * m;
        }
        partial += row.term;
        bound += geo;
        row.partial = partial;
        row.bound = bound;
        row.full_bound = full;
        rows.push_back(row);
        geo *= ratio;
        pj *= p;
        qj *= q;
    }
    return rows;
}

} // namespace ergolab
