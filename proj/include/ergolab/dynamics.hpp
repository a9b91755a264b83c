#pragma once

// Circle rotation and the binary adding machine, with exact Birkhoff sums of
// step functions.
//
// Koopman convention: (T f)(t) = f(t + alpha), so T^k moves each breakpoint
// of f by -k alpha. Positions use the 256-bit angle; the true orbit differs
// by at most k * err ulps, far below the binary128 rounding of piece values.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "ergolab/core/error.hpp"
#include "ergolab/core/fixed.hpp"
#include "ergolab/core/numeric.hpp"
#include "ergolab/diophantine.hpp"
#include "ergolab/step_function.hpp"

namespace ergolab {

inline constexpr std::size_t default_piece_cap = 100'000'000;

inline circle_point rotate(const rotation_number& alpha, const circle_point& x, std::uint64_t k) {
    return alpha.orbit(x, k);
}

/// T^k f for the rotation by alpha.
template <class V>
basic_step_function<V> koopman(const basic_step_function<V>& f, const rotation_number& alpha, std::uint64_t k = 1) {
    return f.shifted(fixed::times(alpha.value(), k));
}

/// Running weighted Birkhoff sum S = sum_k w_k T^k f kept as a sorted list of
/// jump events plus the value at 0. Jumps at equal positions are combined and
/// zero jumps dropped, so a coboundary (I - T)g stays as small as g.
template <class V>
class birkhoff_accumulator {
public:
    struct event {
        fixed_t pos;
        V jump;
    };

    birkhoff_accumulator(basic_step_function<V> f, const rotation_number& alpha,
                         std::size_t piece_cap = default_piece_cap)
        : f_(std::move(f)), step_(alpha.value()), cap_(piece_cap) {
        const std::size_t m = f_.size();
        jumps_.resize(m);
        for (std::size_t i = 0; i < m; ++i) jumps_[i] = f_.value(i) - f_.value(i == 0 ? m - 1 : i - 1);
    }

    /// Adds weight * T^n f, where n is the number of copies added so far.
    void add_copy(const V& weight = V(1)) {
        at_zero_ += weight * f_(shift_);
        scratch_.clear();
        if (f_.size() > 1) {
            for (std::size_t i = 0; i < f_.size(); ++i) {
                const fixed_t pos = f_.breakpoint(i) - shift_;
                if (pos == 0) continue;
                scratch_.push_back({pos, V(weight * jumps_[i])});
            }
            std::sort(scratch_.begin(), scratch_.end(), [](const event& a, const event& b) { return a.pos < b.pos; });
            merged_.clear();
            merged_.reserve(events_.size() + scratch_.size());
            std::merge(events_.begin(), events_.end(), scratch_.begin(), scratch_.end(), std::back_inserter(merged_),
                       [](const event& a, const event& b) { return a.pos < b.pos; });
            events_.clear();
            for (auto& e : merged_) {
                if (!events_.empty() && events_.back().pos == e.pos) {
                    events_.back().jump += e.jump;
                    if (events_.back().jump == V(0)) events_.pop_back();
                } else if (e.jump != V(0)) {
                    events_.push_back(e);
                }
            }
            require(events_.size() + 1 <= cap_, errc::size_limit,
                    "Birkhoff sum exceeds " + std::to_string(cap_) + " pieces");
        }
        shift_ += step_;
        ++count_;
    }

    std::size_t count() const { return count_; }
    std::size_t pieces() const { return events_.size() + 1; }
    const V& value_at_zero() const { return at_zero_; }

    /// visit(value, length_in_ulps) for each piece of S in order.
    template <class Visit>
    void for_each_piece(Visit&& visit) const {
        V v = at_zero_;
        wide_t prev = 0;
        for (const auto& e : events_) {
            visit(v, wide_t(e.pos) - prev);
            prev = wide_t(e.pos);
            v += e.jump;
        }
        visit(v, (wide_t(1) << fixed_bits) - prev);
    }

    /// S as a canonical step function, each value scaled by `scale`.
    basic_step_function<V> sum(const V& scale = V(1)) const {
        std::vector<fixed_t> br{fixed_t(0)};
        std::vector<V> vals{V(at_zero_ * scale)};
        V v = at_zero_;
        for (const auto& e : events_) {
            v += e.jump;
            br.push_back(e.pos);
            vals.push_back(V(v * scale));
        }
        return basic_step_function<V>::from_pieces(std::move(br), std::move(vals));
    }

private:
    basic_step_function<V> f_;
    std::vector<V> jumps_;
    std::vector<event> events_, scratch_, merged_;
    V at_zero_{0};
    fixed_t shift_{0};
    fixed_t step_;
    std::size_t count_ = 0;
    std::size_t cap_;
};

/// The exact step function M_n f = (1/n) sum_{k<n} T^k f.
template <class V>
basic_step_function<V> birkhoff_step_average(const basic_step_function<V>& f, const rotation_number& alpha,
                                             std::uint64_t n, std::size_t piece_cap = default_piece_cap) {
    require(n >= 1, errc::out_of_range, "averaging length must be positive");
    birkhoff_accumulator<V> acc(f, alpha, piece_cap);
    for (std::uint64_t k = 0; k < n; ++k) acc.add_copy();
    return acc.sum(from_real<V>(real_t(1) / real_t(n)));
}

/// sum over pieces of |value - c|^r * length, with lengths grouped by value.
template <class V, class PieceSource>
real_t quasinorm_of_pieces(PieceSource&& source, double r, const V& c = V(0), const V& scale = V(1)) {
    std::map<V, wide_t, detail::value_less<V>> groups;
    source([&](const V& v, const wide_t& len) { groups[v] += len; });
    real_t s = 0;
    for (const auto& [v, len] : groups) {
        const real_t a = real_abs(V(v * scale - c));
        if (a == 0) continue;
        s += real_pow(a, r) * wide_to_real(len);
    }
    return s;
}

template <class V>
struct telescoping_result {
    basic_step_function<V> g;  // f - M_n f
    real_t residual_check = 0; // d_r(f, g) - int |M_n f|^r
};

template <class V>
telescoping_result<V> telescoping_decomposition(const basic_step_function<V>& f, const rotation_number& alpha,
                                                std::uint64_t n, double r) {
    const auto m = birkhoff_step_average(f, alpha, n);
    telescoping_result<V> out{f - m, 0};
    const auto back = f - out.g;
    const auto pieces = [](const basic_step_function<V>& h) {
        return [&h](auto&& visit) {
            for (std::size_t i = 0; i < h.size(); ++i) visit(h.value(i), h.length(i));
        };
    };
    out.residual_check = quasinorm_of_pieces<V>(pieces(back), r) - quasinorm_of_pieces<V>(pieces(m), r);
    return out;
}

/// n_j = floor(rho^j) for j = 1..J, exact for a rational rho.
inline std::vector<big_int> subseq_indices(const big_rational& rho, std::size_t J) {
    require(rho > 1, errc::out_of_range, "rho must exceed 1");
    std::vector<big_int> out;
    out.reserve(J);
    big_rational p(1);
    for (std::size_t j = 1; j <= J; ++j) {
        p *= rho;
        out.push_back(floor(p));
    }
    return out;
}

/// rho read as the exact binary value of the double.
inline std::vector<big_int> subseq_indices(double rho, std::size_t J) { return subseq_indices(big_rational(rho), J); }

// ---------------------------------------------------------------------------
// Adding machine. A point of [0,1) with binary digits d_1 d_2 ... is read as
// the 2-adic integer sum d_i 2^{i-1}; theta adds 1 with carry to the right.
// The cylinder [k/2^n, (k+1)/2^n) holds the points whose first n digits form
// v = rev_n(k), and theta maps it onto the cylinder of v + 1 mod 2^n.
// ---------------------------------------------------------------------------

namespace odometer {

inline std::uint64_t reverse_bits(std::uint64_t v, unsigned n) {
    std::uint64_t out = 0;
    for (unsigned i = 0; i < n; ++i) out |= ((v >> i) & 1u) << (n - 1 - i);
    return out;
}

/// Cylinder index k at level n that theta^j maps the cylinder k0 onto.
inline std::uint64_t apply(std::uint64_t k0, std::uint64_t j, unsigned n) {
    const std::uint64_t mask = n == 64 ? ~0ull : ((1ull << n) - 1);
    return reverse_bits((reverse_bits(k0, n) + j) & mask, n);
}

/// theta on a fixed-point coordinate.
inline fixed_t theta(const fixed_t& x) {
    // Leading ones flip to zero and the first zero digit becomes one.
    unsigned t = 0;
    while (t < fixed_bits && bit_test(x, fixed_bits - 1 - t)) ++t;
    if (t == fixed_bits) return 0;
    const fixed_t low_mask = (fixed_t(1) << (fixed_bits - 1 - t)) - 1;
    return fixed_t((x & low_mask) | (fixed_t(1) << (fixed_bits - 1 - t)));
}

/// Number of leading zero digits of the 2-adic value (trailing zeros of j).
inline unsigned trailing_zeros(std::uint64_t j) {
    unsigned t = 0;
    while (j != 0 && (j & 1u) == 0) {
        j >>= 1;
        ++t;
    }
    return t;
}

} // namespace odometer

struct dyadic_interval {
    std::uint64_t k = 0; // [k/2^n, (k+1)/2^n)
    unsigned n = 0;

    big_rational lo() const { return big_rational(big_int(k), big_int(1) << n); }
    big_rational hi() const { return big_rational(big_int(k + 1), big_int(1) << n); }
    big_rational length() const { return big_rational(big_int(1), big_int(1) << n); }
};

/// Rokhlin tower of the adding machine: base B = [0, 2^-n), levels
/// theta^{-j} B for j = 0..2^n - 1, covering the circle with no residual.
struct tower_spec {
    unsigned n = 0;
    dyadic_interval base;
    std::uint64_t height = 0;
    big_rational residual{0};

    /// Level j, the set theta^{-j} B.
    dyadic_interval level(std::uint64_t j) const {
        require(j < height, errc::out_of_range, "tower level beyond height");
        const std::uint64_t mask = height - 1;
        return {odometer::reverse_bits((height - j) & mask, n), n};
    }

    /// Pairwise disjointness and full measure, checked exactly.
    bool verify_partition() const {
        require(n <= 24, errc::level_too_deep, "partition check limited to n <= 24");
        std::vector<bool> seen(height, false);
        big_rational total(0);
        for (std::uint64_t j = 0; j < height; ++j) {
            const auto lv = level(j);
            if (seen[lv.k]) return false;
            seen[lv.k] = true;
            // theta^j maps the level onto the base.
            if (odometer::apply(lv.k, j, n) != 0) return false;
        }
        total = big_rational(big_int(height), big_int(1) << n);
        return total + residual == 1 && base.length() * big_rational(big_int(height)) + residual == 1;
    }
};

inline tower_spec odometer_tower(unsigned n) {
    require(n >= 1, errc::out_of_range, "tower level must be at least 1");
    require(n <= 30, errc::level_too_deep, "tower level " + std::to_string(n) + " exceeds 30");
    tower_spec t;
    t.n = n;
    t.base = {0, n};
    t.height = 1ull << n;
    return t;
}

} // namespace ergolab
