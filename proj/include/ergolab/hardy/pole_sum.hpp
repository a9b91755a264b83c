#pragma once

// f(z) = P(z) + sum_j c_j / (1 - z e^{-2 pi i p_j}): polynomials, the Cauchy
// kernel and everything the Koopman operator makes of them. On the circle
// each pole term is c_j/2 + (i c_j/2) cot(pi (t - p_j)).

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include "ergolab/core/error.hpp"
#include "ergolab/core/fixed.hpp"
#include "ergolab/core/numeric.hpp"
#include "ergolab/core/parallel.hpp"
#include "ergolab/diophantine.hpp"
#include "ergolab/singular.hpp"

namespace ergolab {

/// e^{2 pi i turns}.
inline complex_t cis_turns(double turns) { return std::polar(1.0, two_pi * turns); }

/// e^{2 pi i m t} for t = base + offset, reduced in fixed point first.
inline complex_t cis_multiple(const fixed_t& base, double offset, std::uint64_t m) {
    return cis_turns(fixed::centered(fixed::times(base, m)) + static_cast<double>(m) * offset);
}

struct pole_term {
    fixed_t pos{0};
    complex_t c{0};
};

enum class partial_sum_kind { taylor, cesaro };

class cot_sum_evaluator;

class pole_sum {
public:
    std::vector<complex_t> poly; // coefficients of z^0, z^1, ...
    std::vector<pole_term> poles;
    std::string name;

    static pole_sum polynomial(std::vector<complex_t> coeffs, std::string name = "polynomial") {
        pole_sum f;
        f.poly = std::move(coeffs);
        f.name = std::move(name);
        return f;
    }
    static pole_sum constant(complex_t c) { return polynomial({c}, "constant"); }
    /// 1/(1 - z e^{-2 pi i p}).
    static pole_sum cauchy(const fixed_t& p = fixed_t(0), complex_t c = 1.0) {
        pole_sum f;
        f.poles.push_back({p, c});
        f.name = "1/(1-z)";
        return f;
    }

    bool has_poles() const { return !poles.empty(); }

    complex_t a0() const {
        complex_t s = poly.empty() ? complex_t(0) : poly[0];
        for (const auto& p : poles) s += p.c;
        return s;
    }

    /// Taylor coefficient a_k.
    complex_t coefficient(std::size_t k) const {
        complex_t s = k < poly.size() ? poly[k] : complex_t(0);
        for (const auto& p : poles) s += p.c * cis_multiple(fixed_t(fixed_t(0) - p.pos), 0.0, k);
        return s;
    }

    /// sum_{k > K} |a_k| R^k, bounded termwise.
    double tail_bound(double R, std::size_t K) const {
        require(R >= 0 && R < 1, errc::out_of_range, "radius must lie in [0,1)");
        double s = 0;
        for (std::size_t m = K + 1; m < poly.size(); ++m) s += std::abs(poly[m]) * std::pow(R, static_cast<double>(m));
        double cs = 0;
        for (const auto& p : poles) cs += std::abs(p.c);
        return s + cs * std::pow(R, static_cast<double>(K + 1)) / (1 - R);
    }

    complex_t poly_at(complex_t z) const {
        complex_t s(0);
        for (std::size_t m = poly.size(); m-- > 0;) s = s * z + poly[m];
        return s;
    }

    /// Value at z = R e^{2 pi i (base + offset)}, with 1 - w formed as
    /// (1-R) + 2R sin^2(pi u) - i R sin(2 pi u) so that R near 1 and t near a
    /// pole keep full relative accuracy.
    complex_t disc_polar(double R, const fixed_t& base, double offset) const {
        complex_t s(0);
        if (!poly.empty()) {
            const complex_t z = R * cis_turns(fixed::centered(base) + offset);
            s = poly_at(z);
        }
        for (const auto& p : poles) {
            const double u = fixed::centered(fixed_t(base - p.pos)) + offset;
            const double sn = std::sin(std::numbers::pi * u);
            const complex_t one_minus_w((1 - R) + 2 * R * sn * sn, -R * std::sin(two_pi * u));
            s += p.c / one_minus_w;
        }
        return s;
    }

    complex_t disc(complex_t z) const {
        require(std::abs(z) < 1, errc::out_of_range, "point outside the open disc");
        complex_t s = poly_at(z);
        for (const auto& p : poles) s += p.c / (1.0 - z * cis_multiple(fixed_t(fixed_t(0) - p.pos), 0.0, 1));
        return s;
    }

    /// Boundary value at t = base + offset by direct summation.
    complex_t boundary(const fixed_t& base, double offset) const {
        complex_t s(0);
        for (std::size_t m = 0; m < poly.size(); ++m)
            if (poly[m] != 0.0) s += poly[m] * cis_multiple(base, offset, m);
        for (const auto& p : poles) {
            const double u = fixed::centered(fixed_t(base - p.pos)) + offset;
            s += p.c * complex_t(0.5, 0.5 / std::tan(std::numbers::pi * u));
        }
        return s;
    }

    /// (T^k f)(t) = f(t + k alpha): poles move to p - k alpha and a_m picks up
    /// e^{2 pi i m k alpha}.
    pole_sum koopman(const rotation_number& alpha, std::uint64_t k = 1) const {
        pole_sum out;
        out.name = "T^" + std::to_string(k) + " " + name;
        const fixed_t shift = fixed::times(alpha.value(), k);
        out.poly = poly;
        for (std::size_t m = 1; m < poly.size(); ++m) out.poly[m] *= cis_multiple(shift, 0.0, m);
        out.poles = poles;
        for (auto& p : out.poles) p.pos -= shift;
        return out;
    }

    pole_sum operator+(const pole_sum& g) const {
        pole_sum out = *this;
        if (out.poly.size() < g.poly.size()) out.poly.resize(g.poly.size(), 0.0);
        for (std::size_t m = 0; m < g.poly.size(); ++m) out.poly[m] += g.poly[m];
        out.poles.insert(out.poles.end(), g.poles.begin(), g.poles.end());
        out.name = name + " + " + g.name;
        return out;
    }
    pole_sum operator*(complex_t c) const {
        pole_sum out = *this;
        for (auto& a : out.poly) a *= c;
        for (auto& p : out.poles) p.c *= c;
        return out;
    }
    pole_sum operator-(const pole_sum& g) const {
        pole_sum out = *this + g * complex_t(-1);
        out.name = name + " - " + g.name;
        return out;
    }

    /// Poles at equal positions combined, in increasing position order.
    /// Exactly cancelling pairs vanish.
    pole_sum merged() const {
        pole_sum out = *this;
        std::sort(out.poles.begin(), out.poles.end(), [](const auto& a, const auto& b) { return a.pos < b.pos; });
        std::vector<pole_term> m;
        for (const auto& p : out.poles) {
            if (!m.empty() && m.back().pos == p.pos) m.back().c += p.c;
            else m.push_back(p);
        }
        m.erase(std::remove_if(m.begin(), m.end(), [](const auto& p) { return p.c == 0.0; }), m.end());
        out.poles = std::move(m);
        return out;
    }

    /// f - T f. Constant terms cancel exactly: poly_0 - poly_0 and c - c.
    pole_sum coboundary(const rotation_number& alpha) const {
        pole_sum out = *this - koopman(alpha, 1);
        out.name = "(I-T)(" + name + ")";
        return out;
    }

    /// M_N f = (1/N) sum_{k<N} T^k f.
    pole_sum birkhoff_average(const rotation_number& alpha, std::uint64_t N) const {
        require(N >= 1, errc::out_of_range, "averaging length must be positive");
        pole_sum out;
        out.name = "M_" + std::to_string(N) + " " + name;
        const double inv = 1.0 / static_cast<double>(N);
        out.poly.assign(poly.size(), 0.0);
        if (!poly.empty()) out.poly[0] = poly[0];
        for (std::size_t m = 1; m < poly.size(); ++m) {
            complex_t d(0);
            const fixed_t step = fixed::times(alpha.value(), m);
            fixed_t ph(0);
            for (std::uint64_t k = 0; k < N; ++k, ph += step) d += cis_turns(fixed::centered(ph));
            out.poly[m] = poly[m] * d * inv;
        }
        out.poles.reserve(poles.size() * N);
        for (const auto& p : poles) {
            fixed_t pos = p.pos;
            for (std::uint64_t k = 0; k < N; ++k, pos -= alpha.value()) out.poles.push_back({pos, p.c * inv});
        }
        return out;
    }

    std::vector<singular_anchor> anchors() const {
        std::vector<singular_anchor> out;
        for (const auto& p : poles) out.push_back({p.pos, 1.0, std::abs(p.c) / two_pi});
        return out;
    }

    /// f - P_K (Taylor) or f - sigma_K (Cesaro means, weights 1 - k/(K+1)) on
    /// the circle.
    complex_t remainder(const fixed_t& base, double offset, std::size_t K, partial_sum_kind kind) const {
        complex_t s(0);
        const double K1 = static_cast<double>(K + 1);
        for (std::size_t m = 0; m < poly.size(); ++m) {
            const double w = m > K ? 1.0 : (kind == partial_sum_kind::taylor ? 0.0 : static_cast<double>(m) / K1);
            if (w != 0 && poly[m] != 0.0) s += w * poly[m] * cis_multiple(base, offset, m);
        }
        for (const auto& p : poles) {
            const fixed_t ub = fixed_t(base - p.pos);
            const double u = fixed::centered(ub) + offset;
            const complex_t kernel(0.5, 0.5 / std::tan(std::numbers::pi * u)); // 1/(1 - w)
            if (kind == partial_sum_kind::taylor) {
                s += p.c * cis_multiple(ub, offset, K + 1) * kernel;
            } else {
                // w (1 - w^{K+1}) / ((K+1)(1-w)^2), with (1 - w^{K+1})/(1 - w)
                // = e^{i pi K u} sin((K+1) pi u)/sin(pi u).
                const double su = std::sin(std::numbers::pi * u);
                const double fe = su == 0 ? 1.0 : std::sin(K1 * std::numbers::pi * u) / (K1 * su);
                s += p.c * cis_multiple(ub, offset, 1) * std::polar(1.0, std::numbers::pi * static_cast<double>(K) * u) * fe * kernel;
            }
        }
        return s;
    }
};

// ---------------------------------------------------------------------------
// Fast boundary evaluation for many poles. The circle is cut at the sorted
// poles; on each gap the poles within a few gap widths are summed directly
// and the rest, smooth there, is a Chebyshev interpolant.
// ---------------------------------------------------------------------------

class cot_sum_evaluator {
public:
    static constexpr std::size_t nodes = 20;
    static constexpr std::size_t direct_limit = 128;

    explicit cot_sum_evaluator(std::vector<pole_term> sorted) : p_(std::move(sorted)) {
        const std::size_t J = p_.size();
        for (std::size_t i = 1; i < J; ++i)
            require(p_[i - 1].pos < p_[i].pos, errc::internal, "poles must be sorted and distinct");
        pd_.resize(J);
        cp_.resize(J);
        sp_.resize(J);
        for (std::size_t j = 0; j < J; ++j) {
            pd_[j] = fixed::to_double(p_[j].pos);
            cp_[j] = std::cos(std::numbers::pi * pd_[j]);
            sp_[j] = std::sin(std::numbers::pi * pd_[j]);
        }
        if (J <= direct_limit) return;
        build();
        validate();
    }

    bool fast() const { return fast_; }
    std::size_t size() const { return p_.size(); }

    /// sum_j c_j cot(pi (t - p_j)) by direct summation.
    complex_t direct(const fixed_t& base, double offset) const {
        complex_t s(0);
        for (const auto& p : p_) s += p.c / std::tan(std::numbers::pi * (fixed::centered(fixed_t(base - p.pos)) + offset));
        return s;
    }

    complex_t operator()(const fixed_t& base, double offset) const {
        if (!fast_) return direct(base, offset);
        const std::size_t J = p_.size();
        auto it = std::upper_bound(p_.begin(), p_.end(), base, [](const fixed_t& b, const pole_term& p) { return b < p.pos; });
        std::size_t i = it == p_.begin() ? J - 1 : static_cast<std::size_t>(it - p_.begin()) - 1;
        double u = fixed::to_double(fixed_t(base - p_[i].pos)) + offset;
        if (u < 0) {
            i = (i + J - 1) % J;
            u += width_[i];
        } else if (u > width_[i]) {
            u -= width_[i];
            i = (i + 1) % J;
        }
        complex_t s(0);
        const std::size_t L = near_left_[i], R = near_right_[i];
        for (std::size_t a = 0; a < L + R; ++a) {
            const std::size_t j = (i + J + a + 1 - L) % J;
            s += p_[j].c / std::tan(std::numbers::pi * (fixed::centered(fixed_t(base - p_[j].pos)) + offset));
        }
        // Clenshaw on [0, width]
        const double x = std::clamp(2 * u / width_[i] - 1, -1.0, 1.0);
        const complex_t* a = &cheb_[i * nodes];
        complex_t b1(0), b2(0);
        for (std::size_t m = nodes; m-- > 1;) {
            const complex_t b0 = a[m] + 2 * x * b1 - b2;
            b2 = b1;
            b1 = b0;
        }
        return s + a[0] + x * b1 - b2;
    }

private:
    std::vector<pole_term> p_;
    std::vector<double> pd_, cp_, sp_, width_;
    std::vector<std::uint32_t> near_left_, near_right_;
    std::vector<complex_t> cheb_;
    bool fast_ = false;

    double gap(std::size_t i, std::size_t j) const { return fixed::to_double(fixed_t(p_[j].pos - p_[i].pos)); }

    void build() {
        const std::size_t J = p_.size();
        width_.resize(J);
        near_left_.resize(J);
        near_right_.resize(J);
        cheb_.assign(J * nodes, 0.0);
        for (std::size_t i = 0; i < J; ++i) width_[i] = gap(i, (i + 1) % J);
        for (std::size_t i = 0; i < J; ++i) {
            const double w = width_[i];
            std::size_t L = 4, R = 4;
            while (L < 64 && gap((i + J - L) % J, i) < 2 * w) ++L;
            while (R < 64 && gap((i + 1) % J, (i + 1 + R) % J) < 2 * w) ++R;
            near_left_[i] = static_cast<std::uint32_t>(L);
            near_right_[i] = static_cast<std::uint32_t>(R);
        }
        parallel_for(J, [&](std::size_t i) { fit_gap(i); });
        fast_ = true;
    }

    void fit_gap(std::size_t i) {
        const std::size_t J = p_.size();
        const double w = width_[i];
        const std::size_t L = near_left_[i], R = near_right_[i];
        const std::size_t first = (i + J + 1 - L) % J; // near set is first .. first + L + R - 1 (cyclic)
        std::array<complex_t, nodes> vals{};
        for (std::size_t k = 0; k < nodes; ++k) {
            const double xk = std::cos(std::numbers::pi * (static_cast<double>(k) + 0.5) / nodes);
            const double t = pd_[i] + 0.5 * w * (1 + xk);
            const double ct = std::cos(std::numbers::pi * t), st = std::sin(std::numbers::pi * t);
            double re = 0, im = 0;
            for (std::size_t j = 0; j < J; ++j) {
                if ((j + J - first) % J < L + R) continue;
                const double cot = (ct * cp_[j] + st * sp_[j]) / (st * cp_[j] - ct * sp_[j]);
                re += p_[j].c.real() * cot;
                im += p_[j].c.imag() * cot;
            }
            vals[k] = {re, im};
        }
        for (std::size_t m = 0; m < nodes; ++m) {
            complex_t s(0);
            for (std::size_t k = 0; k < nodes; ++k)
                s += vals[k] * std::cos(std::numbers::pi * static_cast<double>(m) * (static_cast<double>(k) + 0.5) / nodes);
            cheb_[i * nodes + m] = s * (m == 0 ? 1.0 / nodes : 2.0 / nodes);
        }
    }

    /// Spot checks against direct summation; on failure the evaluator
    /// falls back to direct summation everywhere.
    void validate() {
        const std::size_t J = p_.size();
        const std::size_t stride = std::max<std::size_t>(1, J / 48);
        for (std::size_t i = 0; i < J; i += stride) {
            for (double f : {0.13, 0.5, 0.91}) {
                const double off = f * width_[i];
                const complex_t a = (*this)(p_[i].pos, off);
                const complex_t b = direct(p_[i].pos, off);
                double scale = 0;
                for (const auto& p : p_)
                    scale += std::abs(p.c / std::tan(std::numbers::pi * (fixed::centered(fixed_t(p_[i].pos - p.pos)) + off)));
                if (!(std::abs(a - b) <= 1e-12 * scale)) {
                    fast_ = false;
                    return;
                }
            }
        }
    }
};

/// The boundary function of f as a singular_function, with every pole
/// declared (exponent 1, constant |c|/2pi). Large pole sets use the fast
/// evaluator.
inline singular_function<complex_t> boundary_function(const pole_sum& f) {
    const pole_sum m = f.merged();
    complex_t half(0);
    for (const auto& p : m.poles) half += 0.5 * p.c;
    auto ev = std::make_shared<const cot_sum_evaluator>(m.poles);
    const std::vector<complex_t> poly = m.poly;
    singular_function<complex_t> out;
    out.eval = [ev, poly, half](const fixed_t& b, double o) {
        complex_t s = half + complex_t(0, 0.5) * (*ev)(b, o);
        for (std::size_t k = 0; k < poly.size(); ++k)
            if (poly[k] != 0.0) s += poly[k] * cis_multiple(b, o, k);
        return s;
    };
    out.anchors = m.anchors();
    out.name = f.name;
    return out;
}

/// f - P_K or f - sigma_K on the circle, direct summation.
inline singular_function<complex_t> remainder_function(const pole_sum& f, std::size_t K, partial_sum_kind kind) {
    const pole_sum m = f.merged();
    singular_function<complex_t> out;
    out.eval = [m, K, kind](const fixed_t& b, double o) { return m.remainder(b, o, K, kind); };
    out.anchors = m.anchors();
    out.name = f.name + (kind == partial_sum_kind::taylor ? " - P_" : " - sigma_") + std::to_string(K);
    return out;
}

} // namespace ergolab
