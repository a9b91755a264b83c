#pragma once

// Closed-form circle functions with declared singular points, and adaptive
// integration of |f|^r around them.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "ergolab/core/error.hpp"
#include "ergolab/core/fixed.hpp"
#include "ergolab/core/numeric.hpp"
#include "ergolab/core/parallel.hpp"

namespace ergolab {

/// |f(t)| <= constant * dist(t, pos)^(-exponent) near pos.
struct singular_anchor {
    fixed_t pos{0};
    double exponent = 0;
    double constant = 0;
};

enum class measure_kind { normalized, raw };

/// An integral of |f|^r. Values are stored in the normalized measure dt on
/// [0,1) (equivalently dt/2pi on [0,2pi]); raw() rescales to dt on [0,2pi].
struct quasi_norm_result {
    double value = 0;
    double abs_error = 0;
    double r = 1;
    measure_kind normalization = measure_kind::normalized;

    quasi_norm_result raw() const {
        if (normalization == measure_kind::raw) return *this;
        return {value * two_pi, abs_error * two_pi, r, measure_kind::raw};
    }
    quasi_norm_result normalized() const {
        if (normalization == measure_kind::normalized) return *this;
        return {value / two_pi, abs_error / two_pi, r, measure_kind::normalized};
    }
};

/// The evaluator receives the point as base + offset, where base is a
/// 256-bit circle position and offset a small double; evaluators near a pole
/// use the offset to keep full relative accuracy.
template <class V>
struct singular_function {
    std::function<V(const fixed_t& base, double offset)> eval;
    std::vector<singular_anchor> anchors;
    std::string name;

    V operator()(double t) const {
        const double fl = std::floor(t);
        return eval(fixed::from_double(t - fl), 0.0);
    }
    V at(const fixed_t& t) const { return eval(t, 0.0); }
};

struct integration_options {
    double tol = 1e-8;
    double ratio = 8.0;       // geometric panel ratio toward a singular end
    unsigned max_depth = 48;  // bisection depth per panel
    double min_width = 1e-300;
};

namespace detail {

struct panel_sum {
    double value = 0;
    double error = 0;
};

/// GK21 on [a, b] of u -> h(u), refined globally: the subpanel with the
/// largest error estimate is bisected until the total meets tol. Square-root
/// cusps at zeros of f need this; halving the tolerance per level would not
/// terminate there.
template <class H>
panel_sum adaptive_panel(H& h, double a, double b, double tol, unsigned depth, const integration_options& opt,
                         bool near_anchor) {
    (void)opt;
    struct piece {
        double a, b, value, error;
        unsigned level;
        bool operator<(const piece& o) const { return error < o.error; }
    };
    const auto rule = [&h](double lo, double hi, unsigned level) {
        double err = 0;
        const double v = boost::math::quadrature::gauss_kronrod<double, 21>::integrate(h, lo, hi, 0, 0, &err);
        // With max_depth 0 Boost reports |K - G| on the reference interval [-1,1].
        err *= 0.5 * std::abs(hi - lo);
        if (!std::isfinite(v) || !std::isfinite(err))
            fail(errc::undeclared_singularity, "non-finite integrand on [" + format_g17(lo) + ", " + format_g17(hi) + "]");
        return piece{lo, hi, v, err, level};
    };
    std::priority_queue<piece> heap;
    heap.push(rule(a, b, 0));
    double value = heap.top().value, error = heap.top().error;
    const std::size_t max_pieces = std::size_t(4096) * depth;
    while (error > tol) {
        const piece w = heap.top();
        if (heap.size() >= max_pieces || w.level >= depth || std::abs(w.b - w.a) <= 1e-13 * std::abs(w.a)) {
            const bool at_anchor = near_anchor && w.a == a;
            if (!at_anchor && std::abs(w.b - w.a) < 1e-9 * std::max(1.0, std::abs(b - a)))
                fail(errc::undeclared_singularity, "integrand does not resolve near offset " + format_g17(w.a));
            fail(errc::tolerance_not_met, "panel [" + format_g17(a) + ", " + format_g17(b) + "] error " +
                                              format_g17(error) + " above " + format_g17(tol));
        }
        heap.pop();
        const double m = 0.5 * (w.a + w.b);
        const piece l = rule(w.a, m, w.level + 1), r = rule(m, w.b, w.level + 1);
        value += l.value + r.value - w.value;
        error += l.error + r.error - w.error;
        heap.push(l);
        heap.push(r);
        if (error <= tol) {
            // recompute from the pieces to shed accumulated rounding
            double v = 0, e = 0;
            auto copy = heap;
            while (!copy.empty()) {
                v += copy.top().value;
                e += copy.top().error;
                copy.pop();
            }
            value = v;
            error = e;
        }
    }
    return {value, error};
}

inline std::vector<singular_anchor> normalized_anchors(std::vector<singular_anchor> anchors) {
    std::sort(anchors.begin(), anchors.end(), [](const auto& a, const auto& b) { return a.pos < b.pos; });
    std::vector<singular_anchor> out;
    for (const auto& a : anchors) {
        if (!out.empty() && out.back().pos == a.pos) {
            out.back().exponent = std::max(out.back().exponent, a.exponent);
            out.back().constant += a.constant;
        } else {
            out.push_back(a);
        }
    }
    if (out.empty()) out.push_back({fixed_t(0), 0.0, 0.0});
    return out;
}

} // namespace detail

/// Integral of |f|^r over the circle (normalized measure). Each gap between
/// consecutive anchors is split at its midpoint; each half is cut into
/// geometric panels toward its anchor down to a width delta, and the piece
/// [0, delta] is bounded analytically by C^r delta^(1-er)/(1-er). Half of
/// that bound is added to the value and half to the error.
template <class V>
quasi_norm_result lr_quasinorm_singular(const singular_function<V>& f, double r, const integration_options& opt = {}) {
    require(r > 0 && r <= 1, errc::out_of_range, "exponent r must lie in (0,1]");
    require(opt.tol > 0, errc::out_of_range, "tolerance must be positive");
    const auto anchors = detail::normalized_anchors(f.anchors);
    for (const auto& a : anchors)
        require(a.exponent >= 0 && a.exponent <= 1 && a.exponent * r < 1, errc::out_of_range,
                "anchor exponent must lie in [0,1] with exponent * r < 1");
    const std::size_t G = anchors.size();
    const double half_tol = opt.tol / (2.0 * static_cast<double>(G));

    const auto halves = parallel_map<detail::panel_sum>(2 * G, [&](std::size_t idx) -> detail::panel_sum {
        const std::size_t g = idx / 2;
        const bool left = idx % 2 == 0; // left half hugs anchor g, right half hugs anchor g+1
        const auto& a0 = anchors[g];
        const auto& a1 = anchors[(g + 1) % G];
        const double L = G == 1 ? 1.0 : fixed::to_double(fixed_t(a1.pos - a0.pos));
        const auto& anchor = left ? a0 : a1;
        const double sign = left ? 1.0 : -1.0;
        const double H = 0.5 * L;
        auto h = [&](double u) {
            const V v = f.eval(anchor.pos, sign * u);
            const double m = std::abs(v);
            return m == 0 ? 0.0 : std::pow(m, r);
        };
        const double er = anchor.exponent * r;
        const double tail_tol = 0.5 * half_tol;
        // delta from the analytic tail bound, refreshed with the observed size of f.
        double C = anchor.constant;
        double delta = H / opt.ratio;
        for (int it = 0; it < 3; ++it) {
            const double Cr = std::pow(std::max(C, 1e-300), r);
            double d = std::pow(tail_tol * (1 - er) / Cr, 1 / (1 - er));
            d = std::min(d, H / opt.ratio);
            delta = d;
            const double fd = std::abs(f.eval(anchor.pos, sign * delta));
            const double ceff = fd * std::pow(delta, anchor.exponent);
            if (!(ceff > C * (1 + 1e-12))) break;
            C = ceff;
        }
        const double Ceff = std::max(C, std::abs(f.eval(anchor.pos, sign * delta)) * std::pow(delta, anchor.exponent));
        const double tail = std::pow(Ceff, r) * std::pow(delta, 1 - er) / (1 - er);
        std::vector<double> cuts{delta};
        while (cuts.back() * opt.ratio < H) cuts.push_back(cuts.back() * opt.ratio);
        cuts.push_back(H);
        const double panel_tol = 0.5 * half_tol / static_cast<double>(cuts.size());
        detail::panel_sum s{0.5 * tail, 0.5 * tail};
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            const auto p = detail::adaptive_panel(h, cuts[i], cuts[i + 1], panel_tol, opt.max_depth, opt, i == 0);
            s.value += p.value;
            s.error += p.error;
        }
        return s;
    });
    quasi_norm_result out;
    out.r = r;
    for (const auto& s : halves) {
        out.value += s.value;
        out.abs_error += s.error;
    }
    if (!(out.abs_error <= opt.tol))
        fail(errc::tolerance_not_met, "error estimate " + format_g17(out.abs_error) + " exceeds " + format_g17(opt.tol));
    return out;
}

/// Pointwise difference of two singular functions; anchors are pooled.
template <class V>
singular_function<V> difference(const singular_function<V>& f, const singular_function<V>& g) {
    singular_function<V> out;
    out.eval = [f, g](const fixed_t& b, double o) { return V(f.eval(b, o) - g.eval(b, o)); };
    out.anchors = f.anchors;
    out.anchors.insert(out.anchors.end(), g.anchors.begin(), g.anchors.end());
    out.name = f.name + " - " + g.name;
    return out;
}

/// x -> f(x + shift), anchors moved by -shift.
template <class V>
singular_function<V> shifted(const singular_function<V>& f, const fixed_t& shift) {
    singular_function<V> out;
    out.eval = [f, shift](const fixed_t& b, double o) { return f.eval(fixed_t(b + shift), o); };
    for (auto a : f.anchors) {
        a.pos -= shift;
        out.anchors.push_back(a);
    }
    out.name = f.name;
    return out;
}

/// c * f.
template <class V>
singular_function<V> scaled(const singular_function<V>& f, V c) {
    singular_function<V> out;
    out.eval = [f, c](const fixed_t& b, double o) { return V(c * f.eval(b, o)); };
    out.anchors = f.anchors;
    for (auto& a : out.anchors) a.constant *= std::abs(c);
    out.name = f.name;
    return out;
}

/// sin(2 pi t): smooth, no anchors.
inline singular_function<double> sine_function() {
    return {[](const fixed_t& b, double o) {
                return std::sin(two_pi * (fixed::centered(b) + o));
            },
            {},
            "sin(2 pi t)"};
}

/// t -> 1/(1 - e^{2 pi i t}) = 1/2 + (i/2) cot(pi t), with a simple pole at 0.
inline singular_function<complex_t> cauchy_kernel() {
    return {[](const fixed_t& b, double o) {
                const double u = fixed::centered(b) + o;
                return complex_t(0.5, 0.5 / std::tan(std::numbers::pi * u));
            },
            {singular_anchor{fixed_t(0), 1.0, 1.0 / two_pi}},
            "1/(1 - e^{2 pi i t})"};
}

} // namespace ergolab
