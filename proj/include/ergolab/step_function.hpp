#pragma once

#include <algorithm>
#include <complex>
#include <functional>
#include <map>
#include <type_traits>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ergolab/core/error.hpp"
#include "ergolab/core/fixed.hpp"
#include "ergolab/core/numeric.hpp"

namespace ergolab {

/// Lengths that may reach the full circle (2^256 ulps) need a wider type.
using wide_t = boost::multiprecision::uint512_t;

inline real_t wide_to_real(const wide_t& len) {
    if (len == 0) return 0;
    const int s = static_cast<int>(msb(len));
    const int low = std::max(0, s - 127);
    const wide_t top = len >> low;
    const auto hi = static_cast<std::uint64_t>(top >> 64);
    const auto lo = static_cast<std::uint64_t>(top);
    const real_t v = boost::multiprecision::ldexp(real_t(hi), 64) + real_t(lo);
    return boost::multiprecision::ldexp(v, low - static_cast<int>(fixed_bits));
}

namespace detail {

template <class V>
struct value_less {
    bool operator()(const V& a, const V& b) const { return a < b; }
};

template <class T>
struct value_less<std::complex<T>> {
    bool operator()(const std::complex<T>& a, const std::complex<T>& b) const {
        return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
    }
};

} // namespace detail

template <class V>
V from_real(const real_t& x) {
    if constexpr (std::is_same_v<V, complex_t>) {
        return V(to_double(x));
    } else {
        return V(x);
    }
}

/// Piecewise-constant function on the circle. Piece i is [b_i, b_{i+1}) with
/// b_0 = 0; the last piece runs to 1. Equal neighbours are merged, so the
/// representation is canonical. tail(r) bounds the r-metric distance to the
/// untruncated function for series-defined inputs.
template <class V>
class basic_step_function {
public:
    using value_type = V;
    using tail_rule = std::function<double(double)>;

    basic_step_function() : breaks_{fixed_t(0)}, values_{V(0)} {}

    static basic_step_function constant(V v) {
        basic_step_function f;
        f.values_[0] = v;
        return f;
    }

    /// Builds from (breakpoint, value) pairs; breakpoints must start at 0 and
    /// increase strictly.
    static basic_step_function from_pieces(std::vector<fixed_t> breaks, std::vector<V> values) {
        require(!breaks.empty() && breaks.size() == values.size(), errc::out_of_range, "piece count mismatch");
        require(breaks.front() == 0, errc::out_of_range, "first breakpoint must be 0");
        for (std::size_t i = 1; i < breaks.size(); ++i)
            require(breaks[i - 1] < breaks[i], errc::out_of_range, "breakpoints must increase strictly");
        basic_step_function f;
        f.breaks_ = std::move(breaks);
        f.values_ = std::move(values);
        f.canonicalize();
        return f;
    }

    /// value on the arc [a, b) read cyclically, 0 elsewhere; a == b is empty.
    static basic_step_function arc(const fixed_t& a, const fixed_t& b, V value = V(1)) {
        if (a == b) return constant(V(0));
        std::vector<fixed_t> br;
        std::vector<V> vals;
        if (a < b) {
            br.push_back(0);
            vals.push_back(a == 0 ? value : V(0));
            if (a != 0) {
                br.push_back(a);
                vals.push_back(value);
            }
            br.push_back(b);
            vals.push_back(V(0));
        } else {
            br.push_back(0);
            vals.push_back(value);
            if (b != 0) {
                br.push_back(b);
                vals.push_back(V(0));
            }
            br.push_back(a);
            vals.push_back(value);
        }
        return from_pieces(std::move(br), std::move(vals));
    }

    std::size_t size() const { return values_.size(); }
    const fixed_t& breakpoint(std::size_t i) const { return breaks_[i]; }
    const V& value(std::size_t i) const { return values_[i]; }
    const std::vector<fixed_t>& breakpoints() const { return breaks_; }
    const std::vector<V>& values() const { return values_; }

    /// Length of piece i in ulps (2^256 for a single piece).
    wide_t length(std::size_t i) const {
        const wide_t end = i + 1 < size() ? wide_t(breaks_[i + 1]) : (wide_t(1) << fixed_bits);
        return end - wide_t(breaks_[i]);
    }

    real_t length_real(std::size_t i) const { return wide_to_real(length(i)); }

    /// Index of the piece containing t.
    std::size_t locate(const fixed_t& t) const {
        return static_cast<std::size_t>(std::upper_bound(breaks_.begin(), breaks_.end(), t) - breaks_.begin()) - 1;
    }

    const V& operator()(const fixed_t& t) const { return values_[locate(t)]; }

    double tail_bound(double r) const { return tail_ ? tail_(r) : 0.0; }
    const tail_rule& tail() const { return tail_; }
    basic_step_function& set_tail(tail_rule rule) {
        tail_ = std::move(rule);
        return *this;
    }

    /// x -> f(x + shift).
    basic_step_function shifted(const fixed_t& shift) const {
        if (shift == 0 || size() == 1) return *this;
        std::vector<std::pair<fixed_t, V>> pieces;
        pieces.reserve(size() + 1);
        for (std::size_t i = 0; i < size(); ++i) pieces.emplace_back(fixed_t(breaks_[i] - shift), values_[i]);
        std::sort(pieces.begin(), pieces.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        if (pieces.front().first != 0) pieces.insert(pieces.begin(), {fixed_t(0), (*this)(shift)});
        basic_step_function out;
        out.breaks_.clear();
        out.values_.clear();
        for (auto& [b, v] : pieces) {
            out.breaks_.push_back(b);
            out.values_.push_back(v);
        }
        out.canonicalize();
        out.tail_ = tail_;
        return out;
    }

    template <class Op>
    auto map(Op&& op) const {
        using W = std::decay_t<decltype(op(values_[0]))>;
        std::vector<W> vals;
        vals.reserve(size());
        for (const auto& v : values_) vals.push_back(op(v));
        auto out = basic_step_function<W>::from_pieces(breaks_, std::move(vals));
        out.set_tail(tail_);
        return out;
    }

    /// Pointwise op(f, g) over the common refinement. Tails add.
    template <class Op>
    friend basic_step_function combine(const basic_step_function& f, const basic_step_function& g, Op&& op) {
        std::vector<fixed_t> br;
        std::vector<V> vals;
        br.reserve(f.size() + g.size());
        vals.reserve(f.size() + g.size());
        std::size_t i = 0, j = 0;
        while (i < f.size() || j < g.size()) {
            fixed_t b;
            if (j >= g.size() || (i < f.size() && f.breaks_[i] < g.breaks_[j])) {
                b = f.breaks_[i++];
            } else if (i >= f.size() || g.breaks_[j] < f.breaks_[i]) {
                b = g.breaks_[j++];
            } else {
                b = f.breaks_[i++];
                ++j;
            }
            br.push_back(b);
            vals.push_back(op(f.values_[i - (i > 0 ? 1 : 0)], g.values_[j - (j > 0 ? 1 : 0)]));
        }
        auto out = from_pieces(std::move(br), std::move(vals));
        if (f.tail_ || g.tail_) {
            auto ft = f.tail_, gt = g.tail_;
            out.tail_ = [ft, gt](double r) { return (ft ? ft(r) : 0.0) + (gt ? gt(r) : 0.0); };
        }
        return out;
    }

    friend basic_step_function operator+(const basic_step_function& f, const basic_step_function& g) {
        return combine(f, g, [](const V& a, const V& b) { return V(a + b); });
    }
    friend basic_step_function operator-(const basic_step_function& f, const basic_step_function& g) {
        return combine(f, g, [](const V& a, const V& b) { return V(a - b); });
    }
    friend basic_step_function operator*(const V& c, const basic_step_function& f) {
        return f.map([&](const V& v) { return V(c * v); });
    }

    /// Integral over [0,1) (normalized measure).
    V integral() const {
        V s(0);
        for (std::size_t i = 0; i < size(); ++i) s += values_[i] * V(length_real(i));
        return s;
    }

    /// Lengths grouped by distinct value, each summed exactly in ulps.
    std::map<V, wide_t, detail::value_less<V>> value_lengths() const {
        std::map<V, wide_t, detail::value_less<V>> out;
        for (std::size_t i = 0; i < size(); ++i) out[values_[i]] += length(i);
        return out;
    }

    friend bool operator==(const basic_step_function& f, const basic_step_function& g) {
        return f.breaks_ == g.breaks_ && f.values_ == g.values_;
    }

private:
    template <class>
    friend class basic_step_function;

    void canonicalize() {
        std::size_t w = 0;
        for (std::size_t i = 0; i < breaks_.size(); ++i) {
            if (w > 0 && values_[i] == values_[w - 1]) continue;
            breaks_[w] = breaks_[i];
            values_[w] = values_[i];
            ++w;
        }
        breaks_.resize(w);
        values_.resize(w);
    }

    std::vector<fixed_t> breaks_;
    std::vector<V> values_;
    tail_rule tail_;
};

using step_function = basic_step_function<real_t>;
using complex_step_function = basic_step_function<complex_t>;

} // namespace ergolab
