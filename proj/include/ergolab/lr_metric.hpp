#pragma once

// The L^r quasi-metric d(f, g) = int |f - g|^r for 0 < r <= 1 on step and
// singular functions, convergence profiles of Birkhoff averages, and the
// Cesaro statistics (gh) and (GH).

#include <cstdint>
#include <vector>

#include "ergolab/core/error.hpp"
#include "ergolab/core/numeric.hpp"
#include "ergolab/core/parallel.hpp"
#include "ergolab/diophantine.hpp"
#include "ergolab/dynamics.hpp"
#include "ergolab/singular.hpp"
#include "ergolab/step_function.hpp"

namespace ergolab {

/// Binary128 value of int |f|^r.
template <class V>
real_t lr_quasinorm_exact(const basic_step_function<V>& f, double r, const V& c = V(0)) {
    return quasinorm_of_pieces<V>(
        [&f](auto&& visit) {
            for (std::size_t i = 0; i < f.size(); ++i) visit(f.value(i), f.length(i));
        },
        r, c);
}

/// Sum of |v_i|^r * length_i over the pieces; abs_error is the recorded tail
/// bound. Lengths with equal values are added exactly before the power.
template <class V>
quasi_norm_result lr_quasinorm_step(const basic_step_function<V>& f, double r) {
    require(r > 0 && r <= 1, errc::out_of_range, "exponent r must lie in (0,1]");
    quasi_norm_result out;
    out.r = r;
    out.value = to_double(lr_quasinorm_exact(f, r));
    out.abs_error = f.tail_bound(r);
    return out;
}

template <class V>
quasi_norm_result distance(const basic_step_function<V>& f, const basic_step_function<V>& g, double r) {
    return lr_quasinorm_step(f - g, r);
}

template <class V>
quasi_norm_result distance(const singular_function<V>& f, const singular_function<V>& g, double r,
                           const integration_options& opt = {}) {
    return lr_quasinorm_singular(difference(f, g), r, opt);
}

struct profile_entry {
    std::uint64_t n = 0;
    quasi_norm_result result;
    real_t exact = 0; // binary128 value for step inputs
};

/// d_r(M_n f, c) for each n in n_list (increasing), by one incremental sweep.
template <class V>
std::vector<profile_entry> mean_convergence_profile(const basic_step_function<V>& f, const rotation_number& alpha,
                                                    double r, const V& c, const std::vector<std::uint64_t>& n_list,
                                                    std::size_t piece_cap = default_piece_cap) {
    require(r > 0 && r <= 1, errc::out_of_range, "exponent r must lie in (0,1]");
    for (std::size_t i = 0; i < n_list.size(); ++i)
        require(n_list[i] >= 1 && (i == 0 || n_list[i] > n_list[i - 1]), errc::out_of_range,
                "n_list must be positive and increasing");
    std::vector<profile_entry> out;
    out.reserve(n_list.size());
    birkhoff_accumulator<V> acc(f, alpha, piece_cap);
    for (const auto n : n_list) {
        while (acc.count() < n) acc.add_copy();
        const V scale = from_real<V>(real_t(1) / real_t(n));
        const real_t v = quasinorm_of_pieces<V>([&acc](auto&& visit) { acc.for_each_piece(visit); }, r, c, scale);
        profile_entry e;
        e.n = n;
        e.exact = v;
        e.result = {to_double(v), f.tail_bound(r), r, measure_kind::normalized};
        out.push_back(e);
    }
    return out;
}

/// M_n f for a singular function: the average of n translates, with all n
/// translated anchors declared (constants divided by n).
template <class V>
singular_function<V> birkhoff_average(const singular_function<V>& f, const rotation_number& alpha, std::uint64_t n) {
    require(n >= 1, errc::out_of_range, "averaging length must be positive");
    std::vector<fixed_t> shifts(n);
    for (std::uint64_t k = 0; k < n; ++k) shifts[k] = fixed::times(alpha.value(), k);
    singular_function<V> out;
    out.eval = [f, shifts](const fixed_t& b, double o) {
        V s(0);
        for (const auto& sh : shifts) s += f.eval(fixed_t(b + sh), o);
        return V(s / static_cast<double>(shifts.size()));
    };
    for (const auto& sh : shifts)
        for (auto a : f.anchors) {
            a.pos -= sh;
            a.constant /= static_cast<double>(n);
            out.anchors.push_back(a);
        }
    out.name = "M_n " + f.name;
    return out;
}

/// d_r(M_n f, c) for a singular f, each entry integrated independently.
template <class V>
std::vector<profile_entry> mean_convergence_profile(const singular_function<V>& f, const rotation_number& alpha,
                                                    double r, const V& c, const std::vector<std::uint64_t>& n_list,
                                                    const integration_options& opt = {}) {
    std::vector<profile_entry> out;
    for (const auto n : n_list) {
        auto m = birkhoff_average(f, alpha, n);
        auto inner = m.eval;
        m.eval = [inner, c](const fixed_t& b, double o) { return V(inner(b, o) - c); };
        profile_entry e;
        e.n = n;
        e.result = lr_quasinorm_singular(m, r, opt);
        e.exact = e.result.value;
        out.push_back(e);
    }
    return out;
}

enum class gh_variant { averaged, supremum };

struct gh_result {
    quasi_norm_result result;
    real_t exact = 0;
    std::uint64_t argmax = 0;          // supremum variant: the n attaining it
    std::vector<real_t> per_n;         // supremum variant: int |S_n f|^r for n = 1..N
};

/// averaged: int |(1/N) sum_{n=1}^N sum_{k<n} T^k f|^r, via the weights
/// N - k on T^k f. supremum: max over n <= N of int |sum_{k<n} T^k f|^r.
template <class V>
gh_result gh_statistic(const basic_step_function<V>& f, const rotation_number& alpha, double r, std::uint64_t N,
                       gh_variant variant = gh_variant::averaged, std::size_t piece_cap = default_piece_cap) {
    require(r > 0 && r <= 1, errc::out_of_range, "exponent r must lie in (0,1]");
    require(N >= 1, errc::out_of_range, "N must be positive");
    gh_result out;
    birkhoff_accumulator<V> acc(f, alpha, piece_cap);
    const auto source = [&acc](auto&& visit) { acc.for_each_piece(visit); };
    if (variant == gh_variant::averaged) {
        for (std::uint64_t k = 0; k < N; ++k) acc.add_copy(from_real<V>(real_t(N - k)));
        out.exact = quasinorm_of_pieces<V>(source, r, V(0), from_real<V>(real_t(1) / real_t(N)));
    } else {
        out.per_n.reserve(N);
        for (std::uint64_t n = 1; n <= N; ++n) {
            acc.add_copy();
            const real_t v = quasinorm_of_pieces<V>(source, r);
            out.per_n.push_back(v);
            if (n == 1 || v > out.exact) {
                out.exact = v;
                out.argmax = n;
            }
        }
    }
    out.result = {to_double(out.exact), 0.0, r, measure_kind::normalized};
    return out;
}

} // namespace ergolab
