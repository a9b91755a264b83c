#include <catch_amalgamated.hpp>

#include <boost/math/special_functions/beta.hpp>

#include <random>
#include <set>

#include "ergolab/lr_metric.hpp"
#include "oracles.hpp"

using namespace ergolab;

namespace {

const rotation_number& golden() {
    static const auto a = rotation_number::from_spec(irrational_spec::golden());
    return a;
}

step_function random_step(std::mt19937_64& rng, std::size_t pieces, bool nonnegative = false) {
    std::set<double> cuts;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    while (cuts.size() + 1 < pieces) cuts.insert(u(rng));
    std::vector<fixed_t> br{fixed_t(0)};
    for (double c : cuts) br.push_back(fixed::from_double(c));
    std::vector<real_t> vals;
    std::uniform_real_distribution<double> v(nonnegative ? 0.0 : -3.0, 3.0);
    for (std::size_t i = 0; i < br.size(); ++i) vals.push_back(real_t(v(rng)));
    return step_function::from_pieces(br, vals);
}

const step_function& half_indicator() {
    static const auto f = step_function::arc(fixed_t(0), fixed::half());
    return f;
}

} // namespace

TEST_CASE("closed-form step quasi-norms", "[lr_metric]") {
    for (double r : {0.1, 0.5, 1.0}) CHECK(lr_quasinorm_step(step_function::constant(1), r).value == 1.0);
    const auto f = step_function::arc(fixed_t(0), fixed::half(), real_t(2));
    CHECK(lr_quasinorm_step(f, 0.5).value == Catch::Approx(std::sqrt(2.0) / 2).epsilon(1e-15));
    CHECK(lr_quasinorm_step(f, 0.5).normalization == measure_kind::normalized);
    CHECK(lr_quasinorm_step(f, 0.5).raw().value == Catch::Approx(two_pi * std::sqrt(2.0) / 2));
}

TEST_CASE("step integrator agrees with a Riemann oracle", "[lr_metric][property]") {
    std::mt19937_64 rng(31);
    const std::size_t cells = 1000000;
    for (int trial = 0; trial < 3; ++trial) {
        const auto f = random_step(rng, 6);
        const double r = 0.25 + 0.25 * trial;
        const double exact = lr_quasinorm_step(f, r).value;
        const double riemann = oracle::riemann(
            [&](double t) { return to_double(f(fixed::from_double(t))); }, r, cells);
        // Each breakpoint perturbs one cell by at most max|v|^r / cells.
        const double cell_bound = f.size() * std::pow(3.0, r) / cells;
        CHECK(std::abs(exact - riemann) <= cell_bound);
    }
}

TEST_CASE("r-triangle inequality and Holder comparison", "[lr_metric][property]") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 50; ++trial) {
        const auto f = random_step(rng, 1 + trial % 8);
        const auto g = random_step(rng, 1 + trial % 5);
        const double r = 0.05 + 0.9 * (trial % 10) / 10.0;
        CHECK(lr_quasinorm_exact(f + g, r) <= lr_quasinorm_exact(f, r) + lr_quasinorm_exact(g, r));
        const auto h = random_step(rng, 2 + trial % 6, true);
        // int |h|^r <= (int |h|)^r under the probability measure
        CHECK(lr_quasinorm_exact(h, r) <= real_pow(lr_quasinorm_exact(h, 1.0), r) * (1 + real_t(1e-30)));
    }
}

TEST_CASE("singular integrals against closed forms", "[lr_metric]") {
    const auto s = lr_quasinorm_singular(sine_function(), 1.0);
    CHECK(s.value == Catch::Approx(2 / std::numbers::pi).margin(1e-8));
    CHECK(s.abs_error <= 1e-8);

    const double r = 0.5;
    const auto c = lr_quasinorm_singular(cauchy_kernel(), r).raw();
    // int_0^{2pi} |2 sin(t/2)|^{-r} dt = 2^{1-r} B((1-r)/2, 1/2)
    const double beta = std::pow(2.0, 1 - r) * boost::math::beta((1 - r) / 2, 0.5);
    CHECK(beta == Catch::Approx(7.41629870920549).epsilon(1e-13));
    CHECK(std::abs(c.value - beta) <= 1e-6);
    CHECK(c.abs_error <= two_pi * 1e-8);
    CHECK(c.value <= std::pow(2.0, 1 - r) * std::numbers::pi / (1 - r));
    CHECK(c.value > std::pow(2.0, 1 - 3 * r) * std::numbers::pi / (1 - r));

    for (double rr : {0.1, 0.3, 0.7, 0.9}) {
        const auto v = lr_quasinorm_singular(cauchy_kernel(), rr).raw();
        const double b = std::pow(2.0, 1 - rr) * boost::math::beta((1 - rr) / 2, 0.5);
        CHECK(std::abs(v.value - b) <= 1e-6);
    }
}

TEST_CASE("undeclared singularities are reported", "[lr_metric]") {
    singular_function<double> bad{[](const fixed_t& b, double o) {
                                      const double t = fixed::to_double(b) + o;
                                      return 1.0 / ((t - 0.3) * (t - 0.3));
                                  },
                                  {},
                                  "pole at 0.3"};
    try {
        lr_quasinorm_singular(bad, 1.0);
        FAIL("expected a failure");
    } catch (const error& e) {
        CHECK((e.code() == errc::undeclared_singularity || e.code() == errc::tolerance_not_met));
    }
}

TEST_CASE("mean convergence profiles", "[lr_metric]") {
    const std::vector<std::uint64_t> ns{1, 2, 5, 10, 100, 1000};
    const auto c3 = step_function::constant(3);
    for (const auto& e : mean_convergence_profile(c3, golden(), 0.5, real_t(3), ns)) CHECK(e.exact == 0);
    for (const auto& e : mean_convergence_profile(step_function::constant(1), golden(), 0.5, real_t(0), ns))
        CHECK(e.exact == 1);

    const auto& g = half_indicator();
    const auto f = g - koopman(g, golden());
    for (double r : {0.3, 0.5, 0.8}) {
        const real_t gr = lr_quasinorm_exact(g, r);
        for (const auto& e : mean_convergence_profile(f, golden(), r, real_t(0), ns))
            CHECK(e.exact <= 2 * gr / real_pow(real_t(e.n), r));
    }
}

TEST_CASE("profiles of f and T f coincide", "[lr_metric][property]") {
    std::mt19937_64 rng(5);
    const std::vector<std::uint64_t> ns{1, 3, 8, 40};
    for (int trial = 0; trial < 5; ++trial) {
        const auto f = random_step(rng, 4);
        const auto tf = koopman(f, golden(), 7);
        const auto a = mean_convergence_profile(f, golden(), 0.4, real_t(0.5), ns);
        const auto b = mean_convergence_profile(tf, golden(), 0.4, real_t(0.5), ns);
        for (std::size_t i = 0; i < ns.size(); ++i)
            CHECK(to_double(abs(a[i].exact - b[i].exact)) < 1e-28);
        const auto ga = gh_statistic(f, golden(), 0.4, 30);
        const auto gb = gh_statistic(tf, golden(), 0.4, 30);
        CHECK(to_double(abs(ga.exact - gb.exact)) < 1e-28);
    }
}

TEST_CASE("gh statistic dichotomy", "[lr_metric]") {
    for (std::uint64_t N : {1u, 2u, 10u, 100u}) {
        const auto v = gh_statistic(step_function::constant(1), golden(), 0.5, N);
        const real_t expected = real_pow(real_t(N + 1) / 2, 0.5);
        CHECK(to_double(abs(v.exact - expected)) < 1e-30);
    }
    const auto& g = half_indicator();
    const auto f = g - koopman(g, golden());
    const double r = 0.5;
    const real_t gr = lr_quasinorm_exact(g, r);
    for (std::uint64_t N : {5u, 50u, 300u}) {
        const auto avg = gh_statistic(f, golden(), r, N);
        const auto mn = birkhoff_step_average(g, golden(), N);
        CHECK(avg.exact <= gr + lr_quasinorm_exact(mn, r));
        const auto sup = gh_statistic(f, golden(), r, N, gh_variant::supremum);
        CHECK(sup.exact <= 2 * gr);
        CHECK(sup.per_n.size() == N);
    }
}
