#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>

#include "ergolab/counterexamples.hpp"
#include "oracles.hpp"

using namespace ergolab;
using Catch::Approx;

namespace {

const rotation_number& golden() {
    static const auto a = rotation_number::from_spec(irrational_spec::golden());
    return a;
}

/// Least m with m^2 P > 1, by bisection on rationals.
big_int least_inverse(const big_rational& P) {
    big_int lo(0), hi(1);
    while (big_rational(hi * hi) * P <= 1) hi *= 2;
    while (hi - lo > 1) {
        const big_int mid = (lo + hi) / 2;
        if (big_rational(mid * mid) * P > 1) hi = mid;
        else lo = mid;
    }
    return hi;
}

} // namespace

TEST_CASE("epsilon sequence first terms", "[counterexamples][epsilon]") {
    const auto s = epsilon_sequence(big_rational(3, 4), 4);
    REQUIRE(s.complete);
    CHECK(s.eps(1) == big_rational(1, 2));
    CHECK(s.eps(2) == big_rational(1, 2));
    CHECK(s.eps(3) == big_rational(1, 3));
    // product 3/4 * 1/2 * 1/2 * 1/3 = 1/16, sqrt(16) = 4 exactly
    CHECK(s.eps(4) == big_rational(1, 5));
    CHECK_THROWS_AS(epsilon_sequence(big_rational(1, 2), 3), error);
    CHECK_THROWS_AS(epsilon_sequence(big_rational(1), 3), error);
}

TEST_CASE("epsilon sequence matches a bisection oracle", "[counterexamples][epsilon][property]") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 40; ++trial) {
        const long den = std::uniform_int_distribution<long>(3, 400)(rng);
        const long num = std::uniform_int_distribution<long>(den / 2 + 1, den - 1)(rng);
        const big_rational e0(num, den);
        const auto s = epsilon_sequence(e0, 9);
        big_rational P = e0;
        for (std::size_t j = 1; j <= 9; ++j) {
            const big_int m = least_inverse(P);
            // floor(1/sqrt P) + 1 is the least m with m > 1/sqrt P
            REQUIRE(s.inverse[j - 1] == m);
            P /= big_rational(m);
        }
        const auto c = check_epsilon_invariants(s);
        CHECK(c.square_below_product);
        CHECK(c.product_geometric);
        CHECK(c.nonincreasing);
    }
}

TEST_CASE("epsilon sequence is not strictly decreasing at the start", "[counterexamples][epsilon]") {
    const auto c = check_epsilon_invariants(epsilon_sequence(big_rational(3, 4), 12));
    CHECK(c.checked == 12);
    CHECK(c.nonincreasing);
    CHECK_FALSE(c.strictly_decreasing);
}

TEST_CASE("epsilon bit cap stops the recursion", "[counterexamples][epsilon]") {
    const auto s = epsilon_sequence(big_rational(3, 4), 200, 4096);
    CHECK_FALSE(s.complete);
    CHECK(s.count() < 201);
    CHECK_FALSE(s.stop_reason.empty());
    // bit length grows by roughly 3/2 per step
    const std::size_t n = s.inverse.size();
    CHECK(s.log2_inverse(n) / s.log2_inverse(n - 2) == Approx(2.25).epsilon(0.1));
}

TEST_CASE("epsilon summability", "[counterexamples][epsilon]") {
    const auto s = epsilon_sequence(big_rational(3, 4), 25);
    for (double r : {0.05, 0.2, 0.3}) {
        const auto rows = epsilon_summability(s, r);
        REQUIRE(rows.size() == 26);
        for (const auto& row : rows) {
            CHECK(row.termwise_exact);
            CHECK(row.partial <= row.bound * (1 + real_t(1e-30)));
            CHECK(row.partial <= row.full_bound);
        }
    }
    CHECK_THROWS_AS(epsilon_summability(s, 0.34), error);
}

TEST_CASE("conze function small truncations", "[counterexamples][conze]") {
    const auto& a = golden();
    const auto h1 = conze_function(a, 1);
    CHECK(h1.size() == 1);
    CHECK(to_double(h1.value(0)) == 1.0);
    const auto h3 = conze_function(a, 3);
    // q = 1, 2, 3: terms 1 and 2/4 fill the circle, 3/9 on [0, 2/3]
    CHECK(to_double(h3(fixed::from_double(0.1))) == Approx(1.5 + 1.0 / 3).epsilon(1e-15));
    CHECK(to_double(h3(fixed::from_double(0.9))) == Approx(1.5).epsilon(1e-15));
    CHECK_THROWS_AS(conze_function(a, a.depth() + 1), error);
}

TEST_CASE("conze integral against its bound", "[counterexamples][conze]") {
    const auto& a = golden();
    for (std::size_t N : {5u, 10u, 20u, 40u}) {
        const auto h = conze_function(a, N);
        const real_t integ = h.integral();
        // exact integral sum n^-2 q_n min(1, 2/q_n)
        real_t expect = 0;
        for (std::size_t n = 1; n <= N; ++n) {
            const big_int& q = a.q(n);
            expect += q <= 2 ? to_real(big_rational(q, big_int(n * n))) : real_t(2) / real_t(n * n);
        }
        CHECK(to_double(integ) == Approx(to_double(expect)).epsilon(1e-12));
        CHECK(integ <= conze_integral_bound(N));
    }
    CHECK(conze_tail_bound(a, 10, 1.0) == Approx(0.2));
    CHECK(conze_tail_bound(a, 10, 0.5) > conze_tail_bound(a, 20, 0.5));
}

TEST_CASE("conze blow-up certificates at random points", "[counterexamples][conze][property]") {
    const auto& a = golden();
    const auto h = conze_function(a, 30);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int passed = 0;
    for (int i = 0; i < 100; ++i) {
        const circle_point x{fixed::from_double(u(rng)), 0};
        for (std::size_t n : {6u, 12u, 20u}) {
            const auto c = conze_blowup(a, h, x, n, 0.5);
            REQUIRE(c.j >= 1);
            const long double t = fixed::to_double(x.value) + c.j * ((std::sqrt(5.0L) - 1) / 2);
            CHECK(t - std::floor(t) <= 2.0L / static_cast<long double>(a.q(n)) + 1e-12L);
            passed += c.pass;
        }
    }
    CHECK(passed == 300);
}

TEST_CASE("tower function exact values", "[counterexamples][tower]") {
    const auto d = tower_function(3);
    REQUIRE(d.exact.size() == 4);
    CHECK(d.exact[1] == big_rational(2));
    CHECK(d.exact[2] == big_rational(3));
    CHECK(d.exact[3] == big_rational(35, 9));
    CHECK(to_double(d.h(fixed::from_double(0.01))) == Approx(35.0 / 9).epsilon(1e-15));
    CHECK(to_double(d.h(fixed::from_double(0.2))) == Approx(3.0).epsilon(1e-15));
    CHECK(to_double(d.h(fixed::from_double(0.7))) == 0.0);
    CHECK(to_double(d.integral) == Approx(1 + 0.25 + 1.0 / 9).epsilon(1e-15));

    const auto d2 = tower_function(3, 2.0);
    const double top = std::sqrt(2.0) + 0.5 + std::pow(2.0, 1.5) / 9;
    CHECK(to_double(d2.h(fixed::from_double(0.01))) == Approx(top).epsilon(1e-14));
    CHECK(d2.exact.empty());
    CHECK_THROWS_AS(tower_function(31), error);
}

TEST_CASE("tower integral is the sum of n^-2", "[counterexamples][tower][property]") {
    for (unsigned N = 1; N <= 30; N += 7) {
        double s = 0;
        for (unsigned n = 1; n <= N; ++n) s += 1.0 / (n * n);
        CHECK(to_double(tower_function(N).integral) == Approx(s).epsilon(1e-14));
        CHECK(to_double(tower_function(N).norm_bound) == Approx(s).epsilon(1e-14));
    }
}

TEST_CASE("tower certificates at n = 10", "[counterexamples][tower]") {
    const auto d = tower_function(12);
    const auto half = tower_blowup(d, 10, 0.5);
    CHECK(half.exact);
    CHECK(to_double(half.bound) == Approx(0.32).epsilon(1e-15));
    CHECK(half.pass);
    CHECK(half.levels_checked == 1023);
    CHECK(half.certified_measure == big_rational(1023, 1024));
    const auto fifth = tower_blowup(d, 10, 0.2);
    CHECK(to_double(fifth.bound) == Approx(2.56).epsilon(1e-15));
    CHECK(fifth.pass);
    CHECK(to_double(fifth.min_ratio) >= 2.56);
    // irrational r goes through binary128 comparisons
    const auto irr = tower_blowup(d, 10, 1 / std::sqrt(5.0));
    CHECK_FALSE(irr.exact);
    CHECK(irr.pass);
}

TEST_CASE("rate schedule for sqrt(n)", "[counterexamples][rate]") {
    const auto s = rate_schedule(rate_rule::sqrt_n(), 12);
    for (const auto& row : s.rows) {
        const big_int n(row.n);
        CHECK(row.c_n == n * n);
        CHECK(row.J == n * n * n);
        CHECK(row.k == (n * n * n + 1) * (n * n * n + 1));
        CHECK(row.inverse_consistent);
        CHECK(row.growth_exceeds_n);
    }
    CHECK(s.rows[3].growth == big_rational(65, 16));
    CHECK(s.c_nondecreasing);
    CHECK(s.c_over_n_increasing);
    CHECK_THROWS_AS(rate_schedule(rate_rule::power(1, 1), 3), error);
    try {
        rate_schedule(rate_rule::parse("n"), 3);
    } catch (const error& e) {
        CHECK(e.code() == errc::invalid_rate);
    }
}

TEST_CASE("rate schedule for n/log(n+1)", "[counterexamples][rate]") {
    const auto s = rate_schedule(rate_rule::n_over_log(), 4);
    CHECK(s.rows[0].c_n == 2);
    CHECK(s.rows[1].c_n == 7);
    CHECK(s.rows[2].c_n == 20);
    CHECK(s.rows[3].c_n == 54);
    for (const auto& row : s.rows) {
        CHECK(row.inverse_consistent);
        // c_j > n^3 j for every j > J, and fails at J itself
        const big_int n3 = pow_int(big_int(row.n), 3);
        for (big_int j = row.J + 1; j <= row.J + 5; ++j) CHECK(s.rule.c(j) > n3 * j);
        if (row.J >= 1) CHECK_FALSE(s.rule.c(row.J) > n3 * row.J);
    }
}

TEST_CASE("rate inverse consistency for random powers", "[counterexamples][rate][property]") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 30; ++trial) {
        const unsigned q = std::uniform_int_distribution<unsigned>(2, 7)(rng);
        const unsigned p = std::uniform_int_distribution<unsigned>(1, q - 1)(rng);
        const auto rule = rate_rule::power(p, q);
        for (std::uint64_t n = 1; n <= 40; ++n) {
            const big_int c = rule.c(big_int(n));
            // a_m = m^{(q-p)/q}: oracle in long double away from ties
            const long double am = std::pow(static_cast<long double>(c), (long double)(q - p) / q);
            CHECK(am >= n - 1e-9L);
            if (c > 1) {
                const long double am1 = std::pow(static_cast<long double>(c - 1), (long double)(q - p) / q);
                CHECK(am1 < n + 1e-9L);
            }
        }
    }
    CHECK(rate_rule::parse("one-minus:1/3").describe() == "n^(2/3)");
    CHECK(rate_rule::parse("power:3/4").describe() == "n^(3/4)");
    CHECK_THROWS_AS(rate_rule::parse("bogus"), error);
}

TEST_CASE("no-rate grouped minimum equals brute force", "[counterexamples][tower]") {
    const auto d = tower_function(14);
    for (const auto& rule : {rate_rule::sqrt_n(), rate_rule::n_over_log(), rate_rule::power(3, 4)}) {
        std::vector<unsigned> levels;
        for (unsigned n = 1; n <= 14; ++n) levels.push_back(n);
        const auto rep = no_rate_coboundary(rule, levels, 10.0);
        for (const auto& lv : rep.levels) {
            const real_t brute = no_rate_min_bruteforce(rule, d, lv.n);
            CHECK(to_double(lv.min_excursion) == Approx(to_double(brute)).epsilon(1e-12));
        }
    }
}

TEST_CASE("no-rate excursions grow past any threshold", "[counterexamples][tower]") {
    std::vector<unsigned> levels;
    for (unsigned n = 1; n <= 30; ++n) levels.push_back(n);
    const auto rep = no_rate_coboundary(rate_rule::sqrt_n(), levels, 10.0);
    REQUIRE(rep.first_above.has_value());
    CHECK(*rep.first_above <= 30);
    CHECK(rep.levels.back().min_excursion > rep.levels[9].min_excursion);
    const auto bad_delta = [](std::uint64_t n) { return real_t(2) / boost::multiprecision::sqrt(real_t(n)); };
    CHECK_THROWS_AS(no_rate_coboundary(rate_rule::sqrt_n(), levels, 10.0, bad_delta, 1000), error);
    const auto ok_delta = [](std::uint64_t n) { return real_t(1) / real_t(n); };
    CHECK_NOTHROW(no_rate_coboundary(rate_rule::sqrt_n(), levels, 10.0, ok_delta, 1000));
}

TEST_CASE("stable samples: Gaussian and Cauchy limits", "[counterexamples][stable]") {
    const auto g = stable_sample(2.0, 1.5, 7, 200000);
    double m2 = 0;
    for (double x : g.samples) m2 += x * x;
    m2 /= g.count();
    CHECK(m2 == Approx(2 * 1.5 * 1.5).epsilon(0.02));

    auto c = stable_sample(1.0, 3.0, 9, 100001).samples;
    for (auto& x : c) x = std::abs(x);
    std::nth_element(c.begin(), c.begin() + 50000, c.end());
    CHECK(c[50000] == Approx(3.0).epsilon(0.02));
}

TEST_CASE("stable samples: characteristic function", "[counterexamples][stable][property]") {
    for (double s : {0.7, 1.3, 1.8}) {
        const auto set = stable_sample(s, 1.0, 21, 200000);
        for (double t : {0.5, 1.0}) {
            double phi = 0;
            for (double x : set.samples) phi += std::cos(t * x);
            phi /= set.count();
            CHECK(phi == Approx(std::exp(-std::pow(t, s))).margin(0.01));
        }
    }
}

TEST_CASE("stable samples are reproducible", "[counterexamples][stable]") {
    const auto a = stable_sample(1.5, 1.0, 42, 1000);
    const auto b = stable_sample(1.5, 1.0, 42, 1000);
    const auto c = stable_sample(1.5, 1.0, 43, 1000);
    CHECK(a.samples == b.samples);
    CHECK(a.samples != c.samples);
}

TEST_CASE("stable tail moments", "[counterexamples][stable]") {
    const auto set = stable_sample(1.5, 1.0, 3, 400000);
    const auto t = stable_tail_moment(set, 0.5, 10.0);
    CHECK(t.C == Approx(2.0));
    CHECK(t.bound == Approx(2 * std::pow(10.0, -1.0)));
    CHECK(t.within);
    CHECK(t.exceedances >= 100);
    CHECK_THROWS_AS(stable_tail_moment(set, 1.5, 10.0), error);
    CHECK_THROWS_AS(stable_tail_moment(stable_sample(1.5, 1.0, 3, 500), 0.5, 10.0), error);
}
