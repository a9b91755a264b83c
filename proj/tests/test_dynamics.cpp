#include <catch_amalgamated.hpp>

#include <random>
#include <set>

#include "ergolab/dynamics.hpp"
#include "ergolab/lr_metric.hpp"
#include "oracles.hpp"

using namespace ergolab;

namespace {

const rotation_number& golden() {
    static const auto a = rotation_number::from_spec(irrational_spec::golden());
    return a;
}

/// A random canonical step function with `pieces` pieces and small integer values.
step_function random_step(std::mt19937_64& rng, std::size_t pieces) {
    std::set<double> cuts;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    while (cuts.size() + 1 < pieces) cuts.insert(u(rng));
    std::vector<fixed_t> br{fixed_t(0)};
    for (double c : cuts) br.push_back(fixed::from_double(c));
    std::vector<real_t> vals;
    std::uniform_int_distribution<int> v(-3, 3);
    for (std::size_t i = 0; i < br.size(); ++i) vals.push_back(real_t(v(rng)));
    return step_function::from_pieces(br, vals);
}

const step_function& half_indicator() {
    static const auto f = step_function::arc(fixed_t(0), fixed::half());
    return f;
}

double eval_double(const step_function& f, double t) {
    return to_double(f(fixed::from_double(t - std::floor(t))));
}

} // namespace

TEST_CASE("rotation keeps certified error and returns near x after q_n", "[dynamics]") {
    const auto& a = golden();
    const circle_point x{fixed::from_double(0.3), 0};
    CHECK(rotate(a, x, 0) == x);
    const auto y = rotate(a, circle_point{}, 1);
    CHECK(y.value == a.value());
    for (std::size_t n = 2; n < 30; ++n) {
        const auto q = static_cast<std::uint64_t>(a.q(n));
        const auto z = rotate(a, x, q);
        const double d = fixed::to_double(fixed::distance(z.value, x.value));
        CHECK(d <= 1.0 / static_cast<double>(a.q(n + 1)));
        CHECK(z.err < (std::uint64_t(1) << 40)); // far below 2^-100
    }
}

TEST_CASE("averages of constants and measure preservation", "[dynamics]") {
    const auto one = step_function::constant(1);
    for (std::uint64_t n : {1u, 2u, 17u, 300u}) CHECK(birkhoff_step_average(one, golden(), n) == one);

    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 20; ++trial) {
        const auto f = random_step(rng, 2 + trial % 7);
        const std::uint64_t n = 1 + rng() % 200;
        const auto m = birkhoff_step_average(f, golden(), n);
        CHECK(to_double(abs(m.integral() - f.integral())) < 1e-30);
        CHECK(m.size() <= n * f.size());
    }
}

TEST_CASE("two-copy average of a half indicator", "[dynamics]") {
    const auto m = birkhoff_step_average(half_indicator(), golden(), 2);
    REQUIRE(m.size() == 4);
    std::set<double> vals;
    for (const auto& v : m.values()) vals.insert(to_double(v));
    CHECK(vals == std::set<double>{0.0, 0.5, 1.0});
    CHECK(to_double(m.integral()) == Catch::Approx(0.5).margin(1e-30));
    // Oracle: (f(t) + f(t + alpha))/2 at the midpoints of the direct partition.
    const double a = golden().to_double();
    std::vector<double> cuts{0.0, 0.5, std::fmod(1 - a, 1.0), std::fmod(1.5 - a, 1.0)};
    std::sort(cuts.begin(), cuts.end());
    cuts.push_back(1.0);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double t = 0.5 * (cuts[i] + cuts[i + 1]);
        const double expected = 0.5 * (eval_double(half_indicator(), t) + eval_double(half_indicator(), t + a));
        CHECK(eval_double(m, t) == expected);
    }
}

TEST_CASE("averages agree with pointwise orbit sums", "[dynamics][property]") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const long double a = (std::sqrt(5.0L) - 1) / 2;
    for (int trial = 0; trial < 10; ++trial) {
        const auto f = random_step(rng, 5);
        const std::uint64_t n = 5 + rng() % 60;
        const auto m = birkhoff_step_average(f, golden(), n);
        for (int s = 0; s < 50; ++s) {
            const double t = u(rng);
            long double sum = 0;
            for (std::uint64_t k = 0; k < n; ++k)
                sum += eval_double(f, static_cast<double>(std::fmod(t + k * a, 1.0L)));
            CHECK(eval_double(m, t) == Catch::Approx(static_cast<double>(sum / n)).margin(1e-12));
        }
    }
}

TEST_CASE("telescoping residual vanishes", "[dynamics]") {
    const auto t1 = telescoping_decomposition(half_indicator(), golden(), 1, 0.5);
    CHECK(t1.g == step_function::constant(0));
    const auto t2 = telescoping_decomposition(half_indicator(), golden(), 2, 0.5);
    CHECK(t2.residual_check == 0);
    std::mt19937_64 rng(4);
    const auto f = random_step(rng, 5);
    const auto t50 = telescoping_decomposition(f, golden(), 50, 0.3);
    CHECK(to_double(abs(t50.residual_check)) < 1e-25);
}

TEST_CASE("Koopman operator is an exact isometry", "[dynamics][property]") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 30; ++trial) {
        const auto f = random_step(rng, 2 + trial % 9);
        const auto tf = koopman(f, golden(), 1 + rng() % 1000);
        for (double r : {0.1, 0.3, 0.5, 0.9}) CHECK(lr_quasinorm_exact(tf, r) == lr_quasinorm_exact(f, r));
    }
}

TEST_CASE("averages are asymptotically invariant", "[dynamics][property]") {
    // d_r(T M_n f, M_n f) = int |T^n f - f|^r / n^r <= 2 int |f/n|^r
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 10; ++trial) {
        const auto f = random_step(rng, 4);
        const double r = 0.2 + 0.07 * trial;
        for (std::uint64_t n : {3u, 20u, 111u}) {
            const auto m = birkhoff_step_average(f, golden(), n);
            const real_t lhs = lr_quasinorm_exact(koopman(m, golden()) - m, r);
            const real_t mid = lr_quasinorm_exact(koopman(f, golden(), n) - f, r) / real_pow(real_t(n), r);
            const real_t bound = 2 * lr_quasinorm_exact(f, r) / real_pow(real_t(n), r);
            CHECK(to_double(abs(lhs - mid)) < 1e-25);
            CHECK(lhs <= bound);
        }
    }
}

TEST_CASE("rho-power indices", "[dynamics]") {
    const auto two = subseq_indices(2.0, 5);
    CHECK(two == std::vector<big_int>{2, 4, 8, 16, 32});
    const auto three_halves = subseq_indices(1.5, 5);
    CHECK(three_halves == std::vector<big_int>{1, 2, 3, 5, 7});
    const auto many = subseq_indices(big_rational(11, 10), 200);
    CHECK(std::is_sorted(many.begin(), many.end()));
    CHECK(many.back() > 100000);
    CHECK_THROWS_AS(subseq_indices(1.0, 3), error);
}

TEST_CASE("adding machine towers partition the circle", "[dynamics]") {
    const auto t3 = odometer_tower(3);
    CHECK(t3.base.k == 0);
    CHECK(t3.base.length() == big_rational(1, 8));
    CHECK(t3.height == 8);
    CHECK(t3.verify_partition());
    const auto t1 = odometer_tower(1);
    CHECK(t1.level(0).lo() == 0);
    CHECK(t1.level(1).lo() == big_rational(1, 2));
    for (unsigned n = 1; n <= 20; ++n) CHECK(odometer_tower(n).verify_partition());
    CHECK_THROWS_AS(odometer_tower(31), error);
    CHECK_NOTHROW(odometer_tower(30).level((1ull << 30) - 1));
}

TEST_CASE("odometer on coordinates matches the cylinder action", "[dynamics][property]") {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 200; ++trial) {
        const unsigned n = 1 + trial % 12;
        const std::uint64_t k = rng() % (1ull << n);
        // Pick a point inside cylinder k and apply theta once.
        const fixed_t x = (fixed_t(k) << (fixed_bits - n)) | (fixed_t(rng()) << 8);
        const fixed_t y = odometer::theta(x);
        const auto ky = static_cast<std::uint64_t>(y >> (fixed_bits - n));
        CHECK(ky == odometer::apply(k, 1, n));
    }
    // All ones maps to zero.
    CHECK(odometer::theta(fixed_t(0) - 1) == 0);
}
