#include <catch_amalgamated.hpp>

#include <random>

#include "ergolab/diophantine.hpp"
#include "oracles.hpp"

using namespace ergolab;

namespace {

std::vector<big_int> to_big(std::initializer_list<int> xs) {
    std::vector<big_int> out;
    for (int x : xs) out.emplace_back(x);
    return out;
}

std::string random_digits(std::mt19937_64& rng, std::size_t n) {
    std::string s = "0.";
    std::uniform_int_distribution<int> d(0, 9);
    for (std::size_t i = 0; i < n; ++i) s.push_back(static_cast<char>('0' + d(rng)));
    s.back() = static_cast<char>('1' + d(rng) % 9);
    return s;
}

} // namespace

TEST_CASE("golden mean expands to all ones", "[diophantine]") {
    const auto pq = cf_expand(irrational_spec::golden(), 10);
    CHECK(pq.a0 == 0);
    REQUIRE(pq.depth() == 10);
    for (const auto& a : pq.terms) CHECK(a == 1);
}

TEST_CASE("sqrt2 - 1 expands to all twos", "[diophantine]") {
    const auto pq = cf_expand(irrational_spec::sqrt2_minus_1(), 8);
    CHECK(pq.a0 == 0);
    for (const auto& a : pq.terms) CHECK(a == 2);
}

TEST_CASE("rational input is rejected", "[diophantine]") {
    try {
        cf_expand(irrational_spec::rational(big_rational(1, 3)), 5);
        FAIL("expected RationalInput");
    } catch (const error& e) {
        CHECK(e.code() == errc::rational_input);
    }
    // A perfect-square radicand collapses to a rational.
    CHECK_THROWS_AS(cf_expand(irrational_spec::surd(1, 9, 2), 4), error);
}

TEST_CASE("terminating decimal and undersized precision", "[diophantine]") {
    try {
        cf_expand(irrational_spec::decimal("0.25", 200), 6);
        FAIL("expected an error");
    } catch (const error& e) {
        CHECK(e.code() == errc::rational_input);
    }
    try {
        cf_expand(irrational_spec::decimal("0.7071067811865475", 20), 30);
        FAIL("expected an error");
    } catch (const error& e) {
        CHECK(e.code() == errc::insufficient_precision);
    }
}

TEST_CASE("e - 2 has the pattern 1, 2, 1, 1, 4, 1, 1, 6", "[diophantine]") {
    const auto pq = cf_expand(irrational_spec::e_minus_2(), 9);
    CHECK(pq.a0 == 0);
    CHECK(pq.terms == to_big({1, 2, 1, 1, 4, 1, 1, 6, 1}));
}

TEST_CASE("surd expansion matches the integer recurrence", "[diophantine][property]") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> pd(-20, 20), dd(2, 500), qd(1, 30);
    int checked = 0;
    while (checked < 40) {
        const big_int P = pd(rng), D = dd(rng), Q = qd(rng) * (rng() % 2 ? 1 : -1);
        const big_int s = isqrt(D);
        if (s * s == D) continue;
        big_int a0;
        const auto expected = oracle::surd_quotients(P, D, Q, 30, a0);
        const auto pq = cf_expand(irrational_spec::surd(P, D, Q), 30);
        INFO("surd " << P << "," << D << "," << Q);
        CHECK(pq.a0 == a0);
        CHECK(pq.terms == expected);
        ++checked;
    }
}

TEST_CASE("convergents follow the documented indexing", "[diophantine]") {
    const auto golden = cf_expand(irrational_spec::golden(), 10);
    const auto cg = convergents(golden, 9);
    const std::vector<int> fib{1, 1, 2, 3, 5, 8, 13, 21, 34};
    for (std::size_t n = 0; n < cg.size(); ++n) {
        CHECK(cg[n].index == n);
        CHECK(cg[n].q == fib[n]);
    }
    const auto root2 = cf_expand(irrational_spec::sqrt2_minus_1(), 8);
    const auto cr = convergents(root2, 5);
    const std::vector<int> pell{1, 2, 5, 12, 29};
    for (std::size_t n = 0; n < cr.size(); ++n) CHECK(cr[n].q == pell[n]);
    CHECK_THROWS_AS(convergents(root2, 20), error);
}

TEST_CASE("determinant identity and growth hold exactly", "[diophantine][property]") {
    std::mt19937_64 rng(5);
    std::vector<irrational_spec> specs{irrational_spec::golden(), irrational_spec::sqrt2_minus_1(),
                                       irrational_spec::e_minus_2(),
                                       irrational_spec::decimal(random_digits(rng, 200), 660)};
    for (const auto& spec : specs) {
        const auto pq = cf_expand(spec, 50);
        const auto c = convergents(pq, 51);
        big_int fa(1), fb(1); // Fibonacci lower bound F_n with F_0 = F_1 = 1
        for (std::size_t n = 1; n < c.size(); ++n) {
            const big_int det = c[n].p * c[n - 1].q - c[n - 1].p * c[n].q;
            CHECK(det == ((n - 1) % 2 == 0 ? 1 : -1));
            CHECK(c[n].q >= c[n - 1].q);
            if (n >= 2) CHECK(c[n].q > c[n - 1].q);
            CHECK(c[n].q >= fb);
            const big_int fn = fa + fb;
            fa = fb;
            fb = fn;
        }
    }
}

TEST_CASE("rotation number caches certified convergents", "[diophantine]") {
    const auto alpha = rotation_number::from_spec(irrational_spec::golden(), 40);
    CHECK(alpha.to_double() == Catch::Approx((std::sqrt(5.0) - 1) / 2).epsilon(1e-15));
    CHECK(alpha.err_ulps() <= 4);
    for (std::size_t n = 0; n + 1 < alpha.convergents().size(); ++n) {
        const auto& c = alpha.convergent_at(n);
        const auto& d = alpha.convergent_at(n + 1);
        const big_rational dev = abs(alpha.lo() - big_rational(c.p, c.q));
        CHECK(dev * big_rational(c.q * d.q) <= 1);
    }
    CHECK_THROWS_AS(alpha.convergent_at(100), error);
    // frac(alpha) to 30 digits.
    const big_rational thirty = big_rational(big_int("618033988749894848204586834365"), pow_int(big_int(10), 30));
    CHECK(abs(fixed::to_rational(alpha.value()) - thirty) < big_rational(1, pow_int(big_int(10), 29)));
}

TEST_CASE("return time matches a brute scan", "[diophantine]") {
    const auto golden = rotation_number::from_spec(irrational_spec::golden());
    const auto root2 = rotation_number::from_spec(irrational_spec::sqrt2_minus_1());
    for (std::size_t n : {3u, 5u, 6u, 9u})
        CHECK(return_time(golden, circle_point{}, n) == 0);

    const long double ga = (std::sqrt(5.0L) - 1) / 2;
    const long double ra = std::sqrt(2.0L) - 1;
    // golden q_6 = 13, x = 0.5
    REQUIRE(golden.q(6) == 13);
    const auto k1 = return_time(golden, {fixed::from_double(0.5), 0}, 6);
    CHECK(k1 == oracle::scan_return(0.5L, ga, 2.0L / 13, 13));
    // sqrt2 - 1 with q_4 = 29, x = 0.25
    REQUIRE(root2.q(4) == 29);
    const auto k2 = return_time(root2, {fixed::from_double(0.25), 0}, 4);
    CHECK(k2 == oracle::scan_return(0.25L, ra, 2.0L / 29, 29));
    CHECK(std::fmod(0.25L + k2 * ra, 1.0L) <= 2.0L / 29);
}

TEST_CASE("return time is bounded by q_n for random starts", "[diophantine][property]") {
    const auto golden = rotation_number::from_spec(irrational_spec::golden());
    const long double ga = (std::sqrt(5.0L) - 1) / 2;
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const double x = u(rng);
        const std::size_t n = 3 + i % 20;
        const auto q = static_cast<std::uint64_t>(golden.q(n));
        const auto k = return_time(golden, {fixed::from_double(x), 0}, n);
        CHECK(k <= q);
        CHECK(k == oracle::scan_return(static_cast<long double>(x), ga, 2.0L / q, q));
    }
}

TEST_CASE("approximation indices", "[diophantine]") {
    const auto golden = rotation_number::from_spec(irrational_spec::golden());
    const auto root2 = rotation_number::from_spec(irrational_spec::sqrt2_minus_1());

    const auto same = approx_indices(golden, golden, 0.0, 100);
    REQUIRE(same.size() == 1);
    CHECK(same[0] == 1);

    const auto hits = approx_indices(golden, root2, 1e-4, 1000000);
    REQUIRE(!hits.empty());
    const long double ga = (std::sqrt(5.0L) - 1) / 2, ra = std::sqrt(2.0L) - 1;
    for (auto n : hits) {
        long double d = std::fmod(n * ga - ra, 1.0L);
        if (d < 0) d += 1;
        d = std::min(d, 1 - d);
        CHECK(d < 1e-4L);
    }
    CHECK(std::is_sorted(hits.begin(), hits.end()));
    CHECK_THROWS_AS(approx_indices(golden, root2, 1e-9, 100), error);
}

TEST_CASE("indices near zero include convergent denominators", "[diophantine]") {
    const auto golden = rotation_number::from_spec(irrational_spec::golden());
    // An irrational beta within 1e-40 of zero stands in for beta = 0.
    const auto tiny = rotation_number::from_spec(irrational_spec::decimal(
        "0.0000000000000000000000000000000000000000"
        "70710678118654752440084436210484903928483593768847403658833986899536623923105351942519376716",
        400),
        4);
    const auto hits = approx_indices(golden, tiny, 1e-4, 20000);
    // ||q_m alpha|| is about 1/(sqrt(5) q_m), below 1e-4 once q_m >= 4500.
    for (std::size_t m = 19; m < 22; ++m) {
        const auto q = static_cast<std::uint64_t>(golden.q(m));
        if (q > 20000) break;
        CHECK(std::find(hits.begin(), hits.end(), q) != hits.end());
    }
}
