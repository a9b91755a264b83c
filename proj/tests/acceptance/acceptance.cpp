// Acceptance run: thirteen criteria, one PASS/FAIL line each. Exit status is
// nonzero when any criterion fails. Most criteria drive the experiment
// registry with fixed parameters; a few add direct library checks.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "ergolab/counterexamples.hpp"
#include "ergolab/diophantine.hpp"
#include "ergolab/experiments.hpp"
#include "ergolab/hardy.hpp"

using namespace ergolab;
namespace ex = ergolab::experiments;

namespace {

struct verdict {
    bool pass = true;
    std::string detail;

    void need(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
};

ex::experiment_report run(const std::string& id, ex::json parameters) {
    ex::experiment_config cfg;
    cfg.experiment = id;
    cfg.parameters = std::move(parameters);
    return ex::run_experiment(cfg);
}

// Every certificate whose inequality contains `filter` must pass.
void need_certificates(verdict& v, const ex::experiment_report& rep, const std::string& filter = "") {
    for (const auto& c : rep.output.certificates) {
        if (!filter.empty() && c.inequality.find(filter) == std::string::npos) continue;
        v.need(c.pass, rep.id + ": " + c.inequality + " [" + ex::render17(c.lhs) + " vs " + ex::render17(c.rhs) + "]");
    }
}

std::string random_digits(std::mt19937_64& rng, std::size_t n) {
    std::string s;
    std::uniform_int_distribution<int> d(0, 9);
    for (std::size_t i = 0; i < n; ++i) s.push_back(static_cast<char>('0' + d(rng)));
    s.back() = static_cast<char>('1' + d(rng) % 9);
    return s;
}

verdict cf_criterion() {
    verdict v;
    const auto g = cf_expand(irrational_spec::golden(), 50);
    bool ones = true;
    for (const auto& a : g.terms) ones = ones && a == 1;
    v.need(ones, "golden partial quotients are not all 1");
    const auto c = convergents(g, 9);
    const std::vector<int> fib{1, 1, 2, 3, 5, 8, 13, 21, 34};
    for (std::size_t n = 0; n < fib.size(); ++n)
        v.need(c[n].q == fib[n], "golden q_" + std::to_string(n) + " = " + c[n].q.str());
    std::mt19937_64 rng(2024);
    for (const std::string& alpha : {std::string("golden"), std::string("sqrt2-1"),
                                    "decimal:0." + random_digits(rng, 200) + "@660"})
        need_certificates(v, run("cf", {{"alpha", alpha}, {"count", 50}}), "p_n q_{n-1}");
    return v;
}

verdict epsilon_criterion() {
    verdict v;
    for (const char* eps0 : {"3/5", "3/4", "9/10"})
        need_certificates(v, run("epsilon", {{"eps0", eps0}, {"J", 200}, {"r", 0.25}}));
    return v;
}

verdict coboundary_criterion() {
    verdict v;
    for (double r : {0.3, 0.5, 0.8})
        need_certificates(v, run("coboundary", {{"g", "arc:0,1/2"}, {"r", r}, {"n_max", 10000}}));
    return v;
}

verdict gh_criterion() {
    verdict v;
    for (int N = 1; N <= 1000; ++N) {
        const auto rep = run("gh", {{"f", "const:1"}, {"r", 0.5}, {"N", N}});
        for (const auto& c : rep.output.certificates)
            if (!c.pass) v.need(false, "N = " + std::to_string(N) + ": " + c.inequality);
        if (!v.pass) break;
    }
    need_certificates(v, run("gh", {{"f", "coboundary:arc:0,1/2"}, {"r", 0.5}, {"N", 1000}, {"variant", "supremum"}}));
    return v;
}

verdict conze_criterion() {
    verdict v;
    const auto rep = run("conze", {{"r", 0.5}, {"n_min", 6}, {"n_max", 12}, {"terms", 40}, {"points", 100}});
    need_certificates(v, rep);
    return v;
}

verdict tower_criterion() {
    verdict v;
    std::vector<int> levels;
    for (int n = 1; n <= 20; ++n) levels.push_back(n);
    need_certificates(v, run("tower", {{"r", 0.5}, {"levels", levels}}));
    return v;
}

verdict rate_criterion() {
    verdict v;
    need_certificates(v, run("rate", {{"rule", "sqrt"}, {"n_max", 50}}));
    bool threw = false;
    try {
        rate_schedule(rate_rule::parse("n"), 3);
    } catch (const error& e) {
        threw = e.code() == errc::invalid_rate;
    }
    v.need(threw, "b_n = n did not raise InvalidRate");
    return v;
}

verdict stable_criterion() {
    verdict v;
    need_certificates(v, run("stable", {{"s", 0.8}, {"sigma", 0.5}, {"r", 0.4}, {"K", 10}, {"samples", 1000000}}));
    return v;
}

verdict hardy_integral_criterion() {
    verdict v;
    integration_options opt;
    opt.tol = 1e-10;
    const pole_sum f = pole_sum::cauchy();
    const double closed = std::sqrt(2.0) * std::beta(0.25, 0.5);
    const auto b = boundary_quasinorm(f, 0.5, opt).raw();
    v.need(std::abs(b.value - closed) <= 1e-4,
           "boundary " + ex::render17(b.value) + " vs " + ex::render17(closed));
    const std::vector<double> radii{0.5, 0.9, 0.99, 0.999, 0.9999, 0.99999, 0.999999, 0.9999999};
    const auto prof = hardy_quasinorm(f, 0.5, radii, opt);
    v.need(prof.monotone, "radial means not monotone");
    const double sup_raw = prof.supremum * two_pi;
    v.need(std::abs(sup_raw - closed) <= 1e-3,
           "radial supremum " + ex::render17(sup_raw) + " vs " + ex::render17(closed));
    return v;
}

verdict hardy_mean_criterion() {
    verdict v;
    need_certificates(v, run("hardy-mean", {{"f", "poly:2,3"}, {"N", {10, 100, 1000, 10000}}, {"tol", 1e-10}}),
                      "sin(pi N alpha)");
    need_certificates(v, run("hardy-mean", {{"f", "cauchy"}, {"N", {10, 10000}}, {"decay_factor", 0.1}}),
                      "decay_factor");
    return v;
}

verdict return_ratio_criterion() {
    verdict v;
    const auto rep = run("return-ratio", {{"n", {6, 8, 10}}, {"points", 100}});
    need_certificates(v, rep, ">= 1/2");
    bool corrected = true;
    for (const auto& c : rep.output.certificates)
        if (c.inequality.find("4 pi") != std::string::npos) corrected = corrected && c.pass;
    if (!v.pass) v.detail += corrected ? " (q_n/(4 pi l) and 1/(4 pi) bounds hold)" : " (corrected bounds fail too)";
    return v;
}

verdict wct_criterion() {
    verdict v;
    need_certificates(v, run("wct-approx", {{"tol", 1e-4}, {"limit", 1000000}, {"f", "arc:0,1/2"}, {"threshold", 1e-3}}));
    return v;
}

verdict rho_criterion() {
    verdict v;
    need_certificates(v, run("rho-subseq", {{"rho", "2"}, {"J", 20}, {"points", 100}, {"threshold", 1e-3}}));
    return v;
}

struct criterion {
    int number;
    const char* name;
    double budget_seconds;
    std::function<verdict()> body;
};

} // namespace

int main() {
    const std::vector<criterion> all{
        {1, "continued fractions and the determinant identity", 1, cf_criterion},
        {2, "epsilon sequence invariants to j = 200", 5, epsilon_criterion},
        {3, "coboundary decay for n <= 10^4", 60, coboundary_criterion},
        {4, "(gh) closed form and the coboundary supremum", 60, gh_criterion},
        {5, "Conze return-time lower bounds", 120, conze_criterion},
        {6, "tower blow-up certificates, n <= 20", 10, tower_criterion},
        {7, "rate schedule identities and InvalidRate", 5, rate_criterion},
        {8, "stable tail moment bound", 30, stable_criterion},
        {9, "Hardy boundary integral and radial limit", 30, hardy_integral_criterion},
        {10, "mean ergodic theorem on H^r", 600, hardy_mean_criterion},
        {11, "return ratio >= 1/2", 30, return_ratio_criterion},
        {12, "approximation of S by T^{n_j}", 60, wct_criterion},
        {13, "rho-subsequence decay", 60, rho_criterion},
    };
    int failed = 0;
    for (const auto& c : all) {
        const auto t0 = std::chrono::steady_clock::now();
        verdict v;
        try {
            v = c.body();
        } catch (const std::exception& e) {
            v.need(false, std::string("exception: ") + e.what());
        }
        const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        v.need(dt <= c.budget_seconds, "over the time budget");
        if (!v.pass) ++failed;
        std::printf("[%s] %2d %s (%.2fs / %.0fs)%s%s\n", v.pass ? "PASS" : "FAIL", c.number, c.name, dt,
                    c.budget_seconds, v.detail.empty() ? "" : ": ", v.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(all.size()) - failed, all.size());
    return failed == 0 ? 0 : 1;
}
