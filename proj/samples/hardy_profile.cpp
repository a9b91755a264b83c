// Radial L^{1/2} means of 1/(1-z) approaching the boundary value
// sqrt(2) B(1/4, 1/2) (unnormalized measure).

#include <cmath>
#include <cstdio>
#include <vector>

#include "ergolab/hardy/means.hpp"

int main() {
    using namespace ergolab;
    const pole_sum f = pole_sum::cauchy();
    integration_options opt;
    opt.tol = 1e-10;
    const std::vector<double> radii{0.5, 0.9, 0.99, 0.999, 0.9999, 0.99999, 0.999999};
    const auto prof = hardy_quasinorm(f, 0.5, radii, opt);
    for (const auto& e : prof.entries) std::printf("R = %-10g %20.12f\n", e.R, e.result.raw().value);
    std::printf("boundary     %20.12f\n", boundary_quasinorm(f, 0.5, opt).raw().value);
    std::printf("closed form  %20.12f\n", std::sqrt(2.0) * std::beta(0.25, 0.5));
}
