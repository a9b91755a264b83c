// int |M_n (I-T)g|^r for g the indicator of [0, 1/2) under the golden
// rotation, printed against 2 n^-r int |g|^r.

#include <cstdio>
#include <vector>

#include "ergolab/diophantine.hpp"
#include "ergolab/lr_metric.hpp"
#include "ergolab/step_function.hpp"

int main() {
    using namespace ergolab;
    const auto alpha = rotation_number::parse("golden");
    const double r = 0.5;
    const auto g = step_function::arc(fixed_t(0), fixed::half());
    const step_function f = g - g.shifted(alpha.value());
    const std::vector<std::uint64_t> ns{1, 10, 100, 1000, 10000};
    const real_t gn = lr_quasinorm_exact(g, r);
    std::printf("%8s %24s %24s\n", "n", "int |M_n f|^r", "bound");
    for (const auto& e : mean_convergence_profile(f, alpha, r, real_t(0), ns)) {
        const real_t bound = 2 * gn * real_pow(real_t(e.n), -r);
        std::printf("%8llu %24.17g %24.17g\n", static_cast<unsigned long long>(e.n), to_double(e.exact),
                    to_double(bound));
    }
}
