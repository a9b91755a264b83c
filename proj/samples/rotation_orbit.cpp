// Orbit of 0 under the golden rotation next to the convergent denominators:
// the closest return before step q_{n+1} happens at step q_n.

#include <cstdio>

#include "ergolab/diophantine.hpp"
#include "ergolab/dynamics.hpp"

int main() {
    using namespace ergolab;
    const auto alpha = rotation_number::parse("golden");
    std::printf("alpha = %.17f\n", alpha.to_double());
    std::printf("%4s %8s %24s\n", "n", "q_n", "||q_n alpha||");
    for (std::size_t n = 1; n <= 12; ++n) {
        const auto q = static_cast<std::uint64_t>(alpha.q(n));
        const auto x = alpha.orbit(circle_point{}, q);
        std::printf("%4zu %8llu %24.17g\n", n, static_cast<unsigned long long>(q),
                    std::abs(fixed::centered(x.value)));
    }
}
