#include "motun/rng.hpp"

#include <cmath>

namespace motun {

double Rng::next_normal() {
    // Marsaglia polar method; discards the second variate to keep the state
    // trajectory independent of call pairing.
    for (;;) {
        const double u = 2.0 * next_double() - 1.0;
        const double v = 2.0 * next_double() - 1.0;
        const double s = u * u + v * v;
        if (s > 0.0 && s < 1.0)
            return u * std::sqrt(-2.0 * std::log(s) / s);
    }
}

Eigen::VectorXd Rng::unit_sphere(int n) {
    Eigen::VectorXd u(n);
    for (;;) {
        for (int j = 0; j < n; ++j)
            u[j] = next_normal();
        const double norm = u.norm();
        if (norm > 1e-12)
            return u / norm;
    }
}

std::uint64_t Rng::mix(std::uint64_t seed, std::uint64_t index) {
    Rng r(seed ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
    r.next_u64();
    return r.next_u64();
}

} // namespace motun
