#pragma once

#include <cstdint>

#include <Eigen/Core>

namespace motun {

/// Small deterministic generator (splitmix64). Unlike the standard library
/// distributions, every draw is bit-reproducible across platforms, which the
/// report determinism guarantees rely on.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform draw in [0, 1).
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Standard normal via Marsaglia's polar method.
    double next_normal();

    /// Uniform direction on the unit sphere in R^n.
    Eigen::VectorXd unit_sphere(int n);

    /// Derives an independent stream for a worker/start index.
    static std::uint64_t mix(std::uint64_t seed, std::uint64_t index);

  private:
    std::uint64_t state_;
};

} // namespace motun
