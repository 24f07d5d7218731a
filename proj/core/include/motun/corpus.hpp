#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "motun/problem.hpp"

namespace motun {

struct CorpusEntry {
    std::string name;
    ProblemSpec spec;
    std::pair<int, int> reference_dims; ///< (m, n)
};

/// Registry lookup. Throws UnknownProblem for unregistered names.
const ProblemSpec& get_problem(const std::string& name);

const CorpusEntry& get_corpus_entry(const std::string& name);

/// Registered names in deterministic alphabetical order.
std::vector<std::string> list_problems();

enum class StartMode { Lattice, Random };

const char* to_string(StartMode m);
StartMode start_mode_from_string(const std::string& s);

/// Uniformly distributed start points inside the box. Lattice mode lays a
/// ceil(N^(1/n))-per-axis grid truncated to N points in row-major order
/// (last coordinate fastest); random mode draws i.i.d. uniform points with
/// the given seed. Both are deterministic. Throws UnsupportedProblem when the
/// problem has no box.
std::vector<Vector> uniform_starts(const ProblemSpec& problem, int count, StartMode mode,
                                   std::uint64_t seed);

struct GradientCheckResult {
    bool pass = false;
    double max_error = 0.0; ///< worst |analytic - fd| over the mixed tolerance
    int samples = 0;
};

/// Compares analytic Jacobians against central differences (h = 1e-6) at
/// uniformly sampled interior points; an entry passes when
/// |analytic - fd| <= 1e-7 + 1e-5 * max(|analytic|, |fd|). Sampling is inset
/// from the box faces by 1e-3 of the range so that problems with unbounded
/// boundary derivatives are probed on their smooth interior.
GradientCheckResult check_gradients(const ProblemSpec& problem, int samples,
                                    std::uint64_t seed = 12345);

} // namespace motun
