#pragma once

#include <cstddef>
#include <vector>

#include "motun/criticality.hpp"
#include "motun/problem.hpp"

namespace motun {

enum class Phase { BeforeTunnel, AfterTunnel };

const char* to_string(Phase p);

struct ArchiveEntry {
    Vector x;
    Vector fvals;
    Phase phase = Phase::BeforeTunnel;
    CriticalityCertificate certificate;
    int run_id = 0;
};

/// Raw solution archive; the nondominated view is obtained by filtering.
struct ParetoArchive {
    std::vector<ArchiveEntry> entries;
};

/// Exact componentwise dominance: a <= b and a != b, no tolerance.
/// Throws DimensionMismatch.
bool dominates(const Vector& a, const Vector& b);

/// Entries not dominated by any other entry. Objective vectors equal within a
/// 1e-10 componentwise snap are collapsed first, keeping the first in run_id
/// order, so that floating-point jitter does not inflate front counts.
ParetoArchive filter_nondominated(const ParetoArchive& archive);

/// Size of the filtered view.
std::size_t front_size(const ParetoArchive& archive);

} // namespace motun
