#include "motun/pareto.hpp"

#include <algorithm>

#include "motun/errors.hpp"

namespace motun {

const char* to_string(Phase p) {
    return p == Phase::BeforeTunnel ? "BeforeTunnel" : "AfterTunnel";
}

bool dominates(const Vector& a, const Vector& b) {
    if (a.size() != b.size())
        throw DimensionMismatch("dominates: objective vectors of different dimension");
    bool strict = false;
    for (Eigen::Index k = 0; k < a.size(); ++k) {
        if (a[k] > b[k])
            return false;
        if (a[k] < b[k])
            strict = true;
    }
    return strict;
}

namespace {

constexpr double kSnap = 1e-10;

bool snapped_equal(const Vector& a, const Vector& b) {
    return (a - b).lpNorm<Eigen::Infinity>() <= kSnap;
}

} // namespace

ParetoArchive filter_nondominated(const ParetoArchive& archive) {
    std::vector<const ArchiveEntry*> ordered;
    ordered.reserve(archive.entries.size());
    for (const ArchiveEntry& e : archive.entries)
        ordered.push_back(&e);
    std::stable_sort(ordered.begin(), ordered.end(),
                     [](const ArchiveEntry* a, const ArchiveEntry* b) {
                         return a->run_id < b->run_id;
                     });

    // Collapse numerically identical objective vectors, keeping the first.
    std::vector<const ArchiveEntry*> unique;
    for (const ArchiveEntry* e : ordered) {
        const bool duplicate = std::any_of(unique.begin(), unique.end(),
                                           [&](const ArchiveEntry* kept) {
                                               return snapped_equal(kept->fvals, e->fvals);
                                           });
        if (!duplicate)
            unique.push_back(e);
    }

    ParetoArchive out;
    for (const ArchiveEntry* e : unique) {
        const bool dominated = std::any_of(unique.begin(), unique.end(),
                                           [&](const ArchiveEntry* other) {
                                               return other != e &&
                                                      dominates(other->fvals, e->fvals);
                                           });
        if (!dominated)
            out.entries.push_back(*e);
    }
    return out;
}

std::size_t front_size(const ParetoArchive& archive) {
    return filter_nondominated(archive).entries.size();
}

} // namespace motun
