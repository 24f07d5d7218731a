#include <doctest.h>

#include <vector>

#include <motun/pareto.hpp>
#include <motun/rng.hpp>

#include "oracles.hpp"

using namespace motun;

namespace {

ArchiveEntry entry(std::initializer_list<double> f, int run_id) {
    ArchiveEntry e;
    e.fvals = Vector(static_cast<Eigen::Index>(f.size()));
    Eigen::Index i = 0;
    for (const double v : f)
        e.fvals[i++] = v;
    e.x = Vector::Zero(1);
    e.run_id = run_id;
    return e;
}

ParetoArchive random_archive(Rng& rng, int count, int m) {
    ParetoArchive archive;
    for (int i = 0; i < count; ++i) {
        ArchiveEntry e;
        e.x = Vector::Zero(1);
        e.run_id = i;
        e.fvals = Vector(m);
        for (int k = 0; k < m; ++k)
            e.fvals[k] = rng.next_double();
        archive.entries.push_back(std::move(e));
    }
    return archive;
}

} // namespace

TEST_CASE("dominates") {
    CHECK(dominates(Vector{{1.0, 1.0}}, Vector{{2.0, 2.0}}));
    CHECK_FALSE(dominates(Vector{{1.0, 2.0}}, Vector{{1.0, 2.0}}));
    CHECK_FALSE(dominates(Vector{{1.0, 3.0}}, Vector{{2.0, 2.0}}));
    CHECK(dominates(Vector{{1.0, 2.0}}, Vector{{1.0, 3.0}}));
    CHECK_THROWS_AS(dominates(Vector{{1.0}}, Vector{{1.0, 2.0}}), DimensionMismatch);
}

TEST_CASE("dominance is a strict partial order") {
    Rng rng(6);
    for (int trial = 0; trial < 500; ++trial) {
        Vector a(3), b(3), c(3);
        for (int k = 0; k < 3; ++k) {
            // coarse grid so that coincidences and comparable pairs occur
            a[k] = static_cast<double>(rng.next_u64() % 4);
            b[k] = static_cast<double>(rng.next_u64() % 4);
            c[k] = static_cast<double>(rng.next_u64() % 4);
        }
        CHECK_FALSE(dominates(a, a));
        if (dominates(a, b))
            CHECK_FALSE(dominates(b, a));
        if (dominates(a, b) && dominates(b, c))
            CHECK(dominates(a, c));
    }
}

TEST_CASE("filter_nondominated keeps exactly the nondominated entries") {
    ParetoArchive archive;
    archive.entries = {entry({1.0, 2.0}, 0), entry({2.0, 1.0}, 1), entry({2.0, 2.0}, 2)};
    const ParetoArchive front = filter_nondominated(archive);
    REQUIRE(front.entries.size() == 2);
    CHECK(front.entries[0].run_id == 0);
    CHECK(front.entries[1].run_id == 1);
}

TEST_CASE("identical entries collapse to the first by run_id") {
    ParetoArchive archive;
    archive.entries = {entry({1.0, 1.0}, 3), entry({1.0, 1.0}, 1), entry({1.0, 1.0}, 2)};
    const ParetoArchive front = filter_nondominated(archive);
    REQUIRE(front.entries.size() == 1);
    CHECK(front.entries[0].run_id == 1);
}

TEST_CASE("near-duplicates within the snap tolerance collapse") {
    ParetoArchive archive;
    archive.entries = {entry({1.0, 1.0}, 0), entry({1.0 + 5e-11, 1.0 - 5e-11}, 1)};
    CHECK(front_size(archive) == 1);
}

TEST_CASE("filter matches the brute-force oracle and is idempotent") {
    Rng rng(2718);
    for (const int m : {2, 3, 4}) {
        const ParetoArchive archive = random_archive(rng, 200, m);
        const ParetoArchive front = filter_nondominated(archive);

        std::vector<Vector> points;
        for (const ArchiveEntry& e : archive.entries)
            points.push_back(e.fvals);
        const std::vector<std::size_t> expected = oracle::brute_force_front(points);
        REQUIRE(front.entries.size() == expected.size());
        for (std::size_t i = 0; i < expected.size(); ++i)
            CHECK(front.entries[i].run_id == static_cast<int>(expected[i]));

        const ParetoArchive again = filter_nondominated(front);
        CHECK(again.entries.size() == front.entries.size());

        // every removed entry is dominated by some retained entry (or is a
        // collapsed duplicate of one)
        for (const ArchiveEntry& e : archive.entries) {
            bool retained = false, covered = false;
            for (const ArchiveEntry& kept : front.entries) {
                retained = retained || kept.run_id == e.run_id;
                covered = covered || dominates(kept.fvals, e.fvals) ||
                          (kept.fvals - e.fvals).lpNorm<Eigen::Infinity>() <= 1e-10;
            }
            CHECK((retained || covered));
        }
    }
}

TEST_CASE("front entries are below some maximal element of any merge") {
    Rng rng(314);
    const ParetoArchive wpf = random_archive(rng, 60, 3);
    ParetoArchive wpft = random_archive(rng, 60, 3);
    ParetoArchive merged = wpf;
    for (const ArchiveEntry& e : wpft.entries)
        merged.entries.push_back(e);

    const ParetoArchive pft = filter_nondominated(wpft);
    const ParetoArchive merged_front = filter_nondominated(merged);
    for (const ArchiveEntry& e : pft.entries) {
        bool survives = false, dominated_by_survivor = false;
        for (const ArchiveEntry& s : merged_front.entries) {
            survives = survives ||
                       (s.fvals - e.fvals).lpNorm<Eigen::Infinity>() <= 1e-10;
            dominated_by_survivor = dominated_by_survivor || dominates(s.fvals, e.fvals);
        }
        CHECK((survives || dominated_by_survivor));
        if (survives)
            for (const ArchiveEntry& s : merged_front.entries)
                CHECK_FALSE((s.fvals.array() < e.fvals.array() - 1e-10).all());
    }
}

TEST_CASE("front_size") {
    CHECK(front_size(ParetoArchive{}) == 0);
    ParetoArchive one;
    one.entries = {entry({3.0, 4.0}, 0)};
    CHECK(front_size(one) == 1);
}
