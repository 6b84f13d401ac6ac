#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "qspp/metrics.hpp"
#include "qspp/quickshift.hpp"
#include "reference.hpp"
#include "test_support.hpp"

using testsupport::dataset_from;
using testsupport::points_1d;

namespace {

struct Built {
    qspp::Dataset ds;
    qspp::NeighborIndex idx;
    qspp::DensityEstimate de;
    qspp::CoreSet cores;
};

Built build(qspp::Dataset ds, std::size_t k, double beta) {
    Built b;
    b.ds = std::move(ds);
    b.idx = qspp::build_index(b.ds, k);
    b.de = qspp::estimate(b.idx, b.ds, k);
    const auto edges = qspp::build_mutual_knn_edges(b.idx, b.ds);
    b.cores = qspp::extract_cores(edges, b.de, beta);
    return b;
}

bool equal_clustering(const qspp::Clustering& a, const qspp::Clustering& b) {
    return a.labels == b.labels && a.parent == b.parent && a.n_clusters == b.n_clusters;
}

void check_clustering_invariants(const Built& b, const qspp::Clustering& cl) {
    const std::size_t n = b.ds.n;
    REQUIRE(cl.labels.size() == n);
    REQUIRE(cl.parent.size() == n);
    CHECK(cl.n_clusters == b.cores.size());
    for (std::size_t i = 0; i < n; ++i) {
        // completeness: every point gets a real cluster id
        REQUIRE(cl.labels[i] >= 0);
        REQUIRE(cl.labels[i] < static_cast<int>(cl.n_clusters));
        const int core = b.cores.core_of[i];
        if (core >= 0) {
            CHECK(cl.labels[i] == core);
            CHECK(cl.parent[i] == -1);
            continue;
        }
        // strict ascent, chain ends inside the labeled core
        REQUIRE(cl.parent[i] >= 0);
        CHECK(qspp::higher_density(b.de, cl.parent[i], static_cast<int>(i)));
        int walk = static_cast<int>(i);
        while (cl.parent[walk] != -1) walk = cl.parent[walk];
        CHECK(b.cores.core_of[walk] == cl.labels[i]);
    }
}

}  // namespace

TEST_CASE("tied quartet: every non-max point climbs to index 0") {
    const Built b = build(dataset_from({{0, 0}, {2, 0}, {1, 1}, {1, -1}}), 2, 0.3);
    CHECK(qspp::find_parent(0, b.idx, b.de, b.ds) == -1);
    CHECK(qspp::find_parent(1, b.idx, b.de, b.ds) == 0);
    CHECK(qspp::find_parent(2, b.idx, b.de, b.ds) == 0);
    CHECK(qspp::find_parent(3, b.idx, b.de, b.ds) == 0);
    for (int i = 0; i < 4; ++i) {
        CHECK(qspp::find_parent(i, b.idx, b.de, b.ds) ==
              qspp::reference::find_parent_scan(i, b.de, b.ds));
    }
}

TEST_CASE("uniform line: parent is the previous point") {
    const Built b = build(points_1d({0, 1, 2, 3, 4, 5, 6, 7}), 2, 0.3);
    CHECK(qspp::find_parent(0, b.idx, b.de, b.ds) == -1);
    for (int i = 1; i < 8; ++i) {
        CHECK(qspp::find_parent(i, b.idx, b.de, b.ds) == i - 1);
    }
}

TEST_CASE("bridge point climbs through the slope into the dense blob") {
    // Two tight triples with a straggler at 3.5; only the blob centers are
    // cores at this beta, so five points must hill-climb.
    const Built b = build(points_1d({0, 1, 2, 3.5, 100, 101, 102}), 3, 0.3);
    REQUIRE(b.cores.size() == 2);
    CHECK(b.cores.cores[0].members == std::vector<int>{1});
    CHECK(b.cores.cores[1].members == std::vector<int>{5});
    const auto cl = qspp::cluster(b.cores, b.idx, b.de, b.ds);
    CHECK(cl.labels == std::vector<int>{0, 0, 0, 0, 1, 1, 1});
    CHECK(cl.parent[1] == -1);
    CHECK(cl.parent[5] == -1);
    CHECK(cl.parent[0] == 1);
    CHECK(cl.parent[2] == 1);
    CHECK(cl.parent[3] == 2);
    CHECK(cl.parent[4] == 5);
    CHECK(cl.parent[6] == 5);
    check_clustering_invariants(b, cl);
}

TEST_CASE("fully covered dataset needs no climbing") {
    const Built b = build(points_1d({0, 1, 2, 100, 101, 102}), 2, 0.5);
    REQUIRE(b.cores.size() == 2);
    const auto cl = qspp::cluster(b.cores, b.idx, b.de, b.ds);
    CHECK(cl.labels == std::vector<int>{0, 0, 0, 1, 1, 1});
    CHECK(cl.parent == std::vector<int>(6, -1));
    check_clustering_invariants(b, cl);
}

TEST_CASE("fast path agrees with the exhaustive scan on random data") {
    testsupport::MixtureSpec spec;
    spec.n = 300;
    spec.d = 4;
    spec.components = 3;
    const Built b = build(testsupport::gaussian_mixture(spec, 515), 20, 0.3);
    for (int i = 0; i < 300; ++i) {
        const int fast = qspp::find_parent(i, b.idx, b.de, b.ds, true);
        const int slow = qspp::find_parent(i, b.idx, b.de, b.ds, false);
        const int oracle = qspp::reference::find_parent_scan(i, b.de, b.ds);
        CAPTURE(i);
        CHECK(fast == slow);
        CHECK(fast == oracle);
        if (i != b.de.order[0]) CHECK(fast >= 0);
    }
}

TEST_CASE("fast path agrees with the scan on tie-dense grids") {
    std::vector<std::vector<double>> rows;
    for (int x = 0; x < 6; ++x) {
        for (int y = 0; y < 6; ++y) rows.push_back({double(x), double(y)});
    }
    for (std::size_t k : {2, 4, 7}) {
        CAPTURE(k);
        const Built b = build(dataset_from(rows), k, 0.3);
        for (int i = 0; i < 36; ++i) {
            CHECK(qspp::find_parent(i, b.idx, b.de, b.ds, true) ==
                  qspp::reference::find_parent_scan(i, b.de, b.ds));
        }
    }
}

TEST_CASE("clusterings with and without the fast path are identical") {
    for (unsigned seed : {1u, 2u, 3u}) {
        testsupport::MixtureSpec spec;
        spec.n = 250;
        spec.d = 3;
        spec.components = 3;
        const Built b = build(testsupport::gaussian_mixture(spec, 900 + seed), 15, 0.3);
        const auto fast = qspp::cluster(b.cores, b.idx, b.de, b.ds, true);
        const auto slow = qspp::cluster(b.cores, b.idx, b.de, b.ds, false);
        CAPTURE(seed);
        CHECK(equal_clustering(fast, slow));
        check_clustering_invariants(b, fast);
    }
}

TEST_CASE("well separated rings are recovered exactly") {
    const auto ds = testsupport::two_rings(60, 120, 1.0, 3.0, 0.02, 42);
    const Built b = build(ds, 8, 0.5);
    const auto cl = qspp::cluster(b.cores, b.idx, b.de, b.ds);
    std::vector<int> pred(cl.labels.begin(), cl.labels.end());
    CHECK(qspp::adjusted_rand_index(pred, ds.true_labels) == 1.0);
}

TEST_CASE("three blobs of unequal spread are recovered") {
    const auto ds = testsupport::three_gaussians(7);
    const Built b = build(ds, 25, 0.3);
    const auto cl = qspp::cluster(b.cores, b.idx, b.de, b.ds);
    check_clustering_invariants(b, cl);
    const double ari = qspp::adjusted_rand_index(cl.labels, ds.true_labels);
    CHECK(ari > 0.95);
}
