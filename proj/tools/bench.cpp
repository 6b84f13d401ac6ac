#include <chrono>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "qspp/pipeline.hpp"
#include "reference.hpp"

namespace {

double now_s() {
#ifdef _OPENMP
    return omp_get_wtime();
#else
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
#endif
}

qspp::Dataset gaussian_mixture(std::size_t n, std::size_t d, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> noise(0.0, 0.6);
    std::uniform_real_distribution<double> center(-10.0, 10.0);
    const int components = 4;
    std::vector<double> centers(components * d);
    for (auto& c : centers) c = center(rng);
    qspp::Dataset ds;
    ds.n = n;
    ds.d = d;
    ds.points.resize(n * d);
    std::uniform_int_distribution<int> pick(0, components - 1);
    for (std::size_t i = 0; i < n; ++i) {
        const int c = pick(rng);
        for (std::size_t j = 0; j < d; ++j) {
            ds.points[i * d + j] = centers[c * d + j] + noise(rng);
        }
    }
    return ds;
}

bool same_edges(const std::vector<qspp::MutualKnnEdge>& a,
                const std::vector<qspp::MutualKnnEdge>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t e = 0; e < a.size(); ++e) {
        if (a[e].i != b[e].i || a[e].j != b[e].j) return false;
    }
    return true;
}

bool same_cores(const qspp::CoreSet& a, const qspp::CoreSet& b) {
    if (a.cores.size() != b.cores.size() || a.core_of != b.core_of) return false;
    for (std::size_t c = 0; c < a.cores.size(); ++c) {
        if (a.cores[c].members != b.cores[c].members ||
            a.cores[c].peak_index != b.cores[c].peak_index) {
            return false;
        }
    }
    return true;
}

void run_case(std::size_t n, std::size_t d, std::size_t k, double beta, bool with_reference) {
    const qspp::Dataset ds = gaussian_mixture(n, d, static_cast<unsigned>(1000 + n));

    double t = now_s();
    const qspp::NeighborIndex idx = qspp::build_index(ds, k);
    const double t_knn = now_s() - t;

    t = now_s();
    const qspp::DensityEstimate de = qspp::estimate(idx, ds, k);
    const double t_density = now_s() - t;

    t = now_s();
    const auto edges = qspp::build_mutual_knn_edges(idx, ds);
    const double t_edges = now_s() - t;

    t = now_s();
    const qspp::CoreSet cores = qspp::extract_cores(edges, de, beta);
    const double t_cores = now_s() - t;

    t = now_s();
    const qspp::Clustering cl = qspp::cluster(cores, idx, de, ds);
    const double t_assign = now_s() - t;

    std::printf("n=%-6zu d=%zu k=%-3zu | knn %8.3fs  density %7.3fs  edges %7.3fs  cores %7.3fs  assign %7.3fs\n",
                n, d, k, t_knn, t_density, t_edges, t_cores, t_assign);

    if (!with_reference) return;

    t = now_s();
    const qspp::NeighborIndex ref_idx = qspp::reference::knn_bruteforce(ds, k);
    const double r_knn = now_s() - t;
    const bool knn_ok = idx.ids == ref_idx.ids && idx.sq_dists == ref_idx.sq_dists &&
                        idx.tie_overflow == ref_idx.tie_overflow;

    t = now_s();
    const auto ref_edges = qspp::reference::mutual_edges_bruteforce(ds, de);
    const double r_edges = now_s() - t;

    t = now_s();
    const qspp::CoreSet ref_cores = qspp::reference::extract_cores_naive(ds, de, beta);
    const double r_cores = now_s() - t;

    t = now_s();
    bool parents_ok = true;
    for (std::size_t i = 0; i < n; ++i) {
        if (cores.core_of[i] >= 0) continue;
        if (qspp::reference::find_parent_scan(static_cast<int>(i), de, ds) != cl.parent[i]) {
            parents_ok = false;
        }
    }
    const double r_assign = now_s() - t;

    std::printf("  reference          | knn %8.3fs  %s            edges %7.3fs  %s  cores %7.3fs  %s  assign %7.3fs  %s\n",
                r_knn, knn_ok ? "OK" : "MISMATCH", r_edges,
                same_edges(edges, ref_edges) ? "OK" : "MISMATCH", r_cores,
                same_cores(cores, ref_cores) ? "OK" : "MISMATCH", r_assign,
                parents_ok ? "OK" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
    std::size_t big_n = 20000;
    if (argc > 1) big_n = static_cast<std::size_t>(std::stoul(argv[1]));
#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (no OpenMP)\n");
#endif
    run_case(1000, 2, 20, 0.3, true);
    run_case(3000, 5, 30, 0.3, true);
    run_case(big_n, 5, 50, 0.3, false);
    return 0;
}
