#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "qspp/dataset.hpp"

namespace qspp {

/// Squared Euclidean distance, accumulated in dimension order. Every module
/// that compares distances goes through this one kernel so that equal inputs
/// produce bitwise-equal values everywhere.
inline double sq_dist(const double* a, const double* b, std::size_t d) {
    double s = 0.0;
    for (std::size_t t = 0; t < d; ++t) {
        const double diff = a[t] - b[t];
        s += diff * diff;
    }
    return s;
}

/// Exact k nearest neighbors for every sample, self included, sorted by
/// (squared distance, index). The k-th distance of point i is its k-NN
/// radius r_k(i).
struct NeighborIndex {
    std::size_t n = 0;
    std::size_t k = 0;
    std::vector<int> ids;             // n*k
    std::vector<double> dists;        // Euclidean, same order as ids
    std::vector<double> sq_dists;     // exact comparison space
    // 1 when some unlisted point ties the k-th distance exactly; such points
    // need a radius re-scan to enumerate all mutual-k-NN edge partners.
    std::vector<std::uint8_t> tie_overflow;

    const int* ids_of(std::size_t i) const { return ids.data() + i * k; }
    const double* dists_of(std::size_t i) const { return dists.data() + i * k; }
    const double* sq_dists_of(std::size_t i) const { return sq_dists.data() + i * k; }
    double radius(std::size_t i) const { return dists[i * k + k - 1]; }
    double sq_radius(std::size_t i) const { return sq_dists[i * k + k - 1]; }
};

struct KnnOptions {
    std::size_t tree_dim_limit = 16;  // kd-tree up to this dimension, brute force above
    bool force_brute = false;
};

/// Build the exact index. Both backends (kd-tree, brute force) produce
/// identical output; ties in distance are broken by ascending index.
/// Queries are parallelized with OpenMP.
NeighborIndex build_index(const Dataset& ds, std::size_t k, const KnnOptions& opts = {});

/// All indices j (self included) with sq_dist(i, j) <= sq_radius, ascending.
std::vector<int> neighbors_within(const Dataset& ds, std::size_t i, double sq_radius);

}  // namespace qspp
