#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "qspp/dataset.hpp"
#include "qspp/neighbors.hpp"

namespace qspp {

/// k-NN density estimate f_k(x) = k / (n * v_d * r_k(x)^d) for every sample,
/// plus the strict total density order shared by the level sweep and the
/// hill climb. Comparisons run on log f_k: raw values can overflow or
/// degrade to subnormals in high dimension, the logs never do, and the log
/// map preserves the order exactly.
struct DensityEstimate {
    std::size_t n = 0;
    std::size_t d = 0;
    std::size_t k = 0;
    std::vector<double> r;       // k-NN radius per point
    std::vector<double> sq_r;    // exact squared radius (edge predicate space)
    std::vector<double> f;       // raw density values
    std::vector<double> log_f;   // comparison representation
    std::vector<int> order;      // points sorted by (log_f desc, index asc)

    // strict total order: density descending, ties to the lower index
    bool higher(int i, int j) const {
        return log_f[i] != log_f[j] ? log_f[i] > log_f[j] : i < j;
    }
};

/// log of the Euclidean unit-ball volume v_d = pi^{d/2} / Gamma(d/2 + 1).
double log_unit_ball_volume(std::size_t d);

DensityEstimate estimate(const NeighborIndex& idx, const Dataset& ds, std::size_t k);

/// true iff (f_k(i), -i) > (f_k(j), -j) lexicographically. Requires i != j
/// for the strict-order reading; higher_density(i, i) is false.
bool higher_density(const DensityEstimate& de, int i, int j);

/// Log-space density level (1 - beta) * peak. Every module that thresholds
/// a level set uses this expression so boundaries agree bit for bit.
inline double level_cutoff(double log_peak, double beta) {
    return log_peak + std::log1p(-beta);
}

}  // namespace qspp
