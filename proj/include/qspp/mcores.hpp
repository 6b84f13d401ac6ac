#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "qspp/density.hpp"

namespace qspp {

/// Undirected mutual-k-NN edge: present iff ||x_i - x_j|| <= min(r_k(i), r_k(j)).
struct MutualKnnEdge {
    int i = 0;          // i < j
    int j = 0;
    double length = 0;  // Euclidean
};

/// Snapshot of one connected component taken by the level sweep.
struct ClusterCore {
    std::vector<int> members;   // ascending point indices
    int peak_index = -1;        // the point whose processing created the core
    double peak_density = 0;    // f_k(peak_index)
    double threshold = 0;       // (1 - beta) * peak_density
};

struct CoreSet {
    std::vector<ClusterCore> cores;  // creation order = decreasing peak density
    double beta = 0;
    std::size_t k = 0;
    std::vector<int> core_of;        // per point: owning core id, or -1

    std::size_t size() const { return cores.size(); }
};

/// Exactly the mutual-k-NN edges, sorted by (i, j). Listed neighbors give
/// the candidates; points flagged tie_overflow get a closed-ball re-scan so
/// boundary ties cannot drop edges.
std::vector<MutualKnnEdge> build_mutual_knn_edges(const NeighborIndex& idx, const Dataset& ds);

/// Top-down level sweep over the mutual k-NN graph. Processing points in the
/// strict density order, a union-find frontier holds every point with
/// f_k >= (1 - beta) * f_k(current); when the current point's component
/// contains no core member yet, the component is snapshotted as a new core.
/// Frontier and sweep advance monotonically, so the whole sweep costs
/// O(nk * alpha(n)) after the index build.
CoreSet extract_cores(const std::vector<MutualKnnEdge>& edges,
                      const DensityEstimate& de,
                      double beta);

/// {"beta":..., "k":..., "cores":[{peak_index, peak_density, threshold, members}]}
std::string cores_to_json(const CoreSet& cores);

}  // namespace qspp
