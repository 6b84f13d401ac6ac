#pragma once

#include <cstddef>
#include <vector>

#include "qspp/mcores.hpp"

namespace qspp {

/// Final clustering: every point labeled with the id of the core its
/// hill-climbing path terminates in.
struct Clustering {
    std::vector<int> labels;  // core id per point, 0..cores-1
    std::vector<int> parent;  // hill-climb parent per point; -1 for core members
    std::size_t n_clusters = 0;
};

/// The nearest sample with strictly higher density, ties on distance broken
/// by smaller index. The k-NN list is scanned first; the answer is taken from
/// it only when its distance is strictly below r_k(i), which guarantees no
/// closer candidate exists outside the list. Otherwise falls back to a full
/// scan. `use_fast_path=false` forces the full scan.
int find_parent(int i,
                const NeighborIndex& idx,
                const DensityEstimate& de,
                const Dataset& ds,
                bool use_fast_path = true);

/// Assign every point: core members keep their core's id, every other point
/// follows parent links until it lands in a core. Chains are memoized, so the
/// total work beyond parent lookups is O(n).
Clustering cluster(const CoreSet& cores,
                   const NeighborIndex& idx,
                   const DensityEstimate& de,
                   const Dataset& ds,
                   bool use_fast_path = true);

}  // namespace qspp
