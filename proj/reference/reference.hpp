#pragma once

#include <cstdint>
#include <vector>

#include "qspp/mcores.hpp"

// Serial reference implementations, written independently of the main library
// kernels: full pairwise scans, literal per-level graph rebuilds, direct
// formula evaluation. Used by the tests as oracles and by the benchmark as
// the baseline.
namespace qspp::reference {

/// Exact k-NN by sorting all n distances per query, (distance, index) order.
NeighborIndex knn_bruteforce(const Dataset& ds, std::size_t k);

/// All mutual-k-NN edges by testing the predicate on every pair.
std::vector<MutualKnnEdge> mutual_edges_bruteforce(const Dataset& ds, const DensityEstimate& de);

struct LevelGraphSnapshot {
    double log_level = 0;
    std::vector<int> vertices;               // ascending, log_f >= log_level
    std::vector<std::vector<int>> adjacency; // parallel to vertices
};

/// The subgraph induced by {x : f_k(x) >= level}, built from scratch.
LevelGraphSnapshot level_graph(const Dataset& ds, const DensityEstimate& de, double log_level);

/// Connected components of a level graph via BFS; each component sorted,
/// components ordered by smallest member.
std::vector<std::vector<int>> components_at_level(const LevelGraphSnapshot& graph);

/// Literal top-down sweep: for each prefix of the density order, rebuild the
/// level graph at (1 - beta) * f_k(current) and snapshot the current point's
/// component when it contains no previously claimed point.
CoreSet extract_cores_naive(const Dataset& ds, const DensityEstimate& de, double beta);

/// Nearest strictly-higher-density sample by scanning all n points.
int find_parent_scan(int i, const DensityEstimate& de, const Dataset& ds);

/// ARI from the four pair-agreement counts N11, N10, N01, N00.
double ari_pair_counts(const std::vector<int>& a, const std::vector<int>& b);

/// AMI evaluated directly from the definition with long double accumulation.
double ami_direct(const std::vector<int>& a, const std::vector<int>& b);

}  // namespace qspp::reference
