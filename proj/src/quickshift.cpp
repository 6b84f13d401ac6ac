#include "qspp/quickshift.hpp"

#include <limits>
#include <stdexcept>

namespace qspp {
namespace {

int full_scan_parent(int i, const DensityEstimate& de, const Dataset& ds) {
    const double* q = ds.row(static_cast<std::size_t>(i));
    double best_d2 = std::numeric_limits<double>::infinity();
    int best = -1;
    for (std::size_t j = 0; j < ds.n; ++j) {
        const int ji = static_cast<int>(j);
        if (!de.higher(ji, i)) continue;
        const double d2 = sq_dist(q, ds.row(j), ds.d);
        if (d2 < best_d2 || (d2 == best_d2 && ji < best)) {
            best_d2 = d2;
            best = ji;
        }
    }
    return best;
}

}  // namespace

int find_parent(int i, const NeighborIndex& idx, const DensityEstimate& de, const Dataset& ds,
                bool use_fast_path) {
    if (use_fast_path) {
        // The k-NN list is sorted by (distance, index), so the first entry
        // with higher density is the best candidate the list can offer. It is
        // the true parent only when strictly inside the list's radius: at the
        // radius, an unlisted point could tie the distance with a smaller
        // index, or tie overflow could hide a strictly closer candidate.
        const int* ids = idx.ids_of(static_cast<std::size_t>(i));
        const double* sq = idx.sq_dists_of(static_cast<std::size_t>(i));
        const double sq_r = idx.sq_radius(static_cast<std::size_t>(i));
        for (std::size_t t = 0; t < idx.k; ++t) {
            const int j = ids[t];
            if (j == i || !de.higher(j, i)) continue;
            if (sq[t] < sq_r) return j;
            break;
        }
    }
    return full_scan_parent(i, de, ds);
}

Clustering cluster(const CoreSet& cores, const NeighborIndex& idx, const DensityEstimate& de,
                   const Dataset& ds, bool use_fast_path) {
    const std::size_t n = de.n;
    Clustering out;
    out.labels.assign(n, -1);
    out.parent.assign(n, -1);
    out.n_clusters = cores.size();

    for (std::size_t i = 0; i < n; ++i) out.labels[i] = cores.core_of[i];

    const std::int64_t ni = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 64)
    for (std::int64_t i = 0; i < ni; ++i) {
        if (cores.core_of[i] >= 0) continue;
        out.parent[i] = find_parent(static_cast<int>(i), idx, de, ds, use_fast_path);
    }

    // Follow parent chains; density increases strictly along them, so every
    // chain ends inside a core. Each visited point is labeled once.
    std::vector<int> path;
    for (std::size_t i = 0; i < n; ++i) {
        if (out.labels[i] >= 0) continue;
        path.clear();
        int cur = static_cast<int>(i);
        while (out.labels[cur] < 0) {
            path.push_back(cur);
            cur = out.parent[cur];
            if (cur < 0) throw std::logic_error("cluster: hill climb left the sample");
        }
        const int label = out.labels[cur];
        for (int p : path) out.labels[p] = label;
    }
    return out;
}

}  // namespace qspp
