#include "qspp/mcores.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

namespace qspp {
namespace {

/// Union-find with union by size, path halving, a per-root core flag, and
/// intrusive member lists so components concatenate in O(1).
class Components {
public:
    explicit Components(std::size_t n)
        : parent_(n), size_(n, 1), has_core_(n, 0), head_(n), tail_(n), next_(n, -1) {
        std::iota(parent_.begin(), parent_.end(), 0);
        std::iota(head_.begin(), head_.end(), 0);
        std::iota(tail_.begin(), tail_.end(), 0);
    }

    int find(int x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (size_[a] < size_[b]) std::swap(a, b);
        parent_[b] = a;
        size_[a] += size_[b];
        has_core_[a] |= has_core_[b];
        next_[tail_[a]] = head_[b];
        tail_[a] = tail_[b];
    }

    bool has_core(int root) const { return has_core_[root] != 0; }
    void mark_core(int root) { has_core_[root] = 1; }

    std::vector<int> members(int root) const {
        std::vector<int> out;
        out.reserve(size_[root]);
        for (int p = head_[root]; p >= 0; p = next_[p]) out.push_back(p);
        std::sort(out.begin(), out.end());
        return out;
    }

private:
    std::vector<int> parent_;
    std::vector<int> size_;
    std::vector<char> has_core_;
    std::vector<int> head_;
    std::vector<int> tail_;
    std::vector<int> next_;
};

}  // namespace

std::vector<MutualKnnEdge> build_mutual_knn_edges(const NeighborIndex& idx, const Dataset& ds) {
    const std::size_t n = idx.n;
    const std::size_t k = idx.k;
    std::vector<std::uint64_t> keys;
    keys.reserve(n * k / 2);

    const std::int64_t ni = static_cast<std::int64_t>(n);
#pragma omp parallel
    {
        std::vector<std::uint64_t> local;
#pragma omp for schedule(static) nowait
        for (std::int64_t i = 0; i < ni; ++i) {
            const std::size_t ui = static_cast<std::size_t>(i);
            const int* ids = idx.ids_of(ui);
            const double* sq = idx.sq_dists_of(ui);
            for (std::size_t t = 0; t < k; ++t) {
                const int j = ids[t];
                if (j == static_cast<int>(i)) continue;
                // sq[t] <= sq_radius(i) holds for every listed neighbor, so
                // mutuality needs only the partner's radius.
                if (sq[t] <= idx.sq_radius(static_cast<std::size_t>(j))) {
                    const std::uint64_t a = static_cast<std::uint64_t>(std::min<int>(i, j));
                    const std::uint64_t b = static_cast<std::uint64_t>(std::max<int>(i, j));
                    local.push_back(a * n + b);
                }
            }
            // A boundary tie can leave a mutual partner out of both k-NN
            // lists, but then both endpoints sit at exactly the radius, so a
            // closed-ball re-scan around every flagged point recovers it.
            if (idx.tie_overflow[ui]) {
                for (int j : neighbors_within(ds, ui, idx.sq_radius(ui))) {
                    if (j == static_cast<int>(i)) continue;
                    const double d2 = sq_dist(ds.row(ui), ds.row(static_cast<std::size_t>(j)), ds.d);
                    if (d2 <= idx.sq_radius(static_cast<std::size_t>(j))) {
                        const std::uint64_t a = static_cast<std::uint64_t>(std::min<int>(i, j));
                        const std::uint64_t b = static_cast<std::uint64_t>(std::max<int>(i, j));
                        local.push_back(a * n + b);
                    }
                }
            }
        }
#pragma omp critical
        keys.insert(keys.end(), local.begin(), local.end());
    }

    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());

    std::vector<MutualKnnEdge> edges(keys.size());
    const std::int64_t m = static_cast<std::int64_t>(keys.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t e = 0; e < m; ++e) {
        const int a = static_cast<int>(keys[e] / n);
        const int b = static_cast<int>(keys[e] % n);
        edges[e] = {a, b,
                    std::sqrt(sq_dist(ds.row(static_cast<std::size_t>(a)),
                                      ds.row(static_cast<std::size_t>(b)), ds.d))};
    }
    return edges;
}

CoreSet extract_cores(const std::vector<MutualKnnEdge>& edges, const DensityEstimate& de,
                      double beta) {
    if (!(beta >= 0.0 && beta < 1.0)) throw std::invalid_argument("beta must be in [0, 1)");
    const std::size_t n = de.n;

    CoreSet out;
    out.beta = beta;
    out.k = de.k;
    out.core_of.assign(n, -1);
    if (n == 0) return out;

    std::vector<int> pos(n);
    for (std::size_t t = 0; t < n; ++t) pos[de.order[t]] = static_cast<int>(t);

    // CSR adjacency keyed on the later endpoint in the density order: the
    // edge joins the components the moment both ends are inside the frontier.
    std::vector<int> degree(n, 0);
    for (const auto& e : edges) {
        const int later = pos[e.i] > pos[e.j] ? e.i : e.j;
        ++degree[later];
    }
    std::vector<std::size_t> offsets(n + 1, 0);
    for (std::size_t p = 0; p < n; ++p) offsets[p + 1] = offsets[p] + degree[p];
    std::vector<int> partner(edges.size());
    std::vector<std::size_t> cursor(offsets.begin(), offsets.end() - 1);
    for (const auto& e : edges) {
        const bool i_later = pos[e.i] > pos[e.j];
        const int later = i_later ? e.i : e.j;
        const int earlier = i_later ? e.j : e.i;
        partner[cursor[later]++] = earlier;
    }

    Components comp(n);
    std::size_t frontier = 0;  // points order[0..frontier) are inside

    for (std::size_t t = 0; t < n; ++t) {
        const int c = de.order[t];
        const double cutoff = level_cutoff(de.log_f[c], beta);
        while (frontier < n && de.log_f[de.order[frontier]] >= cutoff) {
            const int p = de.order[frontier];
            for (std::size_t e = offsets[p]; e < offsets[p + 1]; ++e) comp.unite(p, partner[e]);
            ++frontier;
        }
        const int root = comp.find(c);
        if (comp.has_core(root)) continue;
        comp.mark_core(root);
        ClusterCore core;
        core.members = comp.members(root);
        core.peak_index = c;
        core.peak_density = de.f[c];
        core.threshold = (1.0 - beta) * de.f[c];
        const int id = static_cast<int>(out.cores.size());
        for (int m : core.members) out.core_of[m] = id;
        out.cores.push_back(std::move(core));
    }
    return out;
}

std::string cores_to_json(const CoreSet& cores) {
    nlohmann::json j;
    j["beta"] = cores.beta;
    j["k"] = cores.k;
    j["n_cores"] = cores.cores.size();
    auto arr = nlohmann::json::array();
    for (const auto& core : cores.cores) {
        nlohmann::json c;
        c["peak_index"] = core.peak_index;
        c["peak_density"] = core.peak_density;
        c["threshold"] = core.threshold;
        c["members"] = core.members;
        arr.push_back(std::move(c));
    }
    j["cores"] = std::move(arr);
    return j.dump(2);
}

}  // namespace qspp
