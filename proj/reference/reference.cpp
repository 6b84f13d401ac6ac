#include "reference.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <stdexcept>

namespace qspp::reference {
namespace {

struct Pair {
    double d2;
    int idx;
};

bool lex_less(const Pair& a, const Pair& b) {
    return a.d2 != b.d2 ? a.d2 < b.d2 : a.idx < b.idx;
}

/// All-pairs squared distances plus the mutual adjacency lists implied by
/// the given radii. Rebuilt from scratch, no k-NN lists involved.
struct PairwiseCache {
    std::size_t n;
    std::vector<double> d2;  // n x n
    std::vector<std::vector<int>> mutual;

    PairwiseCache(const Dataset& ds, const DensityEstimate& de) : n(ds.n), d2(ds.n * ds.n, 0) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                const double v = sq_dist(ds.row(i), ds.row(j), ds.d);
                d2[i * n + j] = v;
                d2[j * n + i] = v;
            }
        }
        mutual.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                if (d2[i * n + j] <= std::min(de.sq_r[i], de.sq_r[j])) {
                    mutual[i].push_back(static_cast<int>(j));
                    mutual[j].push_back(static_cast<int>(i));
                }
            }
        }
    }
};

}  // namespace

NeighborIndex knn_bruteforce(const Dataset& ds, std::size_t k) {
    if (k < 1 || k > ds.n) throw std::invalid_argument("knn_bruteforce: k out of range");
    NeighborIndex out;
    out.n = ds.n;
    out.k = k;
    out.ids.resize(ds.n * k);
    out.dists.resize(ds.n * k);
    out.sq_dists.resize(ds.n * k);
    out.tie_overflow.assign(ds.n, 0);

    std::vector<Pair> all(ds.n);
    for (std::size_t i = 0; i < ds.n; ++i) {
        for (std::size_t j = 0; j < ds.n; ++j) {
            all[j] = {sq_dist(ds.row(i), ds.row(j), ds.d), static_cast<int>(j)};
        }
        std::sort(all.begin(), all.end(), lex_less);
        for (std::size_t t = 0; t < k; ++t) {
            out.ids[i * k + t] = all[t].idx;
            out.sq_dists[i * k + t] = all[t].d2;
            out.dists[i * k + t] = std::sqrt(all[t].d2);
        }
        out.tie_overflow[i] = (k < ds.n && all[k].d2 == all[k - 1].d2) ? 1 : 0;
    }
    return out;
}

std::vector<MutualKnnEdge> mutual_edges_bruteforce(const Dataset& ds, const DensityEstimate& de) {
    std::vector<MutualKnnEdge> edges;
    for (std::size_t i = 0; i < ds.n; ++i) {
        for (std::size_t j = i + 1; j < ds.n; ++j) {
            const double d2 = sq_dist(ds.row(i), ds.row(j), ds.d);
            if (d2 <= std::min(de.sq_r[i], de.sq_r[j])) {
                edges.push_back({static_cast<int>(i), static_cast<int>(j), std::sqrt(d2)});
            }
        }
    }
    return edges;
}

LevelGraphSnapshot level_graph(const Dataset& ds, const DensityEstimate& de, double log_level) {
    LevelGraphSnapshot g;
    g.log_level = log_level;
    for (std::size_t i = 0; i < ds.n; ++i) {
        if (de.log_f[i] >= log_level) g.vertices.push_back(static_cast<int>(i));
    }
    g.adjacency.resize(g.vertices.size());
    for (std::size_t a = 0; a < g.vertices.size(); ++a) {
        for (std::size_t b = a + 1; b < g.vertices.size(); ++b) {
            const int i = g.vertices[a];
            const int j = g.vertices[b];
            const double d2 =
                sq_dist(ds.row(static_cast<std::size_t>(i)), ds.row(static_cast<std::size_t>(j)), ds.d);
            if (d2 <= std::min(de.sq_r[i], de.sq_r[j])) {
                g.adjacency[a].push_back(static_cast<int>(b));
                g.adjacency[b].push_back(static_cast<int>(a));
            }
        }
    }
    return g;
}

std::vector<std::vector<int>> components_at_level(const LevelGraphSnapshot& graph) {
    const std::size_t v = graph.vertices.size();
    std::vector<char> seen(v, 0);
    std::vector<std::vector<int>> comps;
    for (std::size_t s = 0; s < v; ++s) {
        if (seen[s]) continue;
        std::vector<int> comp;
        std::deque<std::size_t> queue{s};
        seen[s] = 1;
        while (!queue.empty()) {
            const std::size_t cur = queue.front();
            queue.pop_front();
            comp.push_back(graph.vertices[cur]);
            for (int nb : graph.adjacency[cur]) {
                if (!seen[nb]) {
                    seen[nb] = 1;
                    queue.push_back(static_cast<std::size_t>(nb));
                }
            }
        }
        std::sort(comp.begin(), comp.end());
        comps.push_back(std::move(comp));
    }
    std::sort(comps.begin(), comps.end(),
              [](const std::vector<int>& a, const std::vector<int>& b) { return a[0] < b[0]; });
    return comps;
}

CoreSet extract_cores_naive(const Dataset& ds, const DensityEstimate& de, double beta) {
    if (!(beta >= 0.0 && beta < 1.0)) throw std::invalid_argument("beta must be in [0, 1)");
    const std::size_t n = ds.n;
    CoreSet out;
    out.beta = beta;
    out.k = de.k;
    out.core_of.assign(n, -1);
    if (n == 0) return out;

    const PairwiseCache cache(ds, de);
    std::vector<char> claimed(n, 0);
    std::vector<char> in_level(n, 0);
    std::vector<char> visited(n, 0);

    for (std::size_t t = 0; t < n; ++t) {
        const int c = de.order[t];
        if (claimed[c]) continue;
        const double level = level_cutoff(de.log_f[c], beta);
        for (std::size_t i = 0; i < n; ++i) in_level[i] = de.log_f[i] >= level ? 1 : 0;

        // BFS for the component of c inside the level set.
        std::fill(visited.begin(), visited.end(), 0);
        std::vector<int> comp;
        std::deque<int> queue{c};
        visited[c] = 1;
        bool touches_core = false;
        while (!queue.empty()) {
            const int cur = queue.front();
            queue.pop_front();
            comp.push_back(cur);
            if (claimed[cur]) touches_core = true;
            for (int nb : cache.mutual[cur]) {
                if (in_level[nb] && !visited[nb]) {
                    visited[nb] = 1;
                    queue.push_back(nb);
                }
            }
        }
        if (touches_core) continue;

        std::sort(comp.begin(), comp.end());
        ClusterCore core;
        core.members = comp;
        core.peak_index = c;
        core.peak_density = de.f[c];
        core.threshold = (1.0 - beta) * de.f[c];
        const int id = static_cast<int>(out.cores.size());
        for (int m : comp) {
            out.core_of[m] = id;
            claimed[m] = 1;
        }
        out.cores.push_back(std::move(core));
    }
    return out;
}

int find_parent_scan(int i, const DensityEstimate& de, const Dataset& ds) {
    double best_d2 = std::numeric_limits<double>::infinity();
    int best = -1;
    for (std::size_t j = 0; j < ds.n; ++j) {
        const int ji = static_cast<int>(j);
        if (ji == i) continue;
        const bool higher = de.log_f[ji] != de.log_f[i] ? de.log_f[ji] > de.log_f[i] : ji < i;
        if (!higher) continue;
        const double d2 = sq_dist(ds.row(static_cast<std::size_t>(i)), ds.row(j), ds.d);
        if (d2 < best_d2 || (d2 == best_d2 && ji < best)) {
            best_d2 = d2;
            best = ji;
        }
    }
    return best;
}

double ari_pair_counts(const std::vector<int>& a, const std::vector<int>& b) {
    if (a.size() != b.size() || a.size() < 2) throw std::invalid_argument("bad label vectors");
    const std::size_t n = a.size();
    // Classify every unordered point pair by agreement in each partition.
    std::int64_t n11 = 0, n10 = 0, n01 = 0, n00 = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const bool same_a = a[i] == a[j];
            const bool same_b = b[i] == b[j];
            if (same_a && same_b)
                ++n11;
            else if (same_a)
                ++n10;
            else if (same_b)
                ++n01;
            else
                ++n00;
        }
    }
    const __int128 num = 2 * (static_cast<__int128>(n11) * n00 - static_cast<__int128>(n10) * n01);
    const __int128 den = static_cast<__int128>(n11 + n10) * (n10 + n00) +
                         static_cast<__int128>(n11 + n01) * (n01 + n00);
    if (den == 0) return 1.0;
    return static_cast<double>(num) / static_cast<double>(den);
}

double ami_direct(const std::vector<int>& a, const std::vector<int>& b) {
    if (a.size() != b.size() || a.size() < 2) throw std::invalid_argument("bad label vectors");
    const std::size_t n = a.size();

    std::map<int, std::int64_t> ca, cb;
    std::map<std::pair<int, int>, std::int64_t> joint;
    for (std::size_t i = 0; i < n; ++i) {
        ++ca[a[i]];
        ++cb[b[i]];
        ++joint[{a[i], b[i]}];
    }
    if (ca.size() == 1 && cb.size() == 1) return 1.0;

    const long double nd = static_cast<long double>(n);
    long double mi = 0;
    for (const auto& [key, nij] : joint) {
        const long double pij = nij / nd;
        mi += pij * std::log(pij * nd * nd / (static_cast<long double>(ca[key.first]) *
                                              static_cast<long double>(cb[key.second])));
    }
    long double ha = 0;
    for (const auto& [lab, cnt] : ca) {
        const long double p = cnt / nd;
        ha -= p * std::log(p);
    }
    long double hb = 0;
    for (const auto& [lab, cnt] : cb) {
        const long double p = cnt / nd;
        hb -= p * std::log(p);
    }

    auto lf = [](std::int64_t x) { return std::lgamma(static_cast<long double>(x) + 1.0L); };
    long double emi = 0;
    const std::int64_t ni = static_cast<std::int64_t>(n);
    for (const auto& [la, ai] : ca) {
        for (const auto& [lb, bj] : cb) {
            const std::int64_t lo = std::max<std::int64_t>(1, ai + bj - ni);
            const std::int64_t hi = std::min(ai, bj);
            for (std::int64_t nij = lo; nij <= hi; ++nij) {
                const long double log_p = lf(ai) + lf(bj) + lf(ni - ai) + lf(ni - bj) - lf(ni) -
                                          lf(nij) - lf(ai - nij) - lf(bj - nij) -
                                          lf(ni - ai - bj + nij);
                emi += std::exp(log_p) * (nij / nd) *
                       std::log(nd * nij / (static_cast<long double>(ai) *
                                            static_cast<long double>(bj)));
            }
        }
    }

    long double denominator = 0.5L * (ha + hb) - emi;
    const long double eps = std::numeric_limits<double>::epsilon();
    if (denominator < 0) {
        denominator = std::min(denominator, -eps);
    } else {
        denominator = std::max(denominator, eps);
    }
    return static_cast<double>((mi - emi) / denominator);
}

}  // namespace qspp::reference
