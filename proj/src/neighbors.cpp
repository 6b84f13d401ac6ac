#include "qspp/neighbors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace qspp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kLeafSize = 24;

struct Candidate {
    double d2;
    int idx;
};

inline bool lex_less(const Candidate& a, const Candidate& b) {
    return a.d2 != b.d2 ? a.d2 < b.d2 : a.idx < b.idx;
}

/// Bounded max-heap of the k lexicographically smallest (d2, idx) pairs.
/// `excluded_min` is the smallest d2 ever pushed out or rejected; comparing
/// it to the final k-th d2 detects boundary ties exactly, because every
/// excluded candidate's d2 is >= the final k-th d2.
class KBest {
public:
    explicit KBest(std::size_t k) : k_(k) { heap_.reserve(k); }

    void offer(double d2, int idx) {
        if (heap_.size() < k_) {
            heap_.push_back({d2, idx});
            std::push_heap(heap_.begin(), heap_.end(), lex_less);
            return;
        }
        const Candidate& worst = heap_.front();
        if (d2 != worst.d2 ? d2 < worst.d2 : idx < worst.idx) {
            excluded_min_ = std::min(excluded_min_, worst.d2);
            std::pop_heap(heap_.begin(), heap_.end(), lex_less);
            heap_.back() = {d2, idx};
            std::push_heap(heap_.begin(), heap_.end(), lex_less);
        } else {
            excluded_min_ = std::min(excluded_min_, d2);
        }
    }

    bool full() const { return heap_.size() == k_; }
    double bound() const { return full() ? heap_.front().d2 : kInf; }
    double excluded_min() const { return excluded_min_; }

    /// Ascending (d2, idx); consumes the heap.
    std::vector<Candidate> sorted() {
        std::sort(heap_.begin(), heap_.end(), lex_less);
        return std::move(heap_);
    }

private:
    std::size_t k_;
    std::vector<Candidate> heap_;
    double excluded_min_ = kInf;
};

struct Node {
    int left = -1;
    int right = -1;
    int begin = 0;
    int end = 0;
    int dim = 0;
    double split = 0;
};

/// Median-split tree over a permutation of point indices. The widest
/// dimension is split at the median by (coordinate, index), so the build is
/// deterministic for any input.
class KdTree {
public:
    KdTree(const Dataset& ds, std::size_t leaf_size) : ds_(ds), leaf_size_(leaf_size) {
        perm_.resize(ds.n);
        for (std::size_t i = 0; i < ds.n; ++i) perm_[i] = static_cast<int>(i);
        nodes_.reserve(2 * ds.n / leaf_size + 2);
        root_ = build(0, static_cast<int>(ds.n));
    }

    /// Offers to `best` every point whose squared distance can still matter.
    /// Subtrees are pruned only when their region's lower bound strictly
    /// exceeds the current k-th distance, so equal-distance candidates are
    /// always visited and excluded_min stays exact.
    void search(const double* q, KBest& best, std::vector<double>& offsets) const {
        std::fill(offsets.begin(), offsets.end(), 0.0);
        descend(root_, q, 0.0, best, offsets);
    }

private:
    int build(int begin, int end) {
        Node node;
        node.begin = begin;
        node.end = end;
        if (end - begin <= static_cast<int>(leaf_size_)) {
            nodes_.push_back(node);
            return static_cast<int>(nodes_.size()) - 1;
        }
        const std::size_t d = ds_.d;
        int dim = 0;
        double best_spread = -1;
        for (std::size_t c = 0; c < d; ++c) {
            double lo = kInf, hi = -kInf;
            for (int t = begin; t < end; ++t) {
                double v = ds_.points[static_cast<std::size_t>(perm_[t]) * d + c];
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            if (hi - lo > best_spread) {
                best_spread = hi - lo;
                dim = static_cast<int>(c);
            }
        }
        const int mid = begin + (end - begin) / 2;
        auto coord = [&](int p) { return ds_.points[static_cast<std::size_t>(p) * d + dim]; };
        std::nth_element(perm_.begin() + begin, perm_.begin() + mid, perm_.begin() + end,
                         [&](int a, int b) {
                             double ca = coord(a), cb = coord(b);
                             return ca != cb ? ca < cb : a < b;
                         });
        node.dim = dim;
        node.split = coord(perm_[mid]);
        const int self = static_cast<int>(nodes_.size());
        nodes_.push_back(node);
        const int left = build(begin, mid);
        const int right = build(mid, end);
        nodes_[self].left = left;
        nodes_[self].right = right;
        return self;
    }

    void descend(int ni, const double* q, double rd, KBest& best,
                 std::vector<double>& offsets) const {
        const Node& node = nodes_[ni];
        if (node.left < 0) {
            const std::size_t d = ds_.d;
            for (int t = node.begin; t < node.end; ++t) {
                const int p = perm_[t];
                best.offer(sq_dist(q, ds_.row(static_cast<std::size_t>(p)), d), p);
            }
            return;
        }
        const double diff = q[node.dim] - node.split;
        const int near = diff <= 0 ? node.left : node.right;
        const int far = diff <= 0 ? node.right : node.left;
        descend(near, q, rd, best, offsets);
        const double old_off = offsets[node.dim];
        const double new_rd = rd - old_off * old_off + diff * diff;
        if (new_rd <= best.bound()) {
            offsets[node.dim] = diff;
            descend(far, q, new_rd, best, offsets);
            offsets[node.dim] = old_off;
        }
    }

    const Dataset& ds_;
    std::size_t leaf_size_;
    std::vector<int> perm_;
    std::vector<Node> nodes_;
    int root_ = -1;
};

void store_result(NeighborIndex& out, std::size_t i, std::vector<Candidate> list,
                  double excluded_min) {
    const std::size_t k = out.k;
    for (std::size_t t = 0; t < k; ++t) {
        out.ids[i * k + t] = list[t].idx;
        out.sq_dists[i * k + t] = list[t].d2;
        out.dists[i * k + t] = std::sqrt(list[t].d2);
    }
    out.tie_overflow[i] = excluded_min == list[k - 1].d2 ? 1 : 0;
}

}  // namespace

NeighborIndex build_index(const Dataset& ds, std::size_t k, const KnnOptions& opts) {
    if (k < 1 || k > ds.n) throw std::invalid_argument("build_index: k out of range");
    NeighborIndex out;
    out.n = ds.n;
    out.k = k;
    out.ids.resize(ds.n * k);
    out.dists.resize(ds.n * k);
    out.sq_dists.resize(ds.n * k);
    out.tie_overflow.assign(ds.n, 0);

    const bool brute = opts.force_brute || ds.d > opts.tree_dim_limit;
    const std::int64_t n = static_cast<std::int64_t>(ds.n);

    if (brute) {
#pragma omp parallel
        {
            std::vector<Candidate> all(ds.n);
#pragma omp for schedule(dynamic, 16)
            for (std::int64_t i = 0; i < n; ++i) {
                const double* q = ds.row(static_cast<std::size_t>(i));
                for (std::int64_t j = 0; j < n; ++j) {
                    all[j] = {sq_dist(q, ds.row(static_cast<std::size_t>(j)), ds.d),
                              static_cast<int>(j)};
                }
                // k smallest to the front, then the (k+1)-th element carries
                // the minimum d2 among the excluded.
                if (k < ds.n) {
                    std::nth_element(all.begin(), all.begin() + k, all.end(), lex_less);
                }
                std::sort(all.begin(), all.begin() + k, lex_less);
                // After nth_element, all[k] is the lex-smallest excluded
                // candidate, and lex order puts the smallest d2 first.
                const double excluded_min = k < ds.n ? all[k].d2 : kInf;
                store_result(out, static_cast<std::size_t>(i),
                             {all.begin(), all.begin() + k}, excluded_min);
            }
        }
        return out;
    }

    KdTree tree(ds, kLeafSize);
#pragma omp parallel
    {
        std::vector<double> offsets(ds.d, 0.0);
#pragma omp for schedule(dynamic, 16)
        for (std::int64_t i = 0; i < n; ++i) {
            KBest best(k);
            tree.search(ds.row(static_cast<std::size_t>(i)), best, offsets);
            const double excluded_min = best.excluded_min();
            store_result(out, static_cast<std::size_t>(i), best.sorted(), excluded_min);
        }
    }
    return out;
}

std::vector<int> neighbors_within(const Dataset& ds, std::size_t i, double sq_radius) {
    std::vector<int> result;
    const double* q = ds.row(i);
    for (std::size_t j = 0; j < ds.n; ++j) {
        if (sq_dist(q, ds.row(j), ds.d) <= sq_radius) result.push_back(static_cast<int>(j));
    }
    return result;
}

}  // namespace qspp
