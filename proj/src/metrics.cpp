#include "qspp/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

namespace qspp {
namespace {

std::vector<int> dense_ids(const std::vector<int>& labels, std::size_t& n_ids) {
    std::unordered_map<int, int> map;
    std::vector<int> out(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        auto [it, inserted] = map.emplace(labels[i], static_cast<int>(map.size()));
        out[i] = it->second;
    }
    n_ids = map.size();
    return out;
}

inline std::int64_t pairs2(std::int64_t x) { return x * (x - 1) / 2; }

}  // namespace

ContingencyTable ContingencyTable::from_labels(const std::vector<int>& a,
                                               const std::vector<int>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("label vectors differ in length");
    if (a.size() < 2) throw std::invalid_argument("need at least 2 labeled points");
    ContingencyTable t;
    t.n = a.size();
    const std::vector<int> ra = dense_ids(a, t.rows);
    const std::vector<int> rb = dense_ids(b, t.cols);
    t.counts.assign(t.rows * t.cols, 0);
    t.row_sums.assign(t.rows, 0);
    t.col_sums.assign(t.cols, 0);
    for (std::size_t i = 0; i < t.n; ++i) {
        ++t.counts[static_cast<std::size_t>(ra[i]) * t.cols + static_cast<std::size_t>(rb[i])];
        ++t.row_sums[ra[i]];
        ++t.col_sums[rb[i]];
    }
    return t;
}

double adjusted_rand_index(const std::vector<int>& a, const std::vector<int>& b) {
    const ContingencyTable t = ContingencyTable::from_labels(a, b);
    std::int64_t sum_ij = 0;
    for (std::int64_t c : t.counts) sum_ij += pairs2(c);
    std::int64_t sum_a = 0;
    for (std::int64_t c : t.row_sums) sum_a += pairs2(c);
    std::int64_t sum_b = 0;
    for (std::int64_t c : t.col_sums) sum_b += pairs2(c);
    const std::int64_t total = pairs2(static_cast<std::int64_t>(t.n));

    // ARI = (index - expected) / (max - expected) with
    // expected = sum_a * sum_b / total and max = (sum_a + sum_b) / 2.
    // Multiplying through by 2 * total keeps everything in integers.
    const __int128 num2 = 2 * (static_cast<__int128>(total) * sum_ij -
                               static_cast<__int128>(sum_a) * sum_b);
    const __int128 den2 = static_cast<__int128>(total) * (sum_a + sum_b) -
                          2 * static_cast<__int128>(sum_a) * sum_b;
    if (den2 == 0) return 1.0;  // expected == max: both partitions carry no pair information
    return static_cast<double>(num2) / static_cast<double>(den2);
}

namespace {

// True when the table is a bijection between cluster ids, i.e. the two
// partitions are identical up to relabeling.
bool is_permutation_table(const ContingencyTable& t) {
    if (t.rows != t.cols) return false;
    for (std::size_t r = 0; r < t.rows; ++r) {
        std::size_t nonzero = 0;
        for (std::size_t c = 0; c < t.cols; ++c) {
            if (t.at(r, c) != 0) ++nonzero;
        }
        if (nonzero != 1) return false;
    }
    return true;
}

}  // namespace

double adjusted_mutual_info(const std::vector<int>& a, const std::vector<int>& b) {
    const ContingencyTable t = ContingencyTable::from_labels(a, b);
    if (is_permutation_table(t)) return 1.0;

    const double n = static_cast<double>(t.n);
    const double log_n = std::log(n);

    double mi = 0;
    for (std::size_t r = 0; r < t.rows; ++r) {
        for (std::size_t c = 0; c < t.cols; ++c) {
            const std::int64_t nij = t.at(r, c);
            if (nij == 0) continue;
            mi += static_cast<double>(nij) / n *
                  (log_n + std::log(static_cast<double>(nij)) -
                   std::log(static_cast<double>(t.row_sums[r])) -
                   std::log(static_cast<double>(t.col_sums[c])));
        }
    }

    double h_a = 0;
    for (std::int64_t c : t.row_sums) h_a += static_cast<double>(c) * std::log(static_cast<double>(c));
    h_a = log_n - h_a / n;
    double h_b = 0;
    for (std::int64_t c : t.col_sums) h_b += static_cast<double>(c) * std::log(static_cast<double>(c));
    h_b = log_n - h_b / n;

    // Exact expected MI under the hypergeometric model of random tables with
    // these margins.
    std::vector<double> log_fact(t.n + 1, 0.0);
    for (std::size_t i = 2; i <= t.n; ++i) {
        log_fact[i] = log_fact[i - 1] + std::log(static_cast<double>(i));
    }
    double emi = 0;
    const std::int64_t ni = static_cast<std::int64_t>(t.n);
    for (std::size_t r = 0; r < t.rows; ++r) {
        const std::int64_t ai = t.row_sums[r];
        for (std::size_t c = 0; c < t.cols; ++c) {
            const std::int64_t bj = t.col_sums[c];
            const double log_margin = log_fact[ai] + log_fact[bj] + log_fact[ni - ai] +
                                      log_fact[ni - bj] - log_fact[ni];
            const std::int64_t lo = std::max<std::int64_t>(1, ai + bj - ni);
            const std::int64_t hi = std::min(ai, bj);
            for (std::int64_t nij = lo; nij <= hi; ++nij) {
                const double log_p = log_margin - log_fact[nij] - log_fact[ai - nij] -
                                     log_fact[bj - nij] - log_fact[ni - ai - bj + nij];
                emi += std::exp(log_p) * static_cast<double>(nij) / n *
                       (log_n + std::log(static_cast<double>(nij)) -
                        std::log(static_cast<double>(ai)) - std::log(static_cast<double>(bj)));
            }
        }
    }

    const double normalizer = 0.5 * (h_a + h_b);
    double denominator = normalizer - emi;
    const double eps = std::numeric_limits<double>::epsilon();
    // A vanishing denominator means the normalized score is unstable; pinning
    // it at +-eps sends the result toward zero instead of blowing up.
    if (denominator < 0) {
        denominator = std::min(denominator, -eps);
    } else {
        denominator = std::max(denominator, eps);
    }
    return (mi - emi) / denominator;
}

}  // namespace qspp
