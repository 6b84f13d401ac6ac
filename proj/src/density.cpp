#include "qspp/density.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qspp {

double log_unit_ball_volume(std::size_t d) {
    // log v_d = (d/2) log(pi) - log Gamma(d/2 + 1)
    const double half_d = static_cast<double>(d) / 2.0;
    return half_d * std::log(std::numbers::pi) - std::lgamma(half_d + 1.0);
}

DensityEstimate estimate(const NeighborIndex& idx, const Dataset& ds, std::size_t k) {
    if (idx.n != ds.n || idx.k != k) throw std::invalid_argument("estimate: index mismatch");
    DensityEstimate de;
    de.n = ds.n;
    de.d = ds.d;
    de.k = k;
    de.r.resize(ds.n);
    de.sq_r.resize(ds.n);
    de.f.resize(ds.n);
    de.log_f.resize(ds.n);

    // log f_k(x) = log k - log n - log v_d - d log r_k(x). All density
    // comparisons in the library happen on log_f, so every consumer sees the
    // same total order.
    const double log_base = std::log(static_cast<double>(k)) -
                            std::log(static_cast<double>(ds.n)) - log_unit_ball_volume(ds.d);
    const double dim = static_cast<double>(ds.d);

    const std::int64_t n = static_cast<std::int64_t>(ds.n);
    bool zero_radius = false;
#pragma omp parallel for schedule(static) reduction(|| : zero_radius)
    for (std::int64_t i = 0; i < n; ++i) {
        const double r = idx.radius(static_cast<std::size_t>(i));
        zero_radius = zero_radius || r <= 0;
        de.r[i] = r;
        de.sq_r[i] = idx.sq_radius(static_cast<std::size_t>(i));
        de.log_f[i] = log_base - dim * std::log(r);
        de.f[i] = std::exp(de.log_f[i]);
    }
    if (zero_radius) throw std::domain_error("estimate: zero k-th neighbor distance");

    de.order.resize(ds.n);
    for (std::size_t i = 0; i < ds.n; ++i) de.order[i] = static_cast<int>(i);
    std::sort(de.order.begin(), de.order.end(), [&](int a, int b) {
        return de.log_f[a] != de.log_f[b] ? de.log_f[a] > de.log_f[b] : a < b;
    });
    return de;
}

bool higher_density(const DensityEstimate& de, int i, int j) { return de.higher(i, j); }

}  // namespace qspp
