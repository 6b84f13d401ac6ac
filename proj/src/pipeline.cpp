#include "qspp/pipeline.hpp"

#include <chrono>

namespace qspp {
namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

PipelineResult run_pipeline(const Dataset& ds, const PipelineOptions& opts) {
    using clock = std::chrono::steady_clock;
    validate(ds, opts.k);

    PipelineResult res;
    const auto start = clock::now();

    auto t = clock::now();
    res.index = build_index(ds, opts.k, opts.knn);
    res.timings.knn_s = seconds_since(t);

    t = clock::now();
    res.density = estimate(res.index, ds, opts.k);
    res.timings.density_s = seconds_since(t);

    t = clock::now();
    res.edges = build_mutual_knn_edges(res.index, ds);
    res.timings.edges_s = seconds_since(t);

    t = clock::now();
    res.cores = extract_cores(res.edges, res.density, opts.beta);
    res.timings.cores_s = seconds_since(t);

    t = clock::now();
    res.clustering = cluster(res.cores, res.index, res.density, ds, opts.use_fast_path);
    res.timings.assign_s = seconds_since(t);

    res.timings.total_s = seconds_since(start);
    return res;
}

}  // namespace qspp
