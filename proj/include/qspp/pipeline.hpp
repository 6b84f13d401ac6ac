#pragma once

#include <cstddef>

#include "qspp/quickshift.hpp"

namespace qspp {

struct PipelineOptions {
    std::size_t k = 20;
    double beta = 0.3;
    KnnOptions knn;
    bool use_fast_path = true;
};

struct PipelineTimings {
    double knn_s = 0;
    double density_s = 0;
    double edges_s = 0;
    double cores_s = 0;
    double assign_s = 0;
    double total_s = 0;
};

struct PipelineResult {
    NeighborIndex index;
    DensityEstimate density;
    std::vector<MutualKnnEdge> edges;
    CoreSet cores;
    Clustering clustering;
    PipelineTimings timings;
};

/// validate + k-NN index + density + mutual edges + core sweep + assignment.
PipelineResult run_pipeline(const Dataset& ds, const PipelineOptions& opts);

}  // namespace qspp
