#pragma once

#include <cstddef>
#include <vector>

#include "qspp/dataset.hpp"
#include "qspp/image.hpp"

namespace qspp {

/// Per-pixel 5-D features (row * s, col * s, R, G, B), row-major pixel order.
struct PixelFeatures {
    std::size_t height = 0;
    std::size_t width = 0;
    Dataset data;  // n = height * width, d = 5
};

PixelFeatures image_to_features(const Image& img, double spatial_scale);

struct SegmentationOptions {
    std::size_t k = 50;
    double beta = 0.9;
    double spatial_scale = 1.0;
    std::size_t max_dim = 0;  // 0 = no downscaling; otherwise cap max(height, width)
};

struct SegmentationResult {
    std::size_t height = 0;
    std::size_t width = 0;
    std::vector<int> label_map;  // per pixel, row-major
    Image rendered;              // each segment painted with its mean color
    std::size_t n_segments = 0;
};

/// Full pipeline on pixel features. With max_dim set, clustering runs on a
/// nearest-neighbor downscale and labels are upsampled to full resolution;
/// the rendered means are always computed at full resolution.
SegmentationResult segment(const Image& img, const SegmentationOptions& opts);

}  // namespace qspp
