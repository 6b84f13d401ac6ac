#include "qspp/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qspp/pipeline.hpp"

namespace qspp {
namespace {

/// Nearest-neighbor resample to (sh, sw); each target pixel samples the
/// source pixel its center falls in.
Image resize_nearest(const Image& src, std::size_t sh, std::size_t sw) {
    Image out;
    out.height = sh;
    out.width = sw;
    out.rgb.resize(sh * sw * 3);
    for (std::size_t r = 0; r < sh; ++r) {
        const std::size_t sr = std::min(src.height - 1, (2 * r + 1) * src.height / (2 * sh));
        for (std::size_t c = 0; c < sw; ++c) {
            const std::size_t sc = std::min(src.width - 1, (2 * c + 1) * src.width / (2 * sw));
            const std::uint8_t* p = src.pixel(sr, sc);
            std::uint8_t* q = out.pixel(r, c);
            q[0] = p[0];
            q[1] = p[1];
            q[2] = p[2];
        }
    }
    return out;
}

}  // namespace

PixelFeatures image_to_features(const Image& img, double spatial_scale) {
    PixelFeatures feats;
    feats.height = img.height;
    feats.width = img.width;
    feats.data.n = img.height * img.width;
    feats.data.d = 5;
    feats.data.points.resize(feats.data.n * 5);
    double* out = feats.data.points.data();
    for (std::size_t r = 0; r < img.height; ++r) {
        for (std::size_t c = 0; c < img.width; ++c) {
            const std::uint8_t* p = img.pixel(r, c);
            *out++ = static_cast<double>(r) * spatial_scale;
            *out++ = static_cast<double>(c) * spatial_scale;
            *out++ = static_cast<double>(p[0]);
            *out++ = static_cast<double>(p[1]);
            *out++ = static_cast<double>(p[2]);
        }
    }
    return feats;
}

SegmentationResult segment(const Image& img, const SegmentationOptions& opts) {
    if (img.height == 0 || img.width == 0) throw std::invalid_argument("segment: empty image");

    const Image* work = &img;
    Image small;
    bool downscaled = false;
    if (opts.max_dim > 0 && std::max(img.height, img.width) > opts.max_dim) {
        const std::size_t longest = std::max(img.height, img.width);
        const std::size_t sh = std::max<std::size_t>(1, img.height * opts.max_dim / longest);
        const std::size_t sw = std::max<std::size_t>(1, img.width * opts.max_dim / longest);
        small = resize_nearest(img, sh, sw);
        work = &small;
        downscaled = true;
    }

    PixelFeatures feats = image_to_features(*work, opts.spatial_scale);
    PipelineOptions popts;
    popts.k = opts.k;
    popts.beta = opts.beta;
    const PipelineResult pipe = run_pipeline(feats.data, popts);

    SegmentationResult res;
    res.height = img.height;
    res.width = img.width;
    res.n_segments = pipe.clustering.n_clusters;
    res.label_map.resize(img.height * img.width);

    if (!downscaled) {
        res.label_map = pipe.clustering.labels;
    } else {
        for (std::size_t r = 0; r < img.height; ++r) {
            const std::size_t sr = std::min(work->height - 1, (2 * r + 1) * work->height / (2 * img.height));
            for (std::size_t c = 0; c < img.width; ++c) {
                const std::size_t sc =
                    std::min(work->width - 1, (2 * c + 1) * work->width / (2 * img.width));
                res.label_map[r * img.width + c] = pipe.clustering.labels[sr * work->width + sc];
            }
        }
    }

    // Mean segment colors accumulated in integers, so the render is exact and
    // identical across runs.
    std::vector<std::uint64_t> sums(res.n_segments * 3, 0);
    std::vector<std::uint64_t> counts(res.n_segments, 0);
    for (std::size_t p = 0; p < res.label_map.size(); ++p) {
        const int lab = res.label_map[p];
        const std::uint8_t* px = img.rgb.data() + p * 3;
        sums[lab * 3 + 0] += px[0];
        sums[lab * 3 + 1] += px[1];
        sums[lab * 3 + 2] += px[2];
        ++counts[lab];
    }
    res.rendered.height = img.height;
    res.rendered.width = img.width;
    res.rendered.rgb.resize(img.rgb.size());
    for (std::size_t p = 0; p < res.label_map.size(); ++p) {
        const int lab = res.label_map[p];
        std::uint8_t* px = res.rendered.rgb.data() + p * 3;
        const std::uint64_t cnt = counts[lab];
        px[0] = static_cast<std::uint8_t>((sums[lab * 3 + 0] + cnt / 2) / cnt);
        px[1] = static_cast<std::uint8_t>((sums[lab * 3 + 1] + cnt / 2) / cnt);
        px[2] = static_cast<std::uint8_t>((sums[lab * 3 + 2] + cnt / 2) / cnt);
    }
    return res;
}

}  // namespace qspp
