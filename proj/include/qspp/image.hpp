#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace qspp {

/// 8-bit RGB raster, row-major, 3 bytes per pixel.
struct Image {
    std::size_t height = 0;
    std::size_t width = 0;
    std::vector<std::uint8_t> rgb;  // height * width * 3

    const std::uint8_t* pixel(std::size_t r, std::size_t c) const {
        return rgb.data() + (r * width + c) * 3;
    }
    std::uint8_t* pixel(std::size_t r, std::size_t c) {
        return rgb.data() + (r * width + c) * 3;
    }
};

/// Reads PNG (any color type, converted to RGB8) or PPM (P6/P3), dispatching
/// on the file's magic bytes.
Image read_image(const std::string& path);

void write_png(const Image& img, const std::string& path);
void write_ppm(const Image& img, const std::string& path);

}  // namespace qspp
