#include "qspp/image.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <memory>
#include <stdexcept>

#include <png.h>

namespace qspp {
namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

Image read_png_file(const std::string& path) {
    FilePtr fp(std::fopen(path.c_str(), "rb"));
    if (!fp) throw std::runtime_error("cannot open file: " + path);

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw std::runtime_error("png_create_read_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw std::runtime_error("png_create_info_struct failed");
    }
    Image img;
    std::vector<png_bytep> row_ptrs;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw std::runtime_error("failed to decode PNG: " + path);
    }
    png_init_io(png, fp.get());
    png_read_info(png, info);

    // Normalize every color type to tightly packed RGB8.
    png_set_strip_16(png);
    png_set_palette_to_rgb(png);
    png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    png_set_gray_to_rgb(png);
    png_set_strip_alpha(png);
    png_read_update_info(png, info);

    img.height = png_get_image_height(png, info);
    img.width = png_get_image_width(png, info);
    if (png_get_rowbytes(png, info) != img.width * 3) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw std::runtime_error("unexpected PNG row layout: " + path);
    }
    img.rgb.resize(img.height * img.width * 3);
    row_ptrs.resize(img.height);
    for (std::size_t r = 0; r < img.height; ++r) row_ptrs[r] = img.rgb.data() + r * img.width * 3;
    png_read_image(png, row_ptrs.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return img;
}

int next_ppm_token(std::istream& in) {
    // Skips whitespace and '#' comments, returns a non-negative integer.
    while (true) {
        int c = in.peek();
        if (c == EOF) throw std::runtime_error("truncated PPM header");
        if (std::isspace(c)) {
            in.get();
        } else if (c == '#') {
            std::string line;
            std::getline(in, line);
        } else {
            break;
        }
    }
    int value;
    if (!(in >> value) || value < 0) throw std::runtime_error("bad PPM header value");
    return value;
}

Image read_ppm_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    char p, kind;
    in.get(p);
    in.get(kind);
    if (p != 'P' || (kind != '6' && kind != '3')) throw std::runtime_error("not a PPM file: " + path);

    Image img;
    img.width = static_cast<std::size_t>(next_ppm_token(in));
    img.height = static_cast<std::size_t>(next_ppm_token(in));
    const int maxval = next_ppm_token(in);
    if (maxval <= 0 || maxval > 255) {
        throw std::runtime_error("unsupported PPM maxval " + std::to_string(maxval));
    }
    img.rgb.resize(img.height * img.width * 3);

    if (kind == '6') {
        in.get();  // single whitespace byte after maxval
        in.read(reinterpret_cast<char*>(img.rgb.data()), static_cast<std::streamsize>(img.rgb.size()));
        if (in.gcount() != static_cast<std::streamsize>(img.rgb.size())) {
            throw std::runtime_error("truncated PPM data: " + path);
        }
    } else {
        for (auto& byte : img.rgb) {
            const int v = next_ppm_token(in);
            if (v > maxval) throw std::runtime_error("PPM sample exceeds maxval");
            byte = static_cast<std::uint8_t>(v);
        }
    }
    if (maxval != 255) {
        for (auto& byte : img.rgb) {
            byte = static_cast<std::uint8_t>((byte * 255 + maxval / 2) / maxval);
        }
    }
    return img;
}

}  // namespace

Image read_image(const std::string& path) {
    std::ifstream probe(path, std::ios::binary);
    if (!probe) throw std::runtime_error("cannot open file: " + path);
    unsigned char magic[8] = {};
    probe.read(reinterpret_cast<char*>(magic), 8);
    probe.close();
    if (png_sig_cmp(magic, 0, 8) == 0) return read_png_file(path);
    if (magic[0] == 'P' && (magic[1] == '6' || magic[1] == '3')) return read_ppm_file(path);
    throw std::runtime_error("unrecognized image format: " + path);
}

void write_png(const Image& img, const std::string& path) {
    FilePtr fp(std::fopen(path.c_str(), "wb"));
    if (!fp) throw std::runtime_error("cannot write file: " + path);
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw std::runtime_error("png_create_write_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw std::runtime_error("png_create_info_struct failed");
    }
    std::vector<png_bytep> row_ptrs(img.height);
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw std::runtime_error("failed to encode PNG: " + path);
    }
    png_init_io(png, fp.get());
    png_set_IHDR(png, info, static_cast<png_uint_32>(img.width),
                 static_cast<png_uint_32>(img.height), 8, PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (std::size_t r = 0; r < img.height; ++r) {
        row_ptrs[r] = const_cast<png_bytep>(img.rgb.data() + r * img.width * 3);
    }
    png_write_image(png, row_ptrs.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

void write_ppm(const Image& img, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << "P6\n" << img.width << ' ' << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.rgb.data()),
              static_cast<std::streamsize>(img.rgb.size()));
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace qspp
