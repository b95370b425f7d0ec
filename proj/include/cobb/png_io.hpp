#pragma once

// 8-bit PNG reading and writing through libpng. Targets including this header
// must link PNG::PNG.

#include "cobb/error.hpp"
#include "cobb/raster.hpp"

#include <png.h>

#include <csetjmp>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

namespace cobb::png {

namespace detail {

struct FileCloser {
    void operator()(std::FILE* f) const noexcept
    {
        if (f) {
            std::fclose(f);
        }
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

inline FilePtr open(const std::string& path, const char* mode)
{
    FilePtr f(std::fopen(path.c_str(), mode));
    if (!f) {
        throw FormatError("cannot open " + path);
    }
    return f;
}

inline void write_rows(const std::string& path, int width, int height, int colorType,
                       const std::vector<png_bytep>& rows)
{
    FilePtr f = open(path, "wb");
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_write_struct(&png, &info);
        throw FormatError("libpng: cannot allocate writer for " + path);
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw FormatError("libpng: failed writing " + path);
    }
    png_init_io(png, f.get());
    png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), 8, colorType,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    png_write_image(png, const_cast<png_bytepp>(rows.data()));
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

} // namespace detail

/// Reads any PNG as 8-bit grayscale (palette expanded, alpha dropped, colour converted).
inline GrayImage read_gray(const std::string& path)
{
    detail::FilePtr f = detail::open(path, "rb");
    unsigned char sig[8];
    if (std::fread(sig, 1, 8, f.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0) {
        throw FormatError(path + " is not a PNG file");
    }
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw FormatError("libpng: cannot allocate reader for " + path);
    }
    GrayImage image;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw FormatError("libpng: failed reading " + path);
    }
    png_init_io(png, f.get());
    png_set_sig_bytes(png, 8);
    png_read_info(png, info);

    const png_byte colorType = png_get_color_type(png, info);
    const png_byte depth = png_get_bit_depth(png, info);
    if (colorType == PNG_COLOR_TYPE_PALETTE) {
        png_set_palette_to_rgb(png);
    }
    if (colorType == PNG_COLOR_TYPE_GRAY && depth < 8) {
        png_set_expand_gray_1_2_4_to_8(png);
    }
    if (depth == 16) {
        png_set_strip_16(png);
    }
    if (colorType & PNG_COLOR_MASK_ALPHA) {
        png_set_strip_alpha(png);
    }
    if (colorType == PNG_COLOR_TYPE_RGB || colorType == PNG_COLOR_TYPE_RGB_ALPHA ||
        colorType == PNG_COLOR_TYPE_PALETTE) {
        png_set_rgb_to_gray_fixed(png, 1, -1, -1);
    }
    png_read_update_info(png, info);

    const auto width = static_cast<int>(png_get_image_width(png, info));
    const auto height = static_cast<int>(png_get_image_height(png, info));
    image = GrayImage(height, width, 0);
    std::vector<png_bytep> rows(static_cast<std::size_t>(height));
    for (int r = 0; r < height; ++r) {
        rows[static_cast<std::size_t>(r)] = image.data().data() + static_cast<std::size_t>(r) * width;
    }
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return image;
}

inline void write_gray(const std::string& path, const GrayImage& image)
{
    std::vector<png_bytep> rows(static_cast<std::size_t>(image.height()));
    auto* base = const_cast<std::uint8_t*>(image.data().data());
    for (int r = 0; r < image.height(); ++r) {
        rows[static_cast<std::size_t>(r)] = base + static_cast<std::size_t>(r) * image.width();
    }
    detail::write_rows(path, image.width(), image.height(), PNG_COLOR_TYPE_GRAY, rows);
}

inline void write_rgb(const std::string& path, const RgbImage& image)
{
    static_assert(sizeof(Rgb) == 3);
    std::vector<png_bytep> rows(static_cast<std::size_t>(image.height()));
    auto* base = reinterpret_cast<png_bytep>(const_cast<Rgb*>(image.data().data()));
    for (int r = 0; r < image.height(); ++r) {
        rows[static_cast<std::size_t>(r)] = base + static_cast<std::size_t>(r) * image.width() * 3;
    }
    detail::write_rows(path, image.width(), image.height(), PNG_COLOR_TYPE_RGB, rows);
}

/// Foreground = any nonzero pixel.
inline InstanceMask read_mask(const std::string& path, double score = 1.0)
{
    const GrayImage g = read_gray(path);
    InstanceMask m(g.height(), g.width(), score);
    for (std::size_t i = 0; i < g.size(); ++i) {
        m.pixels.data()[i] = g.data()[i] != 0 ? 1 : 0;
    }
    return m;
}

/// Foreground written as 255, background as 0.
inline void write_mask(const std::string& path, const InstanceMask& m)
{
    GrayImage g(m.height(), m.width(), 0);
    for (std::size_t i = 0; i < g.size(); ++i) {
        g.data()[i] = m.pixels.data()[i] != 0 ? 255 : 0;
    }
    write_gray(path, g);
}

} // namespace cobb::png
