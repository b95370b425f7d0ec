#pragma once

// Overlay rendering: vertebra outlines, endplate lines, the three realizing line
// pairs and a caption with the measured triple.

#include "cobb/annotation.hpp"
#include "cobb/cobb_engine.hpp"
#include "cobb/raster.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

namespace cobb::render {

inline constexpr Rgb kQuadColor{0, 200, 0};
inline constexpr Rgb kLineColor{160, 160, 160};
inline constexpr Rgb kPtColor{255, 64, 64};
inline constexpr Rgb kMtColor{64, 128, 255};
inline constexpr Rgb kTlColor{255, 200, 0};
inline constexpr Rgb kTextColor{255, 255, 255};

inline RgbImage to_rgb(const GrayImage& g)
{
    RgbImage out(g.height(), g.width());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto v = g.data()[i];
        out.data()[i] = {v, v, v};
    }
    return out;
}

inline void put(RgbImage& img, int x, int y, Rgb c) noexcept
{
    if (img.in_bounds(y, x)) {
        img(y, x) = c;
    }
}

inline void draw_line(RgbImage& img, Point2D a, Point2D b, Rgb c, int thickness = 1)
{
    const double len = std::max(std::abs(b.x - a.x), std::abs(b.y - a.y));
    const int steps = std::max(1, static_cast<int>(std::ceil(len)));
    const int lo = -(thickness - 1) / 2;
    const int hi = thickness / 2;
    for (int s = 0; s <= steps; ++s) {
        const double t = static_cast<double>(s) / steps;
        const int x = static_cast<int>(std::floor(a.x + t * (b.x - a.x)));
        const int y = static_cast<int>(std::floor(a.y + t * (b.y - a.y)));
        for (int dy = lo; dy <= hi; ++dy) {
            for (int dx = lo; dx <= hi; ++dx) {
                put(img, x + dx, y + dy, c);
            }
        }
    }
}

namespace detail {

struct Glyph {
    char ch;
    std::array<std::uint8_t, 7> rows; // 5 bits per row, MSB = leftmost column
};

inline constexpr std::array<Glyph, 22> kFont{{
    {'0', {0x0E, 0x11, 0x13, 0x15, 0x19, 0x11, 0x0E}},
    {'1', {0x04, 0x0C, 0x04, 0x04, 0x04, 0x04, 0x0E}},
    {'2', {0x0E, 0x11, 0x01, 0x02, 0x04, 0x08, 0x1F}},
    {'3', {0x1F, 0x02, 0x04, 0x02, 0x01, 0x11, 0x0E}},
    {'4', {0x02, 0x06, 0x0A, 0x12, 0x1F, 0x02, 0x02}},
    {'5', {0x1F, 0x10, 0x1E, 0x01, 0x01, 0x11, 0x0E}},
    {'6', {0x06, 0x08, 0x10, 0x1E, 0x11, 0x11, 0x0E}},
    {'7', {0x1F, 0x01, 0x02, 0x04, 0x08, 0x08, 0x08}},
    {'8', {0x0E, 0x11, 0x11, 0x0E, 0x11, 0x11, 0x0E}},
    {'9', {0x0E, 0x11, 0x11, 0x0F, 0x01, 0x02, 0x0C}},
    {'.', {0x00, 0x00, 0x00, 0x00, 0x00, 0x0C, 0x0C}},
    {',', {0x00, 0x00, 0x00, 0x00, 0x0C, 0x04, 0x08}},
    {'(', {0x02, 0x04, 0x08, 0x08, 0x08, 0x04, 0x02}},
    {')', {0x08, 0x04, 0x02, 0x02, 0x02, 0x04, 0x08}},
    {'-', {0x00, 0x00, 0x00, 0x1F, 0x00, 0x00, 0x00}},
    {' ', {0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00}},
    {'P', {0x1E, 0x11, 0x11, 0x1E, 0x10, 0x10, 0x10}},
    {'T', {0x1F, 0x04, 0x04, 0x04, 0x04, 0x04, 0x04}},
    {'M', {0x11, 0x1B, 0x15, 0x15, 0x11, 0x11, 0x11}},
    {'L', {0x10, 0x10, 0x10, 0x10, 0x10, 0x10, 0x1F}},
    {':', {0x00, 0x0C, 0x0C, 0x00, 0x0C, 0x0C, 0x00}},
    {'/', {0x01, 0x01, 0x02, 0x04, 0x08, 0x10, 0x10}},
}};

inline const Glyph* find_glyph(char c) noexcept
{
    for (const Glyph& g : kFont) {
        if (g.ch == c) {
            return &g;
        }
    }
    return nullptr;
}

} // namespace detail

/// Draws `text` with its top-left corner at (x, y); unknown characters render blank.
inline void draw_text(RgbImage& img, int x, int y, const std::string& text, Rgb c, int scale = 2)
{
    for (char ch : text) {
        if (const detail::Glyph* g = detail::find_glyph(ch)) {
            for (int r = 0; r < 7; ++r) {
                for (int col = 0; col < 5; ++col) {
                    if (g->rows[static_cast<std::size_t>(r)] & (0x10 >> col)) {
                        for (int sy = 0; sy < scale; ++sy) {
                            for (int sx = 0; sx < scale; ++sx) {
                                put(img, x + col * scale + sx, y + r * scale + sy, c);
                            }
                        }
                    }
                }
            }
        }
        x += 6 * scale;
    }
}

inline std::string caption(const CobbMeasurement& m)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "(%.1f, %.1f, %.1f)", m.pt, m.mt, m.tl);
    return buf;
}

/// Extends a line segment across the image so highlighted pairs read clearly.
inline void draw_extended(RgbImage& img, const EndplateLine& l, Rgb c)
{
    const double reach = img.width() + img.height();
    const Point2D mid = 0.5 * (l.p1 + l.p2);
    draw_line(img, mid - reach * l.direction, mid + reach * l.direction, c, 2);
}

/// Renders quads and endplate lines; with a measurement also the PT, MT and TL pairs
/// and the caption "(pt, mt, tl)".
inline RgbImage overlay(const GrayImage& base, const SpineAnnotation& a,
                        const std::optional<CobbMeasurement>& m = std::nullopt, LineMode mode = LineMode::Both)
{
    RgbImage img = to_rgb(base);
    for (const VertebraQuad& q : a.quads) {
        const auto ring = q.ring();
        for (std::size_t k = 0; k < 4; ++k) {
            draw_line(img, ring[k], ring[(k + 1) % 4], kQuadColor);
        }
    }
    if (!m) {
        return img;
    }
    const std::vector<EndplateLine> lines = candidate_lines(a, mode);
    for (const EndplateLine& l : lines) {
        draw_line(img, l.p1, l.p2, kLineColor);
    }
    auto highlight = [&](const LinePair& p, Rgb c) {
        if (p == kNoPair) {
            return;
        }
        for (int idx : p) {
            if (idx >= 0 && static_cast<std::size_t>(idx) < lines.size()) {
                draw_extended(img, lines[static_cast<std::size_t>(idx)], c);
            }
        }
    };
    highlight(m->ptPair, kPtColor);
    highlight(m->tlPair, kTlColor);
    highlight(m->mtPair, kMtColor);
    draw_text(img, 4, 4, caption(*m), kTextColor);
    return img;
}

} // namespace cobb::render
