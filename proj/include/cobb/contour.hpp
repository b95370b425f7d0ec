#pragma once

// Outer-boundary extraction from binary instance masks: 8-connected component
// labelling followed by Suzuki-Abe border following on the largest component.

#include "cobb/error.hpp"
#include "cobb/geometry.hpp"
#include "cobb/raster.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace cobb {

struct Contour {
    /// Boundary pixel centers in tracing order, counter-clockwise (positive signed area).
    std::vector<Point2D> points;
    /// Number of 8-connected foreground regions in the source mask; more than one
    /// means the mask violated the one-region-per-vertebra expectation.
    std::size_t regionCount = 0;
};

namespace detail {

// 8-neighbourhood in clockwise screen order (y down), starting east.
inline constexpr std::array<int, 8> kNeighbourRow{0, 1, 1, 1, 0, -1, -1, -1};
inline constexpr std::array<int, 8> kNeighbourCol{1, 1, 0, -1, -1, -1, 0, 1};

inline int neighbour_index(int dRow, int dCol) noexcept
{
    for (int d = 0; d < 8; ++d) {
        if (kNeighbourRow[d] == dRow && kNeighbourCol[d] == dCol) {
            return d;
        }
    }
    return -1;
}

struct Components {
    Raster<std::int32_t> labels; // 0 = background, 1.. = component id
    std::vector<std::size_t> sizes; // sizes[id - 1]
};

inline Components label_components(const InstanceMask& m)
{
    Components c{Raster<std::int32_t>(m.height(), m.width(), 0), {}};
    std::vector<std::pair<int, int>> stack;
    for (int r = 0; r < m.height(); ++r) {
        for (int col = 0; col < m.width(); ++col) {
            if (!m.on(r, col) || c.labels(r, col) != 0) {
                continue;
            }
            const auto id = static_cast<std::int32_t>(c.sizes.size() + 1);
            std::size_t size = 0;
            stack.assign(1, {r, col});
            c.labels(r, col) = id;
            while (!stack.empty()) {
                const auto [pr, pc] = stack.back();
                stack.pop_back();
                ++size;
                for (int d = 0; d < 8; ++d) {
                    const int nr = pr + kNeighbourRow[d];
                    const int nc = pc + kNeighbourCol[d];
                    if (m.pixels.in_bounds(nr, nc) && m.on(nr, nc) && c.labels(nr, nc) == 0) {
                        c.labels(nr, nc) = id;
                        stack.emplace_back(nr, nc);
                    }
                }
            }
            c.sizes.push_back(size);
        }
    }
    return c;
}

inline std::vector<Point2D> pixel_square_hull(const std::vector<std::pair<int, int>>& pixels)
{
    std::vector<Point2D> corners;
    corners.reserve(pixels.size() * 4);
    for (const auto& [r, c] : pixels) {
        const double x = c;
        const double y = r;
        corners.insert(corners.end(), {{x, y}, {x + 1, y}, {x + 1, y + 1}, {x, y + 1}});
    }
    return convex_hull(corners);
}

} // namespace detail

/// Traces the outer border of the largest 8-connected foreground region of `m`.
/// Regions whose border is a single pixel or a straight run of pixels yield the
/// convex hull of the pixels' unit squares instead, so the result always has at
/// least 3 non-collinear points.
inline Contour extract_contour(const InstanceMask& m, const std::string& name = "mask")
{
    detail::Components comp = detail::label_components(m);
    if (comp.sizes.empty()) {
        throw DegenerateError("extract_contour: no foreground in " + name);
    }
    const auto largest =
        static_cast<std::int32_t>(std::max_element(comp.sizes.begin(), comp.sizes.end()) - comp.sizes.begin() + 1);

    auto member = [&](int r, int c) { return comp.labels.in_bounds(r, c) && comp.labels(r, c) == largest; };

    // Raster-order first pixel of the region: its west neighbour is background,
    // which makes it the starting point of the outer border.
    int startR = -1;
    int startC = -1;
    for (int r = 0; r < m.height() && startR < 0; ++r) {
        for (int c = 0; c < m.width(); ++c) {
            if (member(r, c)) {
                startR = r;
                startC = c;
                break;
            }
        }
    }

    std::vector<std::pair<int, int>> trace;
    // Clockwise search around the start, beginning at its west neighbour.
    int first = -1;
    for (int s = 0; s < 8; ++s) {
        const int d = (4 + s) % 8;
        if (member(startR + detail::kNeighbourRow[d], startC + detail::kNeighbourCol[d])) {
            first = d;
            break;
        }
    }
    if (first < 0) {
        trace.emplace_back(startR, startC);
    } else {
        const int r1 = startR + detail::kNeighbourRow[first];
        const int c1 = startC + detail::kNeighbourCol[first];
        int r2 = r1;
        int c2 = c1;
        int r3 = startR;
        int c3 = startC;
        while (true) {
            trace.emplace_back(r3, c3);
            // Counter-clockwise search around (r3, c3) starting just after (r2, c2).
            const int from = detail::neighbour_index(r2 - r3, c2 - c3);
            int r4 = r3;
            int c4 = c3;
            for (int s = 1; s <= 8; ++s) {
                const int d = ((from - s) % 8 + 8) % 8;
                if (member(r3 + detail::kNeighbourRow[d], c3 + detail::kNeighbourCol[d])) {
                    r4 = r3 + detail::kNeighbourRow[d];
                    c4 = c3 + detail::kNeighbourCol[d];
                    break;
                }
            }
            if (r4 == startR && c4 == startC && r3 == r1 && c3 == c1) {
                break;
            }
            r2 = r3;
            c2 = c3;
            r3 = r4;
            c3 = c4;
        }
    }

    Contour out;
    out.regionCount = comp.sizes.size();
    out.points.reserve(trace.size());
    for (const auto& [r, c] : trace) {
        out.points.push_back({c + 0.5, r + 0.5});
    }

    if (convex_hull(out.points).size() < 3) {
        out.points = detail::pixel_square_hull(trace);
        return out;
    }
    if (signed_area(out.points) < 0.0) {
        std::reverse(out.points.begin(), out.points.end());
    }
    return out;
}

/// True when the pixel is foreground and touches background (8-neighbourhood) or the image edge.
inline bool is_border_pixel(const InstanceMask& m, int r, int c) noexcept
{
    if (!m.pixels.in_bounds(r, c) || !m.on(r, c)) {
        return false;
    }
    for (int d = 0; d < 8; ++d) {
        const int nr = r + detail::kNeighbourRow[d];
        const int nc = c + detail::kNeighbourCol[d];
        if (!m.pixels.in_bounds(nr, nc) || !m.on(nr, nc)) {
            return true;
        }
    }
    return false;
}

} // namespace cobb
