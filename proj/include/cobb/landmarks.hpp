#pragma once

#include "cobb/contour.hpp"
#include "cobb/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

namespace cobb {

enum Corner : std::size_t { TopLeft = 0, TopRight = 1, BottomLeft = 2, BottomRight = 3 };

/// Four corner landmarks of one vertebral body.
struct VertebraQuad {
    std::array<Point2D, 4> corners{}; // TL, TR, BL, BR
    double score = 1.0;
    int index = -1;

    Point2D centroid() const noexcept
    {
        return 0.25 * (corners[0] + corners[1] + corners[2] + corners[3]);
    }

    /// Closed ring TL -> TR -> BR -> BL.
    std::array<Point2D, 4> ring() const noexcept
    {
        return {corners[TopLeft], corners[TopRight], corners[BottomRight], corners[BottomLeft]};
    }

    /// Top pair lies above the bottom pair and each pair is ordered left to right.
    bool well_ordered() const noexcept
    {
        const double topY = corners[TopLeft].y + corners[TopRight].y;
        const double bottomY = corners[BottomLeft].y + corners[BottomRight].y;
        return topY < bottomY && corners[TopLeft].x < corners[TopRight].x &&
               corners[BottomLeft].x < corners[BottomRight].x;
    }
};

/// Labels the rectangle corners TL, TR, BL, BR. The rectangle axis closest to the
/// image horizontal becomes the left-right axis, so the labelling is stable for
/// vertebrae tilted by less than 45 degrees and independent of how the rectangle
/// was parameterized.
inline VertebraQuad quad_from_rect(const RotatedRect& r, double score = 1.0)
{
    Point2D u = r.axis_u();
    Point2D v = r.axis_v();
    double hu = r.halfWidth;
    double hv = r.halfHeight;
    if (std::abs(u.x) < std::abs(v.x) || (std::abs(u.x) == std::abs(v.x) && std::abs(v.y) < std::abs(u.y))) {
        std::swap(u, v);
        std::swap(hu, hv);
    }
    if (u.x < 0.0 || (u.x == 0.0 && u.y > 0.0)) {
        u = -1.0 * u;
    }
    if (v.y < 0.0 || (v.y == 0.0 && v.x < 0.0)) {
        v = -1.0 * v;
    }
    const Point2D du = hu * u;
    const Point2D dv = hv * v;
    VertebraQuad q;
    q.corners[TopLeft] = r.center - du - dv;
    q.corners[TopRight] = r.center + du - dv;
    q.corners[BottomLeft] = r.center - du + dv;
    q.corners[BottomRight] = r.center + du + dv;
    q.score = score;
    return q;
}

/// The extraction chain for one mask: outer contour, minimum-area rectangle, corner labels.
inline VertebraQuad quad_from_mask(const InstanceMask& m, const std::string& name = "mask")
{
    const Contour c = extract_contour(m, name);
    return quad_from_rect(min_area_rect(c.points), m.score);
}

struct PruneResult {
    std::vector<VertebraQuad> quads;
    std::size_t removed = 0;
    bool shortfall = false;
};

inline void sort_cranial_to_caudal(std::vector<VertebraQuad>& quads)
{
    std::stable_sort(quads.begin(), quads.end(),
                     [](const VertebraQuad& a, const VertebraQuad& b) { return a.centroid().y < b.centroid().y; });
}

/// Orders detections top to bottom and keeps the `target` highest-scoring ones.
/// Score ties are resolved in favour of the more caudal detection, since extra
/// detections are expected in the cervical (top) region.
/// Thoracic plus lumbar vertebrae in a standard AP view.
inline constexpr std::size_t kDefaultTargetCount = 17;

inline PruneResult sort_and_prune(std::vector<VertebraQuad> quads, std::size_t target = kDefaultTargetCount)
{
    PruneResult out;
    sort_cranial_to_caudal(quads);
    if (quads.size() > target) {
        std::vector<std::size_t> order(quads.size());
        for (std::size_t i = 0; i < order.size(); ++i) {
            order[i] = i;
        }
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return quads[a].score > quads[b].score || (quads[a].score == quads[b].score && a > b);
        });
        order.resize(target);
        std::sort(order.begin(), order.end());
        std::vector<VertebraQuad> kept;
        kept.reserve(target);
        for (std::size_t i : order) {
            kept.push_back(quads[i]);
        }
        out.removed = quads.size() - target;
        quads = std::move(kept);
    }
    out.shortfall = quads.size() < target;
    for (std::size_t i = 0; i < quads.size(); ++i) {
        quads[i].index = static_cast<int>(i);
    }
    out.quads = std::move(quads);
    return out;
}

} // namespace cobb
