#pragma once

// Parametric synthetic spines with closed-form landmarks, their rasterized
// instance masks and an exhaustive reference Cobb search.

#include "cobb/annotation.hpp"
#include "cobb/cobb_engine.hpp"
#include "cobb/error.hpp"
#include "cobb/geometry.hpp"
#include "cobb/random.hpp"
#include "cobb/raster.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace cobb {

/// Vertebrae are rectangles centred on x(t) = cx + amplitude * sin(2 pi periods t + phase),
/// t in [0, 1], spaced evenly down the image and rotated so their vertical axis
/// follows the centerline tangent.
struct SpineParams {
    int imageWidth = 256;
    int imageHeight = 1024;
    int vertebraCount = 17;
    double amplitude = 0.0;
    double periods = 1.0;
    double phase = 0.0;
    double vertebraWidth = 80.0;
    double vertebraHeight = 48.0;
    double gap = 8.0;
    std::uint64_t seed = 0;
    double tiltJitterDeg = 0.0; // extra per-vertebra tilt, uniform in +-jitter, drawn from `seed`
    double margin = 2.0;
};

namespace detail {

inline double centerline_span(const SpineParams& p)
{
    return (p.vertebraCount - 1) * (p.vertebraHeight + p.gap);
}

} // namespace detail

inline CobbMeasurement analytic_cobb(const SpineAnnotation& a, LineMode mode = LineMode::Both);

/// Centerline tangent (dx/dt, dy/dt) at parameter t.
inline Point2D centerline_tangent(const SpineParams& p, double t)
{
    const double w = 2.0 * std::numbers::pi * p.periods;
    const double span = p.vertebraCount > 1 ? detail::centerline_span(p) : 1.0;
    return {p.amplitude * w * std::cos(w * t + p.phase), span};
}

inline SpineAnnotation generate_spine(const SpineParams& p, std::string imageId = "synthetic")
{
    if (p.vertebraCount < 1 || p.imageWidth < 1 || p.imageHeight < 1 || !(p.vertebraWidth > 0.0) ||
        !(p.vertebraHeight > 0.0) || p.gap < 0.0) {
        throw ParameterError("generate_spine: dimensions must be positive");
    }
    const double pitch = p.vertebraHeight + p.gap;
    const double stack = p.vertebraCount * pitch - p.gap;
    if (stack > p.imageHeight - 2.0 * p.margin) {
        throw ParameterError("generate_spine: " + std::to_string(p.vertebraCount) + " vertebrae need " +
                             std::to_string(stack) + " px but only " +
                             std::to_string(p.imageHeight - 2.0 * p.margin) + " px are usable");
    }

    SpineAnnotation a;
    a.imageId = std::move(imageId);
    a.width = p.imageWidth;
    a.height = p.imageHeight;

    Rng rng(p.seed);
    const double cx = p.imageWidth / 2.0;
    const double y0 = (p.imageHeight - stack) / 2.0 + p.vertebraHeight / 2.0;
    const double w = 2.0 * std::numbers::pi * p.periods;
    for (int k = 0; k < p.vertebraCount; ++k) {
        const double t = p.vertebraCount > 1 ? static_cast<double>(k) / (p.vertebraCount - 1) : 0.0;
        const Point2D center{cx + p.amplitude * std::sin(w * t + p.phase), y0 + k * pitch};
        const Point2D tangent = centerline_tangent(p, t);
        const Point2D down = (1.0 / norm(tangent)) * tangent;
        Point2D right{down.y, -down.x};
        if (p.tiltJitterDeg > 0.0) {
            const double jitter = rng.uniform(-p.tiltJitterDeg, p.tiltJitterDeg) * std::numbers::pi / 180.0;
            right = rotate_about(right, {0.0, 0.0}, jitter);
        }
        const Point2D v{-right.y, right.x};
        const Point2D du = (p.vertebraWidth / 2.0) * right;
        const Point2D dv = (p.vertebraHeight / 2.0) * v;

        VertebraQuad q;
        q.corners[TopLeft] = center - du - dv;
        q.corners[TopRight] = center + du - dv;
        q.corners[BottomLeft] = center - du + dv;
        q.corners[BottomRight] = center + du + dv;
        q.index = k;
        for (const Point2D& c : q.corners) {
            if (c.x < p.margin || c.y < p.margin || c.x > p.imageWidth - p.margin ||
                c.y > p.imageHeight - p.margin) {
                throw ParameterError("generate_spine: vertebra " + std::to_string(k) + " leaves the image");
            }
        }
        a.quads.push_back(q);
    }
    a.gtAngles = analytic_cobb(a, LineMode::Both).angles();
    return a;
}

/// Exhaustive reference search. Each line's inclination is reduced modulo 180 degrees
/// and pair angles are folded into [0, 90]; no code is shared with select_cobb_angles.
inline CobbMeasurement analytic_cobb(const SpineAnnotation& a, LineMode mode)
{
    std::vector<double> incl; // degrees in [0, 180)
    for (const VertebraQuad& q : a.quads) {
        auto add = [&](Point2D p, Point2D r) {
            const double dx = r.x - p.x;
            const double dy = r.y - p.y;
            if (dx == 0.0 && dy == 0.0) {
                throw DegenerateError("analytic_cobb: zero-length endplate");
            }
            double deg = std::atan2(dy, dx) * 180.0 / std::numbers::pi;
            deg = std::fmod(deg + 360.0, 180.0);
            incl.push_back(deg);
        };
        if (mode == LineMode::Both) {
            add(q.corners[TopLeft], q.corners[TopRight]);
        }
        add(q.corners[BottomLeft], q.corners[BottomRight]);
    }
    const int n = static_cast<int>(incl.size());
    if (n < 2) {
        throw InsufficientInputError("analytic_cobb: need at least 2 endplate lines");
    }
    auto pairAngle = [&](int i, int j) {
        const double d = std::abs(incl[i] - incl[j]);
        return std::min(d, 180.0 - d);
    };
    auto search = [&](int lo, int hi, double& best, LinePair& pair) {
        best = -1.0;
        pair = kNoPair;
        for (int i = lo; i <= hi; ++i) {
            for (int j = i + 1; j <= hi; ++j) {
                const double ang = pairAngle(i, j);
                if (pair == kNoPair || ang > best + kTieToleranceDeg) {
                    best = ang;
                    pair = {i, j};
                }
            }
        }
        if (pair == kNoPair) {
            best = 0.0;
        }
    };
    CobbMeasurement m;
    search(0, n - 1, m.mt, m.mtPair);
    search(0, m.mtPair[0], m.pt, m.ptPair);
    search(m.mtPair[1], n - 1, m.tl, m.tlPair);
    return m;
}

/// One mask per quad; a pixel is foreground iff its center lies inside or on the quad.
inline std::vector<InstanceMask> rasterize(const SpineAnnotation& a)
{
    std::vector<InstanceMask> masks;
    masks.reserve(a.quads.size());
    for (const VertebraQuad& q : a.quads) {
        InstanceMask m(a.height, a.width, q.score);
        const auto ring = q.ring();
        double minX = ring[0].x, maxX = ring[0].x, minY = ring[0].y, maxY = ring[0].y;
        for (const Point2D& p : ring) {
            minX = std::min(minX, p.x);
            maxX = std::max(maxX, p.x);
            minY = std::min(minY, p.y);
            maxY = std::max(maxY, p.y);
        }
        const int c0 = std::max(0, static_cast<int>(std::floor(minX - 0.5)));
        const int c1 = std::min(a.width - 1, static_cast<int>(std::ceil(maxX)));
        const int r0 = std::max(0, static_cast<int>(std::floor(minY - 0.5)));
        const int r1 = std::min(a.height - 1, static_cast<int>(std::ceil(maxY)));
        for (int r = r0; r <= r1; ++r) {
            for (int c = c0; c <= c1; ++c) {
                if (contains(ring, {c + 0.5, r + 0.5})) {
                    m.pixels(r, c) = 1;
                }
            }
        }
        masks.push_back(std::move(m));
    }
    return masks;
}

/// Random but valid parameters: image height >= 1024 px, vertebra height >= 48 px,
/// tilts well below 45 degrees.
inline SpineParams random_spine_params(Rng& rng)
{
    SpineParams p;
    p.imageWidth = 384;
    p.imageHeight = 1024 + static_cast<int>(rng.uniform_index(257));
    p.vertebraCount = 17;
    p.vertebraHeight = rng.uniform(48.0, 52.0);
    p.gap = rng.uniform(4.0, 6.0);
    p.vertebraWidth = rng.uniform(80.0, 110.0);
    p.amplitude = rng.uniform(0.0, 60.0);
    p.periods = rng.uniform(0.5, 2.0);
    p.phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
    p.tiltJitterDeg = rng.uniform(0.0, 2.0);
    p.seed = rng.next();
    return p;
}

} // namespace cobb
