#pragma once

#include "cobb/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <vector>

namespace cobb {

/// Image-plane point: x grows rightward, y grows downward. Pixel (col, row)
/// covers the unit square [col, col+1) x [row, row+1), so its center is at
/// (col + 0.5, row + 0.5).
struct Point2D {
    double x = 0.0;
    double y = 0.0;

    friend constexpr Point2D operator+(Point2D a, Point2D b) noexcept { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Point2D operator-(Point2D a, Point2D b) noexcept { return {a.x - b.x, a.y - b.y}; }
    friend constexpr Point2D operator*(double s, Point2D a) noexcept { return {s * a.x, s * a.y}; }
    friend constexpr Point2D operator*(Point2D a, double s) noexcept { return {s * a.x, s * a.y}; }
    friend constexpr bool operator==(Point2D, Point2D) noexcept = default;
};

constexpr double dot(Point2D a, Point2D b) noexcept { return a.x * b.x + a.y * b.y; }
constexpr double cross(Point2D a, Point2D b) noexcept { return a.x * b.y - a.y * b.x; }
inline double norm(Point2D a) noexcept { return std::hypot(a.x, a.y); }

/// Cross product of (b - a) and (c - a); positive when a, b, c turn counter-clockwise
/// with respect to the coordinate axes.
constexpr double orient(Point2D a, Point2D b, Point2D c) noexcept { return cross(b - a, c - a); }

inline Point2D rotate_about(Point2D p, Point2D center, double radians) noexcept
{
    const double c = std::cos(radians);
    const double s = std::sin(radians);
    const Point2D d = p - center;
    return {center.x + c * d.x - s * d.y, center.y + s * d.x + c * d.y};
}

/// Shoelace sum; positive for counter-clockwise rings (axis convention, not screen convention).
inline double signed_area(std::span<const Point2D> ring) noexcept
{
    const std::size_t n = ring.size();
    if (n < 3) {
        return 0.0;
    }
    double twice = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        twice += cross(ring[i], ring[(i + 1) % n]);
    }
    return 0.5 * twice;
}

inline double polygon_area(std::span<const Point2D> ring) noexcept { return std::abs(signed_area(ring)); }

/// Point-in-polygon for an arbitrary simple ring; points on an edge count as inside.
inline bool contains(std::span<const Point2D> ring, Point2D p, double eps = 1e-12) noexcept
{
    const std::size_t n = ring.size();
    bool inside = false;
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Point2D a = ring[j];
        const Point2D b = ring[i];
        const Point2D ab = b - a;
        const double len = norm(ab);
        if (std::abs(cross(ab, p - a)) <= eps * std::max(1.0, len) && dot(p - a, p - b) <= eps) {
            return true;
        }
        if ((a.y > p.y) != (b.y > p.y)) {
            const double xCross = a.x + (p.y - a.y) * ab.x / ab.y;
            if (p.x < xCross) {
                inside = !inside;
            }
        }
    }
    return inside;
}

/// Andrew's monotone chain. Output is counter-clockwise (positive signed area) with
/// no three collinear vertices; duplicate and collinear inputs collapse to 1 or 2 points.
inline std::vector<Point2D> convex_hull(std::span<const Point2D> points)
{
    std::vector<Point2D> pts(points.begin(), points.end());
    std::sort(pts.begin(), pts.end(), [](Point2D a, Point2D b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3) {
        return pts;
    }

    std::vector<Point2D> hull(2 * pts.size());
    std::size_t k = 0;
    for (const Point2D& p : pts) {
        while (k >= 2 && orient(hull[k - 2], hull[k - 1], p) <= 0.0) {
            --k;
        }
        hull[k++] = p;
    }
    for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
        const Point2D p = pts[i];
        while (k >= lower && orient(hull[k - 2], hull[k - 1], p) <= 0.0) {
            --k;
        }
        hull[k++] = p;
    }
    hull.resize(k - 1);
    return hull;
}

/// Oriented rectangle. `angle` is the direction of the half-width axis, kept in
/// [-pi/2, pi/2) because a rectangle is unchanged by a half-turn.
struct RotatedRect {
    Point2D center;
    double halfWidth = 0.0;
    double halfHeight = 0.0;
    double angle = 0.0;

    double area() const noexcept { return 4.0 * halfWidth * halfHeight; }
    Point2D axis_u() const noexcept { return {std::cos(angle), std::sin(angle)}; }
    Point2D axis_v() const noexcept { return {-std::sin(angle), std::cos(angle)}; }

    std::vector<Point2D> corners() const
    {
        const Point2D u = halfWidth * axis_u();
        const Point2D v = halfHeight * axis_v();
        return {center - u - v, center + u - v, center + u + v, center - u + v};
    }
};

inline double canonical_rect_angle(double a) noexcept
{
    constexpr double half = std::numbers::pi / 2.0;
    a = std::remainder(a, std::numbers::pi);
    if (a >= half) {
        a -= std::numbers::pi;
    }
    if (a < -half) {
        a += std::numbers::pi;
    }
    return a;
}

/// Minimum-area enclosing rectangle by rotating calipers over the convex hull.
/// Throws DegenerateError for fewer than 3 points or collinear input.
inline RotatedRect min_area_rect(std::span<const Point2D> points)
{
    if (points.size() < 3) {
        throw DegenerateError("min_area_rect: need at least 3 points, got " + std::to_string(points.size()));
    }
    const std::vector<Point2D> hull = convex_hull(points);
    const std::size_t n = hull.size();
    if (n < 3) {
        throw DegenerateError("min_area_rect: input points are collinear");
    }

    auto at = [&](std::size_t i) -> const Point2D& { return hull[i % n]; };

    // Calipers: `right` maximizes projection on the edge direction, `top` maximizes
    // distance from the edge line, `left` minimizes the projection.
    std::size_t right = 1;
    std::size_t top = 1;
    std::size_t left = 1;
    double bestArea = INFINITY;
    RotatedRect best;

    for (std::size_t i = 0; i < n; ++i) {
        const Point2D origin = at(i);
        const Point2D edge = at(i + 1) - origin;
        const Point2D u = (1.0 / norm(edge)) * edge;
        const Point2D v{-u.y, u.x};

        if (i == 0) {
            right = 1;
        }
        while (dot(u, at(right + 1) - origin) > dot(u, at(right) - origin)) {
            ++right;
        }
        if (i == 0) {
            top = right;
        }
        while (dot(v, at(top + 1) - origin) > dot(v, at(top) - origin)) {
            ++top;
        }
        if (i == 0) {
            left = top;
        }
        while (dot(u, at(left + 1) - origin) < dot(u, at(left) - origin)) {
            ++left;
        }

        const double maxU = dot(u, at(right) - origin);
        const double minU = dot(u, at(left) - origin);
        const double maxV = dot(v, at(top) - origin);
        const double area = (maxU - minU) * maxV;
        if (area < bestArea) {
            bestArea = area;
            best.center = origin + (0.5 * (maxU + minU)) * u + (0.5 * maxV) * v;
            best.halfWidth = 0.5 * (maxU - minU);
            best.halfHeight = 0.5 * maxV;
            best.angle = canonical_rect_angle(std::atan2(u.y, u.x));
        }
    }
    return best;
}

} // namespace cobb
