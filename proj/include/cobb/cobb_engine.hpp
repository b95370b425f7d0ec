#pragma once

// Endplate lines and the three-angle Cobb search.
//
// Every vertebra contributes its top and/or bottom endplate line; MT is the largest
// pairwise angle over all lines, PT the largest angle among lines at or above MT's
// upper line, TL the largest among lines at or below MT's lower line.

#include "cobb/annotation.hpp"
#include "cobb/error.hpp"
#include "cobb/geometry.hpp"
#include "cobb/landmarks.hpp"
#include "cobb/raster.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace cobb {

enum class Plate { Top, Bottom };

enum class LineMode { Both, Lower };

struct EndplateLine {
    int vertebraIndex = -1;
    Plate plate = Plate::Top;
    Point2D p1; // p1.x <= p2.x
    Point2D p2;
    Point2D direction; // unit length
    std::optional<double> slope; // empty for vertical lines
};

using LinePair = std::array<int, 2>;
inline constexpr LinePair kNoPair{-1, -1};

struct CobbMeasurement {
    double pt = 0.0;
    double mt = 0.0;
    double tl = 0.0;
    LinePair ptPair = kNoPair;
    LinePair mtPair = kNoPair;
    LinePair tlPair = kNoPair;

    AngleTriple angles() const noexcept { return {pt, mt, tl}; }
};

/// Candidate angles closer than this (degrees) are ties, resolved toward the most cranial pair.
inline constexpr double kTieToleranceDeg = 1e-9;

inline constexpr double kRadToDeg = 180.0 / std::numbers::pi;

inline EndplateLine make_endplate_line(Point2D a, Point2D b, int vertebraIndex, Plate plate)
{
    if (a.x > b.x) {
        std::swap(a, b);
    }
    const Point2D d = b - a;
    const double len = norm(d);
    if (!(len > 0.0) || !std::isfinite(len)) {
        throw DegenerateError("endplate line of vertebra " + std::to_string(vertebraIndex) +
                              (plate == Plate::Top ? " (top)" : " (bottom)") + " has coincident corners");
    }
    EndplateLine l;
    l.vertebraIndex = vertebraIndex;
    l.plate = plate;
    l.p1 = a;
    l.p2 = b;
    l.direction = (1.0 / len) * d;
    if (std::abs(d.x) > 1e-12) {
        l.slope = d.y / d.x;
    }
    return l;
}

/// Top line through (TL, TR), bottom line through (BL, BR).
inline std::pair<EndplateLine, EndplateLine> endplate_lines(const VertebraQuad& q)
{
    return {make_endplate_line(q.corners[TopLeft], q.corners[TopRight], q.index, Plate::Top),
            make_endplate_line(q.corners[BottomLeft], q.corners[BottomRight], q.index, Plate::Bottom)};
}

/// Acute angle between two undirected lines in degrees, in [0, 90]. Agrees with
/// |atan((m1 - m2) / (1 + m1 m2))| wherever the slope form is defined.
inline double angle_between(const EndplateLine& a, const EndplateLine& b) noexcept
{
    const double c = std::abs(cross(a.direction, b.direction));
    const double d = std::abs(dot(a.direction, b.direction));
    return std::atan2(c, d) * kRadToDeg;
}

namespace detail {

struct BestPair {
    double angle = -INFINITY;
    LinePair pair = kNoPair;
};

// Scans pairs (i, j), first <= i < j <= last, of a precomputed symmetric angle table.
inline BestPair best_pair(const std::vector<double>& table, std::size_t n, int first, int last)
{
    BestPair best;
    for (int i = first; i <= last; ++i) {
        const double* row = table.data() + static_cast<std::size_t>(i) * n;
        for (int j = i + 1; j <= last; ++j) {
            if (row[j] > best.angle + kTieToleranceDeg) {
                best.angle = row[j];
                best.pair = {i, j};
            }
        }
    }
    if (best.pair == kNoPair) {
        best.angle = 0.0;
    }
    return best;
}

} // namespace detail

/// `lines` must be ordered cranial to caudal (per vertebra, top before bottom).
inline CobbMeasurement select_cobb_angles(const std::vector<EndplateLine>& lines)
{
    if (lines.size() < 2) {
        throw InsufficientInputError("select_cobb_angles: need at least 2 endplate lines, got " +
                                     std::to_string(lines.size()));
    }
    const std::size_t n = lines.size();
    std::vector<double> table(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            table[i * n + j] = table[j * n + i] = angle_between(lines[i], lines[j]);
        }
    }

    const auto last = static_cast<int>(n) - 1;
    const detail::BestPair mt = detail::best_pair(table, n, 0, last);
    const detail::BestPair pt = detail::best_pair(table, n, 0, mt.pair[0]);
    const detail::BestPair tl = detail::best_pair(table, n, mt.pair[1], last);

    CobbMeasurement m;
    m.mt = mt.angle;
    m.mtPair = mt.pair;
    m.pt = pt.angle;
    m.ptPair = pt.pair;
    m.tl = tl.angle;
    m.tlPair = tl.pair;
    return m;
}

/// Candidate lines of an annotation in its stored (cranial to caudal) order.
inline std::vector<EndplateLine> candidate_lines(const SpineAnnotation& a, LineMode mode = LineMode::Both)
{
    std::vector<EndplateLine> lines;
    lines.reserve(a.quads.size() * 2);
    for (std::size_t i = 0; i < a.quads.size(); ++i) {
        VertebraQuad q = a.quads[i];
        if (q.index < 0) {
            q.index = static_cast<int>(i);
        }
        auto [top, bottom] = endplate_lines(q);
        if (mode == LineMode::Both) {
            lines.push_back(top);
        }
        lines.push_back(bottom);
    }
    return lines;
}

inline CobbMeasurement measure_from_landmarks(const SpineAnnotation& a, LineMode mode = LineMode::Both)
{
    if (a.quads.empty()) {
        throw InsufficientInputError("measure_from_landmarks: annotation '" + a.imageId + "' has no vertebrae");
    }
    return select_cobb_angles(candidate_lines(a, mode));
}

struct MaskMeasureOptions {
    std::size_t targetCount = kDefaultTargetCount;
    LineMode lineMode = LineMode::Both;
};

struct MaskMeasurement {
    CobbMeasurement cobb;
    SpineAnnotation annotation; // recovered quads, pruned and ordered
    bool shortfall = false;
    std::size_t pruned = 0;
    std::size_t emptyMasks = 0;
    std::vector<std::string> warnings;
};

/// Full raster pipeline: per-mask contour, minimum-area rectangle and corner labels,
/// then ordering, pruning and the angle search.
inline MaskMeasurement measure_from_masks(const std::vector<InstanceMask>& masks, const MaskMeasureOptions& opt = {},
                                          const std::string& imageId = {})
{
    MaskMeasurement out;
    out.annotation.imageId = imageId;
    std::vector<VertebraQuad> quads;
    for (std::size_t i = 0; i < masks.size(); ++i) {
        const InstanceMask& m = masks[i];
        if (i == 0) {
            out.annotation.width = m.width();
            out.annotation.height = m.height();
        } else if (m.width() != out.annotation.width || m.height() != out.annotation.height) {
            throw ShapeError("measure_from_masks: mask " + std::to_string(i) + " is " + std::to_string(m.height()) +
                             "x" + std::to_string(m.width()) + ", expected " + std::to_string(out.annotation.height) +
                             "x" + std::to_string(out.annotation.width));
        }
        if (m.foreground_count() == 0) {
            ++out.emptyMasks;
            out.warnings.push_back("mask " + std::to_string(i) + " has no foreground; skipped");
            continue;
        }
        const Contour c = extract_contour(m, "mask " + std::to_string(i));
        if (c.regionCount > 1) {
            out.warnings.push_back("mask " + std::to_string(i) + " has " + std::to_string(c.regionCount) +
                                   " disconnected regions; using the largest");
        }
        quads.push_back(quad_from_rect(min_area_rect(c.points), m.score));
    }
    if (quads.size() < 2) {
        throw InsufficientInputError("measure_from_masks: need at least 2 non-empty masks, got " +
                                     std::to_string(quads.size()));
    }
    PruneResult pr = sort_and_prune(std::move(quads), opt.targetCount);
    out.shortfall = pr.shortfall;
    out.pruned = pr.removed;
    if (pr.shortfall) {
        out.warnings.push_back("only " + std::to_string(pr.quads.size()) + " vertebrae detected, expected " +
                               std::to_string(opt.targetCount));
    }
    out.annotation.quads = std::move(pr.quads);
    out.cobb = measure_from_landmarks(out.annotation, opt.lineMode);
    return out;
}

} // namespace cobb
