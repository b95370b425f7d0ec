#pragma once

// Landmark import, the excluded-image list, deterministic splits, augmentation
// planning and landmark-preserving image transforms.

#include "cobb/annotation.hpp"
#include "cobb/error.hpp"
#include "cobb/geometry.hpp"
#include "cobb/random.hpp"
#include "cobb/raster.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace cobb {

// ---------------------------------------------------------------------------
// Landmark import

/// How a landmark file lays out its coordinates.
struct LandmarkLayout {
    std::size_t pointCount = 68;
    bool planar = false;      // false: x1 y1 x2 y2 ...; true: all x, then all y
    bool normalized = false;  // coordinates in [0, 1], scaled by the image size
    /// cornerOrder[k] = which corner the k-th point of each vertebra is.
    std::array<Corner, 4> cornerOrder{TopLeft, TopRight, BottomLeft, BottomRight};
};

namespace detail {

inline std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split_on(std::string_view s, char sep)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        const auto pos = s.find(sep, start);
        const auto end = pos == std::string_view::npos ? s.size() : pos;
        out.push_back(trim(s.substr(start, end - start)));
        if (pos == std::string_view::npos) {
            break;
        }
        start = pos + 1;
    }
    return out;
}

inline Corner corner_from_name(const std::string& name)
{
    if (name == "TL") return TopLeft;
    if (name == "TR") return TopRight;
    if (name == "BL") return BottomLeft;
    if (name == "BR") return BottomRight;
    throw FormatError("layout: unknown corner name '" + name + "' (expected TL, TR, BL or BR)");
}

inline double parse_real(const std::string& tok)
{
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size() || !std::isfinite(v)) {
        throw FormatError("landmarks: bad number '" + tok + "'");
    }
    return v;
}

} // namespace detail

/// Parses `values=interleaved|planar;coords=pixels|normalized;corners=TL,TR,BL,BR;points=68`.
/// Every key is optional.
inline LandmarkLayout parse_layout(std::string_view descriptor)
{
    LandmarkLayout layout;
    for (const std::string& item : detail::split_on(descriptor, ';')) {
        if (item.empty()) {
            continue;
        }
        const auto eq = item.find('=');
        if (eq == std::string::npos) {
            throw FormatError("layout: expected key=value, got '" + item + "'");
        }
        const std::string key = detail::trim(item.substr(0, eq));
        const std::string value = detail::trim(item.substr(eq + 1));
        if (key == "values") {
            if (value != "interleaved" && value != "planar") {
                throw FormatError("layout: values must be interleaved or planar");
            }
            layout.planar = value == "planar";
        } else if (key == "coords") {
            if (value != "pixels" && value != "normalized") {
                throw FormatError("layout: coords must be pixels or normalized");
            }
            layout.normalized = value == "normalized";
        } else if (key == "corners") {
            const auto names = detail::split_on(value, ',');
            if (names.size() != 4) {
                throw FormatError("layout: corners needs 4 names");
            }
            std::set<Corner> seen;
            for (std::size_t k = 0; k < 4; ++k) {
                layout.cornerOrder[k] = detail::corner_from_name(names[k]);
                seen.insert(layout.cornerOrder[k]);
            }
            if (seen.size() != 4) {
                throw FormatError("layout: corners must be a permutation of TL, TR, BL, BR");
            }
        } else if (key == "points") {
            layout.pointCount = static_cast<std::size_t>(detail::parse_real(value));
            if (layout.pointCount == 0 || layout.pointCount % 4 != 0) {
                throw FormatError("layout: points must be a positive multiple of 4");
            }
        } else {
            throw FormatError("layout: unknown key '" + key + "'");
        }
    }
    return layout;
}

/// Reads whitespace- or comma-separated coordinates into an annotation with quads
/// sorted cranial to caudal. Corner-order violations and out-of-image landmarks are
/// recorded in `warnings`; a wrong point count is a FormatError.
inline SpineAnnotation parse_landmarks(std::string_view contents, const LandmarkLayout& layout, std::string imageId,
                                       int width, int height)
{
    std::string text(contents);
    std::replace(text.begin(), text.end(), ',', ' ');
    std::istringstream in(text);
    std::vector<double> values;
    std::string tok;
    while (in >> tok) {
        values.push_back(detail::parse_real(tok));
    }
    if (values.size() != 2 * layout.pointCount) {
        const std::string observed = values.size() % 2 == 0 ? std::to_string(values.size() / 2) + " points"
                                                            : std::to_string(values.size()) + " values";
        throw FormatError("landmarks '" + imageId + "': expected " + std::to_string(layout.pointCount) +
                          " points, found " + observed);
    }
    if (layout.normalized && (width <= 0 || height <= 0)) {
        throw ParameterError("landmarks '" + imageId + "': normalized coordinates need the image size");
    }

    const std::size_t n = layout.pointCount;
    auto point = [&](std::size_t i) -> Point2D {
        Point2D p = layout.planar ? Point2D{values[i], values[n + i]} : Point2D{values[2 * i], values[2 * i + 1]};
        if (layout.normalized) {
            p.x *= width;
            p.y *= height;
        }
        return p;
    };

    SpineAnnotation a;
    a.imageId = std::move(imageId);
    a.width = width;
    a.height = height;
    for (std::size_t v = 0; v < n / 4; ++v) {
        VertebraQuad q;
        for (std::size_t k = 0; k < 4; ++k) {
            q.corners[layout.cornerOrder[k]] = point(4 * v + k);
        }
        q.index = static_cast<int>(v);
        if (!q.well_ordered()) {
            a.warnings.push_back("vertebra " + std::to_string(v) + " corners are not in TL, TR, BL, BR order");
        }
        a.quads.push_back(q);
    }
    sort_cranial_to_caudal(a.quads);
    for (std::size_t i = 0; i < a.quads.size(); ++i) {
        a.quads[i].index = static_cast<int>(i);
    }
    if (width > 0 && height > 0) {
        a.flag_out_of_bounds();
    }
    return a;
}

// ---------------------------------------------------------------------------
// Exclusions

/// Trims and collapses internal whitespace runs to one space.
inline std::string normalize_id(std::string_view id)
{
    std::string out;
    bool pendingSpace = false;
    for (char c : id) {
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            pendingSpace = !out.empty();
            continue;
        }
        if (pendingSpace) {
            out.push_back(' ');
            pendingSpace = false;
        }
        out.push_back(c);
    }
    return out;
}

struct ExclusionList {
    std::set<std::string> imageIds;

    bool contains(std::string_view id) const { return imageIds.count(normalize_id(id)) != 0; }

    /// Images with mis-ordered or anatomically atypical landmark annotations.
    static ExclusionList defaults()
    {
        return {{
            "sunhl-1th-01-Mar-2017-311 C AP.jpg",
            "sunhl-1th-01-Mar-2017-312 C AP.jpg",
            "sunhl-1th-14-Feb-2017-285 A AP.jpg",
            "sunhl-1th-22-Feb-2017-291 E AP2.jpg",
            "sunhl-1th-28-Feb-2017-243 C AP.jpg",
            "sunhl-1th-28-Feb-2017-291 M AP.jpg",
            "sunhl-1th-28-Feb-2017-291 N AP.jpg",
            "sunhl-1th-28-Feb-2017-292 A AP.jpg",
            "sunhl-1th-28-Feb-2017-292 B AP.jpg",
            "sunhl-1th-28-Feb-2017-294 A AP.jpg",
            "sunhl-1th-28-Feb-2017-295 L AP.jpg",
        }};
    }

    /// One ID per line; `#` starts a comment.
    static ExclusionList parse(std::string_view text)
    {
        ExclusionList out;
        std::istringstream in{std::string(text)};
        std::string line;
        while (std::getline(in, line)) {
            if (const auto hash = line.find('#'); hash != std::string::npos) {
                line.erase(hash);
            }
            std::string id = normalize_id(line);
            if (!id.empty()) {
                out.imageIds.insert(std::move(id));
            }
        }
        return out;
    }
};

struct ExclusionResult {
    std::vector<std::string> kept;
    std::size_t removed = 0;
};

inline ExclusionResult apply_exclusions(const std::vector<std::string>& ids, const ExclusionList& excl)
{
    ExclusionResult out;
    out.kept.reserve(ids.size());
    for (const auto& id : ids) {
        if (excl.contains(id)) {
            ++out.removed;
        } else {
            out.kept.push_back(id);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Splits

struct DatasetSplit {
    std::vector<std::string> train;
    std::vector<std::string> validation;
    std::vector<std::string> test;
    std::uint64_t seed = 0;
};

/// Shuffles with Rng(seed); train gets floor(0.70 N), validation floor(0.15 N),
/// test the remainder.
inline DatasetSplit split_dataset(std::vector<std::string> ids, std::uint64_t seed)
{
    if (ids.size() < 3) {
        throw InsufficientInputError("split_dataset: need at least 3 ids, got " + std::to_string(ids.size()));
    }
    Rng rng(seed);
    rng.shuffle(ids);
    const std::size_t n = ids.size();
    const std::size_t nTrain = n * 70 / 100;
    const std::size_t nVal = n * 15 / 100;
    DatasetSplit s;
    s.seed = seed;
    s.train.assign(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(nTrain));
    s.validation.assign(ids.begin() + static_cast<std::ptrdiff_t>(nTrain),
                        ids.begin() + static_cast<std::ptrdiff_t>(nTrain + nVal));
    s.test.assign(ids.begin() + static_cast<std::ptrdiff_t>(nTrain + nVal), ids.end());
    return s;
}

// ---------------------------------------------------------------------------
// Augmentation

enum class TransformKind { None, Rotate, HFlip, VFlip, HistEq };

struct Transform {
    TransformKind kind = TransformKind::None;
    double degrees = 0.0; // Rotate only; positive turns clockwise on screen (y down)

    static Transform rotate(double deg) { return {TransformKind::Rotate, deg}; }
    static Transform hflip() { return {TransformKind::HFlip, 0.0}; }
    static Transform vflip() { return {TransformKind::VFlip, 0.0}; }
    static Transform histeq() { return {TransformKind::HistEq, 0.0}; }
};

inline std::string to_string(TransformKind k)
{
    switch (k) {
    case TransformKind::None: return "none";
    case TransformKind::Rotate: return "rotate";
    case TransformKind::HFlip: return "hflip";
    case TransformKind::VFlip: return "vflip";
    case TransformKind::HistEq: return "histeq";
    }
    return "none";
}

inline constexpr double kMaxTiltDegrees = 5.0;

struct PlannedTransform {
    std::string imageId;
    Transform transform;
};

struct AugmentationPlan {
    std::vector<PlannedTransform> assignments; // input order
    std::uint64_t masterSeed = 0;
    std::vector<std::string> warnings;

    std::size_t count(TransformKind k) const
    {
        return static_cast<std::size_t>(std::count_if(assignments.begin(), assignments.end(),
                                                      [k](const PlannedTransform& p) { return p.transform.kind == k; }));
    }
};

/// Tilt for one image, uniform in [-5, 5] degrees, reproducible from the master seed and the id.
inline double planned_tilt(std::uint64_t masterSeed, std::string_view imageId)
{
    Rng rng(masterSeed ^ fnv1a64(imageId));
    return rng.uniform(-kMaxTiltDegrees, kMaxTiltDegrees);
}

/// Shuffles the images with Rng(masterSeed) and hands consecutive blocks of
/// floor(N / 10) to rotate, hflip, vflip and histeq; the rest stay untouched.
inline AugmentationPlan plan_augmentation(const std::vector<std::string>& ids, std::uint64_t masterSeed)
{
    AugmentationPlan plan;
    plan.masterSeed = masterSeed;
    plan.assignments.reserve(ids.size());
    for (const auto& id : ids) {
        plan.assignments.push_back({id, {}});
    }
    const std::size_t group = ids.size() / 10;
    if (group == 0 && !ids.empty()) {
        plan.warnings.push_back("fewer than 10 images: no augmentation assigned");
    }
    std::vector<std::size_t> order(ids.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }
    Rng rng(masterSeed);
    rng.shuffle(order);
    constexpr std::array kinds{TransformKind::Rotate, TransformKind::HFlip, TransformKind::VFlip,
                               TransformKind::HistEq};
    for (std::size_t g = 0; g < kinds.size(); ++g) {
        for (std::size_t k = 0; k < group; ++k) {
            PlannedTransform& p = plan.assignments[order[g * group + k]];
            p.transform.kind = kinds[g];
            if (kinds[g] == TransformKind::Rotate) {
                p.transform.degrees = planned_tilt(masterSeed, p.imageId);
            }
        }
    }
    return plan;
}

/// 8-bit cumulative-histogram equalization lookup table.
inline std::array<std::uint8_t, 256> equalization_lut(const GrayImage& image)
{
    std::array<std::size_t, 256> hist{};
    for (auto v : image.data()) {
        ++hist[v];
    }
    std::array<std::uint8_t, 256> lut{};
    std::size_t cdf = 0;
    std::size_t cdfMin = 0;
    for (std::size_t v = 0; v < 256; ++v) {
        if (hist[v] != 0) {
            cdfMin = hist[v];
            break;
        }
    }
    const std::size_t total = image.size();
    for (std::size_t v = 0; v < 256; ++v) {
        cdf += hist[v];
        if (total == cdfMin) {
            lut[v] = static_cast<std::uint8_t>(v);
        } else {
            const double scaled = static_cast<double>(cdf > cdfMin ? cdf - cdfMin : 0) * 255.0 /
                                  static_cast<double>(total - cdfMin);
            lut[v] = static_cast<std::uint8_t>(std::lround(scaled));
        }
    }
    return lut;
}

inline GrayImage equalize_histogram(const GrayImage& image)
{
    const auto lut = equalization_lut(image);
    GrayImage out = image;
    for (auto& v : out.data()) {
        v = lut[v];
    }
    return out;
}

/// Rotation about the image center with bilinear sampling; samples falling outside
/// the source frame are black.
inline GrayImage rotate_image(const GrayImage& image, double degrees)
{
    if (degrees == 0.0) {
        return image;
    }
    const int w = image.width();
    const int h = image.height();
    const Point2D center{w / 2.0, h / 2.0};
    const double rad = -degrees * std::numbers::pi / 180.0;
    GrayImage out(h, w, 0);
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            const Point2D src = rotate_about({c + 0.5, r + 0.5}, center, rad);
            if (src.x < 0.0 || src.y < 0.0 || src.x >= w || src.y >= h) {
                continue;
            }
            const double fx = src.x - 0.5;
            const double fy = src.y - 0.5;
            const int x0 = static_cast<int>(std::floor(fx));
            const int y0 = static_cast<int>(std::floor(fy));
            const double ax = fx - x0;
            const double ay = fy - y0;
            auto px = [&](int y, int x) {
                return static_cast<double>(image(std::clamp(y, 0, h - 1), std::clamp(x, 0, w - 1)));
            };
            const double v = (1 - ay) * ((1 - ax) * px(y0, x0) + ax * px(y0, x0 + 1)) +
                             ay * ((1 - ax) * px(y0 + 1, x0) + ax * px(y0 + 1, x0 + 1));
            out(r, c) = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
        }
    }
    return out;
}

/// Maps landmarks with the same geometry as the image transform.
inline SpineAnnotation transform_annotation(const SpineAnnotation& a, const Transform& t)
{
    SpineAnnotation out = a;
    const double w = a.width;
    const double h = a.height;
    switch (t.kind) {
    case TransformKind::None:
    case TransformKind::HistEq:
        break;
    case TransformKind::Rotate: {
        if (t.degrees == 0.0) {
            break;
        }
        const Point2D center{w / 2.0, h / 2.0};
        const double rad = t.degrees * std::numbers::pi / 180.0;
        for (auto& q : out.quads) {
            for (auto& p : q.corners) {
                p = rotate_about(p, center, rad);
            }
        }
        break;
    }
    case TransformKind::HFlip:
        for (auto& q : out.quads) {
            const auto old = q.corners;
            auto m = [w](Point2D p) { return Point2D{w - p.x, p.y}; };
            q.corners[TopLeft] = m(old[TopRight]);
            q.corners[TopRight] = m(old[TopLeft]);
            q.corners[BottomLeft] = m(old[BottomRight]);
            q.corners[BottomRight] = m(old[BottomLeft]);
        }
        break;
    case TransformKind::VFlip:
        for (auto& q : out.quads) {
            const auto old = q.corners;
            auto m = [h](Point2D p) { return Point2D{p.x, h - p.y}; };
            q.corners[TopLeft] = m(old[BottomLeft]);
            q.corners[TopRight] = m(old[BottomRight]);
            q.corners[BottomLeft] = m(old[TopLeft]);
            q.corners[BottomRight] = m(old[TopRight]);
        }
        std::reverse(out.quads.begin(), out.quads.end());
        for (std::size_t i = 0; i < out.quads.size(); ++i) {
            out.quads[i].index = static_cast<int>(i);
        }
        if (out.gtAngles) {
            std::swap(out.gtAngles->pt, out.gtAngles->tl);
        }
        break;
    }
    return out;
}

inline std::pair<GrayImage, SpineAnnotation> apply_transform(const GrayImage& image, const SpineAnnotation& a,
                                                             const Transform& t)
{
    if (image.width() != a.width || image.height() != a.height) {
        throw ShapeError("apply_transform: image is " + std::to_string(image.width()) + "x" +
                         std::to_string(image.height()) + " but annotation '" + a.imageId + "' declares " +
                         std::to_string(a.width) + "x" + std::to_string(a.height));
    }
    GrayImage out;
    switch (t.kind) {
    case TransformKind::Rotate:
        out = rotate_image(image, t.degrees);
        break;
    case TransformKind::HFlip:
        out = GrayImage(image.height(), image.width());
        for (int r = 0; r < image.height(); ++r) {
            for (int c = 0; c < image.width(); ++c) {
                out(r, c) = image(r, image.width() - 1 - c);
            }
        }
        break;
    case TransformKind::VFlip:
        out = GrayImage(image.height(), image.width());
        for (int r = 0; r < image.height(); ++r) {
            for (int c = 0; c < image.width(); ++c) {
                out(r, c) = image(image.height() - 1 - r, c);
            }
        }
        break;
    case TransformKind::HistEq:
        out = equalize_histogram(image);
        break;
    case TransformKind::None:
        throw ParameterError("apply_transform: no transform given");
    }
    return {std::move(out), transform_annotation(a, t)};
}

} // namespace cobb
