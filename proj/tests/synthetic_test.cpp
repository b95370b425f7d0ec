#include "test_support.hpp"

#include <gtest/gtest.h>

#include <numbers>

using namespace cobb;

namespace {

constexpr double kDeg = 180.0 / std::numbers::pi;

/// Naive search straight from the endplate corner pairs: every ordered pair of
/// plate lines, angle from atan2 of each direction, no modular reduction shared
/// with either implementation.
AngleTriple pairwise_search(const SpineAnnotation& a)
{
    std::vector<double> incl;
    for (const auto& q : a.quads) {
        for (auto [l, r] : {std::pair{TopLeft, TopRight}, std::pair{BottomLeft, BottomRight}}) {
            const Point2D d = q.corners[r] - q.corners[l];
            incl.push_back(std::atan2(d.y, d.x) * kDeg);
        }
    }
    auto diff = [&](std::size_t i, std::size_t j) {
        double d = std::abs(incl[i] - incl[j]);
        while (d > 180.0) {
            d -= 180.0;
        }
        return std::min(d, 180.0 - d);
    };
    const std::size_t n = incl.size();
    double mt = 0.0;
    std::size_t u = 0, v = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (diff(i, j) > mt + 1e-9) {
                mt = diff(i, j);
                u = i;
                v = j;
            }
        }
    }
    auto best = [&](std::size_t lo, std::size_t hi) {
        double b = 0.0;
        for (std::size_t i = lo; i <= hi; ++i) {
            for (std::size_t j = i + 1; j <= hi; ++j) {
                b = std::max(b, diff(i, j));
            }
        }
        return b;
    };
    return {best(0, u), mt, best(v, n - 1)};
}

SpineParams s_curve_512()
{
    // 17 vertebrae of the default 48 px cannot fit in 512 px, and at 24 px the
    // ~40 degree end tilt pushes the outer corners out of frame; 20 px fits.
    SpineParams p;
    p.imageWidth = 256;
    p.imageHeight = 512;
    p.amplitude = 40.0;
    p.periods = 1.5;
    p.vertebraHeight = 20.0;
    p.gap = 4.0;
    return p;
}

} // namespace

TEST(GenerateSpine, StraightIsAxisAligned)
{
    const SpineAnnotation a = generate_spine(SpineParams{});
    ASSERT_EQ(a.quads.size(), 17u);
    for (const auto& q : a.quads) {
        EXPECT_NEAR(q.corners[TopLeft].y, q.corners[TopRight].y, 1e-12);
        EXPECT_NEAR(q.corners[TopLeft].x, q.corners[BottomLeft].x, 1e-12);
        EXPECT_TRUE(q.well_ordered());
    }
    EXPECT_EQ(*a.gtAngles, (AngleTriple{0, 0, 0}));
}

TEST(GenerateSpine, Deterministic)
{
    SpineParams p = s_curve_512();
    p.tiltJitterDeg = 1.5;
    p.seed = 99;
    const SpineAnnotation a = generate_spine(p);
    const SpineAnnotation b = generate_spine(p);
    for (std::size_t i = 0; i < a.quads.size(); ++i) {
        EXPECT_EQ(a.quads[i].corners, b.quads[i].corners);
    }
    EXPECT_EQ(a.gtAngles, b.gtAngles);
}

TEST(GenerateSpine, SCurveMatchesPairwiseSearch)
{
    const SpineAnnotation a = generate_spine(s_curve_512());
    const AngleTriple want = pairwise_search(a);
    EXPECT_GT(a.gtAngles->mt, 10.0);
    EXPECT_LE(oracle::max_abs_diff(*a.gtAngles, want), 1e-9);
}

TEST(GenerateSpine, Overflow)
{
    SpineParams tall;
    tall.imageHeight = 512;
    EXPECT_THROW(generate_spine(tall), ParameterError);
    SpineParams wide;
    wide.amplitude = 200.0;
    EXPECT_THROW(generate_spine(wide), ParameterError);
}

TEST(AnalyticCobb, SineTangentCalculus)
{
    SpineParams p;
    p.amplitude = 15.0;
    p.periods = 1.0;
    p.phase = 0.3;
    const SpineAnnotation a = generate_spine(p);

    // Inclination of the centerline from a central difference of x(t), y(t).
    const double span = (p.vertebraCount - 1) * (p.vertebraHeight + p.gap);
    auto x = [&](double t) { return p.amplitude * std::sin(2.0 * std::numbers::pi * p.periods * t + p.phase); };
    double lo = INFINITY, hi = -INFINITY;
    for (int k = 0; k < p.vertebraCount; ++k) {
        const double t = static_cast<double>(k) / (p.vertebraCount - 1);
        const double h = 1e-5;
        const double slope = (x(t + h) - x(t - h)) / (2.0 * h) / span;
        const double deg = std::atan(slope) * kDeg;
        lo = std::min(lo, deg);
        hi = std::max(hi, deg);
    }
    EXPECT_NEAR(analytic_cobb(a).mt, hi - lo, 1e-6);
}

TEST(AnalyticCobb, StraightIsZero)
{
    const CobbMeasurement m = analytic_cobb(generate_spine(SpineParams{}));
    EXPECT_EQ(m.angles(), (AngleTriple{0, 0, 0}));
}

TEST(AnalyticCobbProperty, AgreesWithEngine)
{
    Rng rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        const SpineAnnotation a = generate_spine(random_spine_params(rng));
        for (LineMode mode : {LineMode::Both, LineMode::Lower}) {
            const CobbMeasurement want = analytic_cobb(a, mode);
            const CobbMeasurement got = measure_from_landmarks(a, mode);
            ASSERT_LE(oracle::max_abs_diff(got.angles(), want.angles()), 1e-9) << "trial " << trial;
            EXPECT_EQ(got.mtPair, want.mtPair);
        }
    }
}

TEST(AnalyticCobbProperty, AmplitudeMonotone)
{
    SpineParams p;
    p.periods = 1.0;
    p.phase = 0.7;
    double previous = -1.0;
    for (double amp = 0.0; amp <= 60.0; amp += 5.0) {
        p.amplitude = amp;
        const double mt = generate_spine(p).gtAngles->mt;
        EXPECT_GE(mt, previous) << "amplitude " << amp;
        previous = mt;
    }
}

TEST(Rasterize, TwoByOneQuad)
{
    SpineAnnotation a;
    a.width = 5;
    a.height = 5;
    VertebraQuad q;
    q.corners = {Point2D{0, 0}, Point2D{2, 0}, Point2D{0, 1}, Point2D{2, 1}};
    a.quads.push_back(q);
    const auto masks = rasterize(a);
    ASSERT_EQ(masks.size(), 1u);
    EXPECT_EQ(masks[0].foreground_count(), 2u);
    EXPECT_EQ(masks[0].score, 1.0);
}

TEST(Rasterize, RotatedQuadArea)
{
    SpineAnnotation a;
    a.width = 128;
    a.height = 128;
    VertebraQuad q;
    const Point2D c{64, 64};
    const double th = 0.4;
    q.corners = {rotate_about({44, 48}, c, th), rotate_about({84, 48}, c, th), rotate_about({44, 80}, c, th),
                 rotate_about({84, 80}, c, th)};
    a.quads.push_back(q);
    const double area = polygon_area(q.ring());
    EXPECT_NEAR(static_cast<double>(rasterize(a)[0].foreground_count()), area, 0.05 * area);
}

TEST(Rasterize, DisjointQuadsDoNotOverlap)
{
    Rng rng(5);
    const SpineAnnotation a = generate_spine(random_spine_params(rng));
    const auto masks = rasterize(a);
    ASSERT_EQ(masks.size(), 17u);
    Raster<int> seen(a.height, a.width, 0);
    for (const auto& m : masks) {
        EXPECT_GT(m.foreground_count(), 0u);
        for (std::size_t i = 0; i < m.pixels.size(); ++i) {
            seen.data()[i] += m.pixels.data()[i];
        }
    }
    for (int v : seen.data()) {
        ASSERT_LE(v, 1);
    }
}

TEST(EndToEnd, SCurve512WithinTwoDegrees)
{
    const SpineAnnotation a = generate_spine(s_curve_512());
    const MaskMeasurement m = measure_from_masks(rasterize(a), {}, a.imageId);
    EXPECT_LE(oracle::max_abs_diff(m.cobb.angles(), *a.gtAngles), 2.0);
}

TEST(EndToEnd, StraightWithinOneDegree)
{
    const SpineAnnotation a = generate_spine(SpineParams{});
    const MaskMeasurement m = measure_from_masks(rasterize(a), {}, a.imageId);
    EXPECT_LE(oracle::max_abs_diff(m.cobb.angles(), {0, 0, 0}), 1.0);
}
