#include "test_support.hpp"

#include <gtest/gtest.h>

#include <numbers>

using namespace cobb;

namespace {

VertebraQuad quad(Point2D tl, Point2D tr, Point2D bl, Point2D br, int index = 0)
{
    VertebraQuad q;
    q.corners = {tl, tr, bl, br};
    q.index = index;
    return q;
}

SpineAnnotation straight_stack(int count)
{
    SpineAnnotation a;
    a.imageId = "straight";
    a.width = 200;
    a.height = 40 * count + 20;
    for (int i = 0; i < count; ++i) {
        const double y = 10.0 + 40.0 * i;
        a.quads.push_back(quad({50, y}, {150, y}, {50, y + 30}, {150, y + 30}, i));
    }
    return a;
}

std::vector<EndplateLine> lines_with_slopes(const std::vector<double>& slopes)
{
    std::vector<EndplateLine> lines;
    for (std::size_t i = 0; i < slopes.size(); ++i) {
        lines.push_back(oracle::line_with_slope(slopes[i], {0.0, 10.0 * static_cast<double>(i)}));
    }
    return lines;
}

} // namespace

TEST(EndplateLines, AxisAlignedSlopesZero)
{
    const auto [top, bottom] = endplate_lines(quad({0, 0}, {10, 0}, {0, 5}, {10, 5}));
    ASSERT_TRUE(top.slope && bottom.slope);
    EXPECT_EQ(*top.slope, 0.0);
    EXPECT_EQ(*bottom.slope, 0.0);
    EXPECT_EQ(top.plate, Plate::Top);
    EXPECT_EQ(bottom.plate, Plate::Bottom);
}

TEST(EndplateLines, SlopesFromCorners)
{
    const auto [top, bottom] = endplate_lines(quad({0, 0}, {10, 1}, {0, 5}, {10, 6}, 4));
    EXPECT_NEAR(*top.slope, 0.1, 1e-15);
    EXPECT_NEAR(*bottom.slope, 0.1, 1e-15);
    EXPECT_EQ(top.vertebraIndex, 4);
    EXPECT_NEAR(norm(top.direction), 1.0, 1e-12);
}

TEST(EndplateLines, MirrorNegatesSlopes)
{
    // x -> -x swaps left and right labels.
    const auto [top, bottom] = endplate_lines(quad({-10, 1}, {0, 0}, {-10, 6}, {0, 5}));
    EXPECT_NEAR(*top.slope, -0.1, 1e-15);
    EXPECT_NEAR(*bottom.slope, -0.1, 1e-15);
    EXPECT_LE(top.p1.x, top.p2.x);
}

TEST(EndplateLines, VerticalHasNoSlope)
{
    const EndplateLine l = make_endplate_line({3, 0}, {3, 5}, 1, Plate::Top);
    EXPECT_FALSE(l.slope.has_value());
}

TEST(EndplateLines, CoincidentCornersNameVertebra)
{
    try {
        endplate_lines(quad({1, 1}, {1, 1}, {0, 5}, {10, 5}, 9));
        FAIL();
    } catch (const DegenerateError& e) {
        EXPECT_NE(std::string(e.what()).find('9'), std::string::npos);
    }
}

TEST(AngleBetween, Basics)
{
    const auto flat = oracle::line_with_slope(0.0);
    EXPECT_EQ(angle_between(flat, flat), 0.0);
    EXPECT_NEAR(angle_between(oracle::line_with_slope(1.0), flat), 45.0, 1e-12);
    EXPECT_NEAR(angle_between(oracle::line_with_slope(0.1), oracle::line_with_slope(-0.1)), 11.421186274999285,
                1e-12);
}

TEST(AngleBetween, PerpendicularAndVertical)
{
    const auto vertical = make_endplate_line({0, 0}, {0, 1}, 0, Plate::Top);
    EXPECT_NEAR(angle_between(vertical, oracle::line_with_slope(0.0)), 90.0, 1e-12);
    EXPECT_NEAR(angle_between(oracle::line_with_slope(2.0), oracle::line_with_slope(-0.5)), 90.0, 1e-12);
}

TEST(AngleBetweenProperty, SymmetricAndMatchesSlopeFormula)
{
    Rng rng(101);
    for (int i = 0; i < 5000; ++i) {
        const double m1 = std::tan(rng.uniform(-1.5, 1.5));
        const double m2 = std::tan(rng.uniform(-1.5, 1.5));
        const auto l1 = oracle::line_with_slope(m1);
        const auto l2 = oracle::line_with_slope(m2, {3, 4});
        EXPECT_EQ(angle_between(l1, l2), angle_between(l2, l1));
        if (std::abs(1.0 + m1 * m2) > 1e-6) {
            EXPECT_NEAR(angle_between(l1, l2), oracle::slope_formula_angle(m1, m2), 1e-9);
        }
    }
}

TEST(SelectCobbAngles, StraightSpineIsZero)
{
    const CobbMeasurement m = measure_from_landmarks(straight_stack(17));
    EXPECT_EQ(m.pt, 0.0);
    EXPECT_EQ(m.mt, 0.0);
    EXPECT_EQ(m.tl, 0.0);
}

TEST(SelectCobbAngles, ThreeLineEnumeration)
{
    // Pairs: (0,1) = 45, (0,2) = 0, (1,2) = 45; first maximal pair is (0,1).
    const CobbMeasurement m = select_cobb_angles(lines_with_slopes({0.0, 1.0, 0.0}));
    EXPECT_NEAR(m.mt, 45.0, 1e-12);
    EXPECT_EQ(m.mtPair, (LinePair{0, 1}));
    EXPECT_EQ(m.pt, 0.0); // only line 0 is at or above the MT upper line
    EXPECT_EQ(m.ptPair, kNoPair);
    EXPECT_NEAR(m.tl, 45.0, 1e-12); // lines 1 and 2
    EXPECT_EQ(m.tlPair, (LinePair{1, 2}));
}

TEST(SelectCobbAngles, RegionsAroundMainCurve)
{
    // Tilts in degrees; MT spans lines 2..5, PT within 0..2, TL within 5..7.
    std::vector<double> tilts{0, 8, -6, 5, 20, 25, 10, 18};
    std::vector<double> slopes;
    for (double t : tilts) {
        slopes.push_back(std::tan(t * std::numbers::pi / 180.0));
    }
    const CobbMeasurement m = select_cobb_angles(lines_with_slopes(slopes));
    EXPECT_EQ(m.mtPair, (LinePair{2, 5}));
    EXPECT_NEAR(m.mt, 31.0, 1e-9);
    EXPECT_EQ(m.ptPair, (LinePair{1, 2}));
    EXPECT_NEAR(m.pt, 14.0, 1e-9);
    EXPECT_EQ(m.tlPair, (LinePair{5, 6}));
    EXPECT_NEAR(m.tl, 15.0, 1e-9);
}

TEST(SelectCobbAngles, NeedsTwoLines)
{
    EXPECT_THROW(select_cobb_angles(lines_with_slopes({0.3})), InsufficientInputError);
}

TEST(MeasureFromLandmarks, SingleQuadDependsOnLineMode)
{
    const SpineAnnotation a = straight_stack(1);
    const CobbMeasurement m = measure_from_landmarks(a, LineMode::Both);
    EXPECT_EQ(m.angles(), (AngleTriple{0, 0, 0}));
    EXPECT_THROW(measure_from_landmarks(a, LineMode::Lower), InsufficientInputError);
    SpineAnnotation empty;
    EXPECT_THROW(measure_from_landmarks(empty), InsufficientInputError);
}

TEST(MeasureFromLandmarks, LowerModeUsesBottomPlatesOnly)
{
    SpineAnnotation a = straight_stack(3);
    // Tilt only the top plate of the middle vertebra.
    a.quads[1].corners[TopRight].y -= 20.0;
    EXPECT_GT(measure_from_landmarks(a, LineMode::Both).mt, 5.0);
    EXPECT_EQ(measure_from_landmarks(a, LineMode::Lower).mt, 0.0);
}

TEST(MeasureFromMasks, EmptyListRejected)
{
    EXPECT_THROW(measure_from_masks({}), InsufficientInputError);
}

TEST(MeasureFromMasks, StraightSyntheticSpine)
{
    SpineParams p;
    p.imageWidth = 256;
    p.imageHeight = 1024;
    const SpineAnnotation a = generate_spine(p);
    const MaskMeasurement r = measure_from_masks(rasterize(a));
    EXPECT_LE(r.cobb.mt, 1.0);
    EXPECT_LE(r.cobb.pt, 1.0);
    EXPECT_LE(r.cobb.tl, 1.0);
    EXPECT_FALSE(r.shortfall);
    EXPECT_EQ(r.annotation.quads.size(), 17u);
}

TEST(MeasureFromMasks, SCurveWithinTwoDegrees)
{
    SpineParams p;
    p.imageWidth = 384;
    p.imageHeight = 1024;
    p.amplitude = 45.0;
    p.periods = 1.5;
    p.phase = 0.3;
    const SpineAnnotation a = generate_spine(p);
    const MaskMeasurement r = measure_from_masks(rasterize(a));
    EXPECT_LE(oracle::max_abs_diff(r.cobb.angles(), *a.gtAngles), 2.0);
}

TEST(MeasureFromMasks, ShortfallAndEmptyMasksReported)
{
    SpineParams p;
    p.vertebraCount = 5;
    p.imageHeight = 400;
    auto masks = rasterize(generate_spine(p));
    masks.push_back(InstanceMask(p.imageHeight, p.imageWidth));
    const MaskMeasurement r = measure_from_masks(masks);
    EXPECT_TRUE(r.shortfall);
    EXPECT_EQ(r.emptyMasks, 1u);
    EXPECT_EQ(r.annotation.quads.size(), 5u);
}

TEST(MeasureFromMasks, ShapeMismatchRejected)
{
    std::vector<InstanceMask> masks{InstanceMask(10, 10), InstanceMask(10, 12)};
    masks[0].pixels(2, 2) = 1;
    EXPECT_THROW(measure_from_masks(masks), ShapeError);
}

TEST(CobbInvariants, RotationFlipScale)
{
    Rng rng(555);
    for (int trial = 0; trial < 50; ++trial) {
        const SpineAnnotation a = generate_spine(random_spine_params(rng));
        const AngleTriple base = measure_from_landmarks(a).angles();

        const double theta = rng.uniform(-std::numbers::pi, std::numbers::pi);
        const Point2D center{rng.uniform(-500, 500), rng.uniform(-500, 500)};
        const auto rotated = oracle::map_landmarks(a, [&](Point2D p) { return rotate_about(p, center, theta); });
        EXPECT_LE(oracle::max_abs_diff(measure_from_landmarks(rotated).angles(), base), 1e-9);

        const double s = rng.uniform(0.1, 10.0);
        const auto scaled = oracle::map_landmarks(a, [&](Point2D p) { return s * p; });
        EXPECT_LE(oracle::max_abs_diff(measure_from_landmarks(scaled).angles(), base), 1e-9);

        const auto h = transform_annotation(a, Transform::hflip());
        EXPECT_LE(oracle::max_abs_diff(measure_from_landmarks(h).angles(), base), 1e-9);

        const auto v = transform_annotation(a, Transform::vflip());
        const AngleTriple vm = measure_from_landmarks(v).angles();
        EXPECT_NEAR(vm.mt, base.mt, 1e-9);
        EXPECT_NEAR(vm.pt, base.tl, 1e-9);
        EXPECT_NEAR(vm.tl, base.pt, 1e-9);

        EXPECT_LE(base.pt, base.mt + 1e-12);
        EXPECT_LE(base.tl, base.mt + 1e-12);
    }
}
