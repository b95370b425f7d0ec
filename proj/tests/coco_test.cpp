#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace cobb;

namespace {

SpineAnnotation single(std::array<Point2D, 4> corners)
{
    SpineAnnotation a;
    a.imageId = "one.jpg";
    a.width = 10;
    a.height = 10;
    VertebraQuad q;
    q.corners = corners;
    q.index = 0;
    a.quads.push_back(q);
    return a;
}

} // namespace

TEST(ExportCoco, RectangleRingBoxArea)
{
    const CocoDocument doc = export_coco({single({Point2D{0, 0}, Point2D{2, 0}, Point2D{0, 1}, Point2D{2, 1}})});
    ASSERT_EQ(doc.annotations.size(), 1u);
    const auto& c = doc.annotations[0];
    EXPECT_EQ(c.segmentation, (std::array<double, 8>{0, 0, 2, 0, 2, 1, 0, 1}));
    EXPECT_EQ(c.bbox, (std::array<double, 4>{0, 0, 2, 1}));
    EXPECT_EQ(c.area, 2.0);
    EXPECT_EQ(c.iscrowd, 0);
    EXPECT_EQ(c.categoryId, 1);
}

TEST(ExportCoco, ParallelogramShoelace)
{
    const CocoDocument doc = export_coco({single({Point2D{0, 0}, Point2D{2, 0}, Point2D{1, 2}, Point2D{3, 2}})});
    EXPECT_EQ(doc.annotations[0].area, 4.0);
    EXPECT_EQ(doc.annotations[0].bbox, (std::array<double, 4>{0, 0, 3, 2}));
}

TEST(ExportCoco, SeventeenRecordsOneImage)
{
    SpineParams p;
    const CocoDocument doc = export_coco({generate_spine(p, "syn.png")});
    ASSERT_EQ(doc.images.size(), 1u);
    ASSERT_EQ(doc.annotations.size(), 17u);
    for (std::size_t i = 0; i < 17; ++i) {
        EXPECT_EQ(doc.annotations[i].imageId, doc.images[0].id);
        EXPECT_EQ(doc.annotations[i].id, static_cast<int>(i) + 1);
    }
}

TEST(ExportCoco, JsonShape)
{
    const nlohmann::json j = to_json(export_coco({single({Point2D{0, 0}, Point2D{2, 0}, Point2D{0, 1}, Point2D{2, 1}})}));
    EXPECT_EQ(j["categories"][0]["name"], "vertebra");
    EXPECT_EQ(j["images"][0]["file_name"], "one.jpg");
    EXPECT_EQ(j["annotations"][0]["segmentation"][0].size(), 8u);
    EXPECT_EQ(j["annotations"][0]["bbox"].size(), 4u);
}

TEST(CocoRoundTrip, PreservesQuads)
{
    Rng rng(21);
    std::vector<SpineAnnotation> in;
    for (int i = 0; i < 5; ++i) {
        in.push_back(generate_spine(random_spine_params(rng), "img" + std::to_string(i)));
    }
    const auto doc = coco_from_json(nlohmann::json::parse(to_json(export_coco(in)).dump()));
    const auto out = import_coco(doc);
    ASSERT_EQ(out.size(), in.size());
    for (std::size_t i = 0; i < in.size(); ++i) {
        EXPECT_EQ(out[i].imageId, in[i].imageId);
        ASSERT_EQ(out[i].quads.size(), in[i].quads.size());
        for (std::size_t q = 0; q < in[i].quads.size(); ++q) {
            for (std::size_t k = 0; k < 4; ++k) {
                EXPECT_NEAR(out[i].quads[q].corners[k].x, in[i].quads[q].corners[k].x, 1e-9);
                EXPECT_NEAR(out[i].quads[q].corners[k].y, in[i].quads[q].corners[k].y, 1e-9);
            }
        }
    }
}

TEST(CocoImport, DanglingImageReference)
{
    CocoDocument doc;
    doc.annotations.push_back({});
    doc.annotations.back().imageId = 5;
    EXPECT_THROW(import_coco(doc), FormatError);
}
