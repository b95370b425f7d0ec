#pragma once

// COCO instance-segmentation documents with one polygon per vertebra.

#include "cobb/annotation.hpp"
#include "cobb/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <map>
#include <string>
#include <vector>

namespace cobb {

struct CocoImage {
    int id = 0;
    std::string fileName;
    int width = 0;
    int height = 0;
};

struct CocoAnnotation {
    int id = 0;
    int imageId = 0;
    int categoryId = 1;
    std::array<double, 8> segmentation{}; // TL, TR, BR, BL ring as x0 y0 ... x3 y3
    std::array<double, 4> bbox{};         // x, y, w, h
    double area = 0.0;
    int iscrowd = 0;
};

struct CocoDocument {
    std::vector<CocoImage> images;
    std::vector<CocoAnnotation> annotations;
};

inline constexpr int kVertebraCategory = 1;

/// Image ids follow input order from 1; annotation ids run from 1 in image order,
/// then vertebra order.
inline CocoDocument export_coco(const std::vector<SpineAnnotation>& annotations)
{
    CocoDocument doc;
    int annId = 1;
    for (std::size_t i = 0; i < annotations.size(); ++i) {
        const SpineAnnotation& a = annotations[i];
        const int imageId = static_cast<int>(i) + 1;
        doc.images.push_back({imageId, a.imageId, a.width, a.height});
        for (const VertebraQuad& q : a.quads) {
            CocoAnnotation c;
            c.id = annId++;
            c.imageId = imageId;
            c.categoryId = kVertebraCategory;
            const auto ring = q.ring();
            double minX = ring[0].x, maxX = ring[0].x, minY = ring[0].y, maxY = ring[0].y;
            for (std::size_t k = 0; k < 4; ++k) {
                c.segmentation[2 * k] = ring[k].x;
                c.segmentation[2 * k + 1] = ring[k].y;
                minX = std::min(minX, ring[k].x);
                maxX = std::max(maxX, ring[k].x);
                minY = std::min(minY, ring[k].y);
                maxY = std::max(maxY, ring[k].y);
            }
            c.bbox = {minX, minY, maxX - minX, maxY - minY};
            c.area = polygon_area(ring);
            doc.annotations.push_back(c);
        }
    }
    return doc;
}

inline nlohmann::json to_json(const CocoDocument& doc)
{
    nlohmann::json j;
    j["images"] = nlohmann::json::array();
    for (const auto& im : doc.images) {
        j["images"].push_back({{"id", im.id}, {"file_name", im.fileName}, {"width", im.width}, {"height", im.height}});
    }
    j["annotations"] = nlohmann::json::array();
    for (const auto& a : doc.annotations) {
        j["annotations"].push_back({{"id", a.id},
                                    {"image_id", a.imageId},
                                    {"category_id", a.categoryId},
                                    {"segmentation", nlohmann::json::array({a.segmentation})},
                                    {"bbox", a.bbox},
                                    {"area", a.area},
                                    {"iscrowd", a.iscrowd}});
    }
    j["categories"] = nlohmann::json::array({{{"id", kVertebraCategory}, {"name", "vertebra"}}});
    return j;
}

inline CocoDocument coco_from_json(const nlohmann::json& j)
{
    CocoDocument doc;
    try {
        for (const auto& im : j.at("images")) {
            doc.images.push_back({im.at("id").get<int>(), im.at("file_name").get<std::string>(),
                                  im.at("width").get<int>(), im.at("height").get<int>()});
        }
        for (const auto& a : j.at("annotations")) {
            CocoAnnotation c;
            c.id = a.at("id").get<int>();
            c.imageId = a.at("image_id").get<int>();
            c.categoryId = a.at("category_id").get<int>();
            const auto& seg = a.at("segmentation");
            const auto& poly = seg.is_array() && !seg.empty() && seg[0].is_array() ? seg[0] : seg;
            if (poly.size() != 8) {
                throw FormatError("coco: annotation " + std::to_string(c.id) + " polygon has " +
                                  std::to_string(poly.size()) + " values, expected 8");
            }
            for (std::size_t k = 0; k < 8; ++k) {
                c.segmentation[k] = poly[k].get<double>();
            }
            if (a.contains("bbox")) {
                for (std::size_t k = 0; k < 4; ++k) {
                    c.bbox[k] = a.at("bbox")[k].get<double>();
                }
            }
            c.area = a.value("area", 0.0);
            c.iscrowd = a.value("iscrowd", 0);
            doc.annotations.push_back(c);
        }
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("coco: ") + e.what());
    }
    return doc;
}

/// Rebuilds annotations from a COCO document; quads keep annotation-id order per image.
inline std::vector<SpineAnnotation> import_coco(const CocoDocument& doc)
{
    std::vector<SpineAnnotation> out;
    std::map<int, std::size_t> byId;
    for (const auto& im : doc.images) {
        byId[im.id] = out.size();
        SpineAnnotation a;
        a.imageId = im.fileName;
        a.width = im.width;
        a.height = im.height;
        out.push_back(std::move(a));
    }
    std::vector<const CocoAnnotation*> anns;
    for (const auto& a : doc.annotations) {
        anns.push_back(&a);
    }
    std::stable_sort(anns.begin(), anns.end(), [](auto* a, auto* b) { return a->id < b->id; });
    for (const CocoAnnotation* c : anns) {
        const auto it = byId.find(c->imageId);
        if (it == byId.end()) {
            throw FormatError("coco: annotation " + std::to_string(c->id) + " references missing image " +
                              std::to_string(c->imageId));
        }
        SpineAnnotation& a = out[it->second];
        VertebraQuad q;
        const auto& s = c->segmentation;
        q.corners[TopLeft] = {s[0], s[1]};
        q.corners[TopRight] = {s[2], s[3]};
        q.corners[BottomRight] = {s[4], s[5]};
        q.corners[BottomLeft] = {s[6], s[7]};
        q.index = static_cast<int>(a.quads.size());
        a.quads.push_back(q);
    }
    return out;
}

} // namespace cobb
