#pragma once

// Canonical annotation JSON and measurement records.
//
// Annotation: {imageId, width, height, vertebrae: [{index, corners: [[x,y] x4]}], angles?: {pt, mt, tl}}
// with corners in TL, TR, BL, BR order.

#include "cobb/annotation.hpp"
#include "cobb/cobb_engine.hpp"
#include "cobb/error.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace cobb::json_io {

using nlohmann::json;

inline double round3(double v) { return std::round(v * 1000.0) / 1000.0; }

inline json angles_json(const AngleTriple& t, bool rounded = false)
{
    if (rounded) {
        return {{"pt", round3(t.pt)}, {"mt", round3(t.mt)}, {"tl", round3(t.tl)}};
    }
    return {{"pt", t.pt}, {"mt", t.mt}, {"tl", t.tl}};
}

inline AngleTriple angles_from_json(const json& j)
{
    return {j.at("pt").get<double>(), j.at("mt").get<double>(), j.at("tl").get<double>()};
}

inline json vertebrae_json(const std::vector<VertebraQuad>& quads)
{
    json out = json::array();
    for (std::size_t i = 0; i < quads.size(); ++i) {
        const VertebraQuad& q = quads[i];
        json corners = json::array();
        for (const Point2D& p : q.corners) {
            corners.push_back({p.x, p.y});
        }
        json v{{"index", q.index >= 0 ? q.index : static_cast<int>(i)}, {"corners", corners}};
        if (q.score != 1.0) {
            v["score"] = q.score;
        }
        out.push_back(v);
    }
    return out;
}

inline json to_json(const SpineAnnotation& a)
{
    json j{{"imageId", a.imageId}, {"width", a.width}, {"height", a.height}, {"vertebrae", vertebrae_json(a.quads)}};
    if (a.gtAngles) {
        j["angles"] = angles_json(*a.gtAngles);
    }
    return j;
}

inline std::vector<VertebraQuad> vertebrae_from_json(const json& arr)
{
    std::vector<VertebraQuad> quads;
    for (const json& v : arr) {
        const json& corners = v.at("corners");
        if (!corners.is_array() || corners.size() != 4) {
            throw FormatError("annotation: every vertebra needs exactly 4 corners");
        }
        VertebraQuad q;
        for (std::size_t k = 0; k < 4; ++k) {
            if (!corners[k].is_array() || corners[k].size() != 2) {
                throw FormatError("annotation: corner must be [x, y]");
            }
            q.corners[k] = {corners[k][0].get<double>(), corners[k][1].get<double>()};
        }
        q.index = v.value("index", static_cast<int>(quads.size()));
        q.score = v.value("score", 1.0);
        quads.push_back(q);
    }
    return quads;
}

inline SpineAnnotation annotation_from_json(const json& j)
{
    try {
        SpineAnnotation a;
        a.imageId = j.at("imageId").get<std::string>();
        a.width = j.at("width").get<int>();
        a.height = j.at("height").get<int>();
        a.quads = vertebrae_from_json(j.at("vertebrae"));
        if (j.contains("angles") && !j.at("angles").is_null()) {
            a.gtAngles = angles_from_json(j.at("angles"));
        }
        return a;
    } catch (const json::exception& e) {
        throw FormatError(std::string("annotation: ") + e.what());
    }
}

inline json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw FormatError("cannot open " + path);
    }
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw FormatError(path + ": " + e.what());
    }
}

inline void write_json_file(const std::string& path, const json& j)
{
    std::ofstream out(path);
    if (!out) {
        throw FormatError("cannot write " + path);
    }
    out << j.dump(2) << '\n';
}

/// A file holds either one record object or an array of them.
inline std::vector<json> records(const json& j)
{
    if (j.is_array()) {
        return {j.begin(), j.end()};
    }
    return {j};
}

inline std::vector<SpineAnnotation> read_annotations(const std::string& path)
{
    std::vector<SpineAnnotation> out;
    for (const json& r : records(read_json_file(path))) {
        out.push_back(annotation_from_json(r));
    }
    return out;
}

inline json pair_json(const LinePair& p)
{
    if (p == kNoPair) {
        return nullptr;
    }
    return {p[0], p[1]};
}

inline LinePair pair_from_json(const json& j)
{
    if (j.is_null()) {
        return kNoPair;
    }
    return {j.at(0).get<int>(), j.at(1).get<int>()};
}

inline std::string to_string(LineMode m) { return m == LineMode::Both ? "both" : "lower"; }

inline LineMode line_mode_from_string(const std::string& s)
{
    if (s == "both") return LineMode::Both;
    if (s == "lower") return LineMode::Lower;
    throw ParameterError("line mode must be 'both' or 'lower', got '" + s + "'");
}

struct MeasurementRecord {
    SpineAnnotation annotation; // quads the angles were measured on
    CobbMeasurement cobb;
    LineMode lineMode = LineMode::Both;
    bool shortfall = false;
    std::vector<std::string> warnings;
};

/// {imageId, pt, mt, tl, ptPair, mtPair, tlPair, lineMode, shortfall, width, height,
///  vertebrae, gt?, warnings}; angles rounded to 3 decimals.
inline json to_json(const MeasurementRecord& r)
{
    json j{{"imageId", r.annotation.imageId},
           {"pt", round3(r.cobb.pt)},
           {"mt", round3(r.cobb.mt)},
           {"tl", round3(r.cobb.tl)},
           {"ptPair", pair_json(r.cobb.ptPair)},
           {"mtPair", pair_json(r.cobb.mtPair)},
           {"tlPair", pair_json(r.cobb.tlPair)},
           {"lineMode", to_string(r.lineMode)},
           {"shortfall", r.shortfall},
           {"width", r.annotation.width},
           {"height", r.annotation.height},
           {"vertebrae", vertebrae_json(r.annotation.quads)}};
    if (r.annotation.gtAngles) {
        j["gt"] = angles_json(*r.annotation.gtAngles, true);
    }
    j["warnings"] = r.warnings;
    return j;
}

inline MeasurementRecord measurement_from_json(const json& j)
{
    try {
        MeasurementRecord r;
        r.annotation.imageId = j.at("imageId").get<std::string>();
        r.annotation.width = j.value("width", 0);
        r.annotation.height = j.value("height", 0);
        if (j.contains("vertebrae")) {
            r.annotation.quads = vertebrae_from_json(j.at("vertebrae"));
        }
        r.cobb.pt = j.at("pt").get<double>();
        r.cobb.mt = j.at("mt").get<double>();
        r.cobb.tl = j.at("tl").get<double>();
        r.cobb.ptPair = pair_from_json(j.value("ptPair", json(nullptr)));
        r.cobb.mtPair = pair_from_json(j.value("mtPair", json(nullptr)));
        r.cobb.tlPair = pair_from_json(j.value("tlPair", json(nullptr)));
        r.lineMode = line_mode_from_string(j.value("lineMode", std::string("both")));
        r.shortfall = j.value("shortfall", false);
        if (j.contains("gt") && !j.at("gt").is_null()) {
            r.annotation.gtAngles = angles_from_json(j.at("gt"));
        }
        return r;
    } catch (const json::exception& e) {
        throw FormatError(std::string("measurement: ") + e.what());
    }
}

/// Angle triple of a prediction record: measured `pt/mt/tl` first, then `angles`.
inline std::optional<AngleTriple> predicted_angles(const json& j)
{
    if (j.contains("pt") && j.contains("mt") && j.contains("tl")) {
        return angles_from_json(j);
    }
    if (j.contains("angles") && j.at("angles").is_object()) {
        return angles_from_json(j.at("angles"));
    }
    return std::nullopt;
}

/// Angle triple of a ground-truth record: `angles`, then `gt`, then top-level `pt/mt/tl`.
inline std::optional<AngleTriple> reference_angles(const json& j)
{
    for (const char* key : {"angles", "gt"}) {
        if (j.contains(key) && j.at(key).is_object()) {
            return angles_from_json(j.at(key));
        }
    }
    if (j.contains("pt") && j.contains("mt") && j.contains("tl")) {
        return angles_from_json(j);
    }
    return std::nullopt;
}

} // namespace cobb::json_io
