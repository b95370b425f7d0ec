// cobbctl: dataset preparation, mask assembly, Cobb measurement, evaluation and rendering.

#include "cobb/cobb.hpp"
#include "cobb/json_io.hpp"
#include "cobb/png_io.hpp"
#include "cobb/render.hpp"
#include "cobb/tensor_text.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

namespace fs = std::filesystem;
using cobb::json_io::json;

namespace {

/// Per-item failures of a batch run; the process exits nonzero iff any were recorded.
struct Failures {
    std::vector<std::string> items;

    void add(const std::string& what, const std::string& why) { items.push_back(what + ": " + why); }

    int report() const
    {
        for (const auto& f : items) {
            std::cerr << "error: " << f << '\n';
        }
        if (!items.empty()) {
            std::cerr << items.size() << " item(s) failed\n";
        }
        return items.empty() ? 0 : 1;
    }
};

void print_warnings(const std::string& id, const std::vector<std::string>& warnings)
{
    for (const auto& w : warnings) {
        std::cerr << "warning: " << id << ": " << w << '\n';
    }
}

/// Regular files of a path (itself, or the sorted entries of a directory).
std::vector<fs::path> expand_inputs(const std::vector<std::string>& inputs)
{
    std::vector<fs::path> out;
    for (const auto& in : inputs) {
        if (fs::is_directory(in)) {
            std::vector<fs::path> entries;
            for (const auto& e : fs::directory_iterator(in)) {
                if (e.is_regular_file()) {
                    entries.push_back(e.path());
                }
            }
            std::sort(entries.begin(), entries.end());
            out.insert(out.end(), entries.begin(), entries.end());
        } else {
            out.emplace_back(in);
        }
    }
    return out;
}

/// "sample.jpg.txt" -> "sample.jpg": the landmark file name minus its own extension.
std::string image_id_for(const fs::path& landmarkFile) { return landmarkFile.stem().string(); }

/// Looks for `<dir>/<id>`, then `<dir>/<id stem>.png`.
std::optional<fs::path> find_image(const std::string& dir, const std::string& imageId)
{
    if (dir.empty()) {
        return std::nullopt;
    }
    const fs::path direct = fs::path(dir) / imageId;
    if (fs::is_regular_file(direct) && direct.extension() == ".png") {
        return direct;
    }
    const fs::path png = fs::path(dir) / (fs::path(imageId).stem().string() + ".png");
    if (fs::is_regular_file(png)) {
        return png;
    }
    return std::nullopt;
}

cobb::ExclusionList load_exclusions(const std::string& path)
{
    if (path.empty()) {
        return cobb::ExclusionList::defaults();
    }
    return cobb::ExclusionList::parse(cobb::tensor_text::read_file(path));
}

/// Image ids from an annotation/measurement JSON or from a text file with one id per line.
std::vector<std::string> read_ids(const std::string& path)
{
    const std::string text = cobb::tensor_text::read_file(path);
    const auto first = text.find_first_not_of(" \t\r\n");
    std::vector<std::string> ids;
    if (first != std::string::npos && (text[first] == '[' || text[first] == '{')) {
        for (const json& r : cobb::json_io::records(json::parse(text))) {
            ids.push_back(r.at("imageId").get<std::string>());
        }
        return ids;
    }
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::string id = cobb::normalize_id(line.substr(0, line.find('#')));
        if (!id.empty()) {
            ids.push_back(std::move(id));
        }
    }
    return ids;
}

void ensure_dir(const std::string& dir)
{
    if (!dir.empty()) {
        fs::create_directories(dir);
    }
}

struct Common {
    std::uint64_t seed = 0;
    std::string lineMode = "both";
    double threshold = cobb::kDefaultThreshold;
    std::size_t targetCount = cobb::kDefaultTargetCount;
    std::string exclusions;
    bool applyExclusions = false;
    std::string layout;
    std::string format = "table";
};

// ---------------------------------------------------------------- convert

struct ConvertArgs {
    std::vector<std::string> inputs;
    std::string out = "annotations.json";
    std::string coco;
    std::string images;
    int width = 0;
    int height = 0;
};

int cmd_convert(const ConvertArgs& args, const Common& common)
{
    const cobb::LandmarkLayout layout = common.layout.empty() ? cobb::LandmarkLayout{} : cobb::parse_layout(common.layout);
    const cobb::ExclusionList excl = load_exclusions(common.exclusions);
    Failures failures;
    std::vector<cobb::SpineAnnotation> kept;
    std::vector<std::string> excluded;
    std::size_t parsed = 0;
    std::size_t warnings = 0;

    for (const fs::path& file : expand_inputs(args.inputs)) {
        const std::string id = image_id_for(file);
        try {
            int w = args.width;
            int h = args.height;
            if (const auto img = find_image(args.images, id)) {
                const cobb::GrayImage g = cobb::png::read_gray(img->string());
                w = g.width();
                h = g.height();
            }
            if (w <= 0 || h <= 0) {
                throw cobb::ParameterError("image size unknown; pass --size or --images");
            }
            cobb::SpineAnnotation a =
                cobb::parse_landmarks(cobb::tensor_text::read_file(file.string()), layout, id, w, h);
            ++parsed;
            warnings += a.warnings.size();
            print_warnings(id, a.warnings);
            if (common.applyExclusions && excl.contains(id)) {
                excluded.push_back(id);
                continue;
            }
            kept.push_back(std::move(a));
        } catch (const std::exception& e) {
            failures.add(file.string(), e.what());
        }
    }

    json out = json::array();
    for (const auto& a : kept) {
        out.push_back(cobb::json_io::to_json(a));
    }
    cobb::json_io::write_json_file(args.out, out);
    std::size_t cocoAnnotations = 0;
    if (!args.coco.empty()) {
        const cobb::CocoDocument doc = cobb::export_coco(kept);
        cocoAnnotations = doc.annotations.size();
        cobb::json_io::write_json_file(args.coco, cobb::to_json(doc));
    }
    std::cout << "converted " << parsed << " file(s), wrote " << kept.size() << " record(s)";
    if (!args.coco.empty()) {
        std::cout << ", " << cocoAnnotations << " COCO annotation(s)";
    }
    std::cout << ", " << warnings << " warning(s)\n";
    if (common.applyExclusions) {
        std::cout << "excluded " << excluded.size() << " record(s) listed in the exclusion file\n";
        for (const auto& id : excluded) {
            std::cout << "  " << id << '\n';
        }
    }
    return failures.report();
}

// ---------------------------------------------------------------- split

struct SplitArgs {
    std::string input;
    std::string out;
    bool excludeAll = false;
};

int cmd_split(const SplitArgs& args, const Common& common)
{
    std::vector<std::string> ids = read_ids(args.input);
    const cobb::ExclusionList excl = load_exclusions(common.exclusions);
    std::vector<std::string> removed;
    if (args.excludeAll) {
        const auto r = cobb::apply_exclusions(ids, excl);
        for (const auto& id : ids) {
            if (excl.contains(id)) {
                removed.push_back(id);
            }
        }
        ids = r.kept;
    }
    cobb::DatasetSplit s = cobb::split_dataset(ids, common.seed);
    if (common.applyExclusions && !args.excludeAll) {
        for (const auto& id : s.test) {
            if (excl.contains(id)) {
                removed.push_back(id);
            }
        }
        s.test = cobb::apply_exclusions(s.test, excl).kept;
    }
    const json j{{"seed", s.seed},      {"train", s.train},     {"validation", s.validation},
                 {"test", s.test},      {"excluded", removed}};
    if (args.out.empty()) {
        std::cout << j.dump(2) << '\n';
    } else {
        cobb::json_io::write_json_file(args.out, j);
    }
    std::cerr << "split " << ids.size() << " id(s): train " << s.train.size() << ", validation "
              << s.validation.size() << ", test " << s.test.size() << ", excluded " << removed.size() << '\n';
    return 0;
}

// ---------------------------------------------------------------- augment

struct AugmentArgs {
    std::string annotations;
    std::string images;
    std::string outDir;
    std::string plan;
};

int cmd_augment(const AugmentArgs& args, const Common& common)
{
    const std::vector<cobb::SpineAnnotation> anns = cobb::json_io::read_annotations(args.annotations);
    std::vector<std::string> ids;
    for (const auto& a : anns) {
        ids.push_back(a.imageId);
    }
    const cobb::AugmentationPlan plan = cobb::plan_augmentation(ids, common.seed);
    print_warnings("plan", plan.warnings);

    json planJson = json::array();
    for (const auto& p : plan.assignments) {
        json item{{"imageId", p.imageId}, {"transform", cobb::to_string(p.transform.kind)}};
        if (p.transform.kind == cobb::TransformKind::Rotate) {
            item["degrees"] = p.transform.degrees;
        }
        planJson.push_back(item);
    }
    const json planDoc{{"seed", common.seed}, {"assignments", planJson}};
    if (!args.plan.empty()) {
        cobb::json_io::write_json_file(args.plan, planDoc);
    }
    if (args.outDir.empty()) {
        if (args.plan.empty()) {
            std::cout << planDoc.dump(2) << '\n';
        }
        return 0;
    }

    ensure_dir(args.outDir);
    Failures failures;
    json outAnns = json::array();
    for (std::size_t i = 0; i < anns.size(); ++i) {
        const cobb::Transform& t = plan.assignments[i].transform;
        if (t.kind == cobb::TransformKind::None) {
            continue;
        }
        const cobb::SpineAnnotation& a = anns[i];
        try {
            const auto src = find_image(args.images, a.imageId);
            if (!src) {
                throw cobb::FormatError("no PNG found for this id under '" + args.images + "'");
            }
            auto [img, moved] = cobb::apply_transform(cobb::png::read_gray(src->string()), a, t);
            moved.imageId = fs::path(a.imageId).stem().string() + "_" + cobb::to_string(t.kind) + ".png";
            moved.flag_out_of_bounds();
            print_warnings(moved.imageId, moved.warnings);
            cobb::png::write_gray((fs::path(args.outDir) / moved.imageId).string(), img);
            outAnns.push_back(cobb::json_io::to_json(moved));
        } catch (const std::exception& e) {
            failures.add(a.imageId, e.what());
        }
    }
    cobb::json_io::write_json_file((fs::path(args.outDir) / "annotations.json").string(), outAnns);
    std::cout << "augmented " << outAnns.size() << " image(s)";
    for (auto k : {cobb::TransformKind::Rotate, cobb::TransformKind::HFlip, cobb::TransformKind::VFlip,
                   cobb::TransformKind::HistEq}) {
        std::cout << ", " << cobb::to_string(k) << ' ' << plan.count(k);
    }
    std::cout << '\n';
    return failures.report();
}

// ---------------------------------------------------------------- assemble

struct AssembleArgs {
    std::string prototypes;
    std::string coefficients;
    std::string outDir = "masks";
};

int cmd_assemble(const AssembleArgs& args, const Common& common)
{
    const cobb::PrototypeStack p = cobb::tensor_text::parse_prototypes(cobb::tensor_text::read_file(args.prototypes));
    const cobb::CoeffMatrix c = cobb::tensor_text::parse_coefficients(cobb::tensor_text::read_file(args.coefficients));
    const std::vector<cobb::SoftMask> soft = cobb::assemble_masks(p, c);
    ensure_dir(args.outDir);
    for (std::size_t i = 0; i < soft.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "mask_%03zu.png", i);
        cobb::png::write_mask((fs::path(args.outDir) / name).string(), cobb::binarize(soft[i], common.threshold));
    }
    std::cout << "wrote " << soft.size() << " mask(s) to " << args.outDir << '\n';
    return 0;
}

// ---------------------------------------------------------------- measure

struct MeasureArgs {
    std::string input;
    std::string out;
    std::string gt;
    std::string scores;
};

/// A mask PNG is foreground where intensity / 255 exceeds the threshold.
cobb::InstanceMask load_mask(const fs::path& path, double threshold, double score)
{
    const cobb::GrayImage g = cobb::png::read_gray(path.string());
    cobb::InstanceMask m(g.height(), g.width(), score);
    for (std::size_t i = 0; i < g.size(); ++i) {
        m.pixels.data()[i] = g.data()[i] / 255.0 > threshold ? 1 : 0;
    }
    return m;
}

std::vector<fs::path> png_files(const fs::path& dir)
{
    std::vector<fs::path> out;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (e.is_regular_file() && e.path().extension() == ".png") {
            out.push_back(e.path());
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

void print_measurements(const std::vector<cobb::json_io::MeasurementRecord>& recs)
{
    std::printf("%-40s %9s %9s %9s %s\n", "image", "PT", "MT", "TL", "gt (PT, MT, TL)");
    for (const auto& r : recs) {
        std::printf("%-40s %9.3f %9.3f %9.3f", r.annotation.imageId.c_str(), r.cobb.pt, r.cobb.mt, r.cobb.tl);
        if (r.annotation.gtAngles) {
            const auto& g = *r.annotation.gtAngles;
            std::printf(" (%.3f, %.3f, %.3f)", g.pt, g.mt, g.tl);
        }
        std::printf("%s\n", r.shortfall ? "  [shortfall]" : "");
    }
}

int cmd_measure(const MeasureArgs& args, const Common& common)
{
    const cobb::LineMode mode = cobb::json_io::line_mode_from_string(common.lineMode);
    Failures failures;
    std::vector<cobb::json_io::MeasurementRecord> recs;

    std::map<std::string, cobb::AngleTriple> gts;
    if (!args.gt.empty()) {
        for (const json& r : cobb::json_io::records(cobb::json_io::read_json_file(args.gt))) {
            if (const auto t = cobb::json_io::reference_angles(r)) {
                gts[r.at("imageId").get<std::string>()] = *t;
            }
        }
    }
    std::map<std::string, double> scores;
    if (!args.scores.empty()) {
        for (const auto& [k, v] : cobb::json_io::read_json_file(args.scores).items()) {
            scores[k] = v.get<double>();
        }
    }

    if (fs::is_directory(args.input)) {
        // Either one subdirectory of mask PNGs per image, or the PNGs of a single image.
        std::vector<std::pair<std::string, fs::path>> images;
        for (const auto& e : fs::directory_iterator(args.input)) {
            if (e.is_directory()) {
                images.emplace_back(e.path().filename().string(), e.path());
            }
        }
        std::sort(images.begin(), images.end());
        if (images.empty() && !png_files(args.input).empty()) {
            images.emplace_back(fs::path(args.input).lexically_normal().filename().string(), fs::path(args.input));
            if (images.back().first.empty()) {
                images.back().first = fs::path(args.input).lexically_normal().parent_path().filename().string();
            }
        }
        if (images.empty()) {
            failures.add(args.input, "no mask PNGs found");
        }
        for (const auto& [id, dir] : images) {
            try {
                std::vector<cobb::InstanceMask> masks;
                for (const fs::path& f : png_files(dir)) {
                    const std::string key = id + "/" + f.filename().string();
                    const auto it = scores.find(key);
                    masks.push_back(load_mask(f, common.threshold, it == scores.end() ? 1.0 : it->second));
                }
                if (masks.empty()) {
                    throw cobb::InsufficientInputError("directory holds no mask PNGs");
                }
                const cobb::MaskMeasurement mm =
                    cobb::measure_from_masks(masks, {common.targetCount, mode}, id);
                cobb::json_io::MeasurementRecord r;
                r.annotation = mm.annotation;
                r.cobb = mm.cobb;
                r.lineMode = mode;
                r.shortfall = mm.shortfall;
                r.warnings = mm.warnings;
                if (const auto g = gts.find(id); g != gts.end()) {
                    r.annotation.gtAngles = g->second;
                }
                print_warnings(id, r.warnings);
                recs.push_back(std::move(r));
            } catch (const std::exception& e) {
                failures.add(id, e.what());
            }
        }
    } else {
        std::vector<json> in;
        try {
            in = cobb::json_io::records(cobb::json_io::read_json_file(args.input));
        } catch (const std::exception& e) {
            failures.add(args.input, e.what());
        }
        for (std::size_t i = 0; i < in.size(); ++i) {
            std::string id = "record " + std::to_string(i);
            try {
                cobb::SpineAnnotation a = cobb::json_io::annotation_from_json(in[i]);
                id = a.imageId;
                cobb::json_io::MeasurementRecord r;
                r.cobb = cobb::measure_from_landmarks(a, mode);
                r.lineMode = mode;
                r.shortfall = a.quads.size() < common.targetCount;
                if (r.shortfall) {
                    r.warnings.push_back("only " + std::to_string(a.quads.size()) + " of " +
                                         std::to_string(common.targetCount) + " vertebrae present");
                }
                if (const auto g = gts.find(id); g != gts.end()) {
                    a.gtAngles = g->second;
                }
                r.annotation = std::move(a);
                print_warnings(id, r.warnings);
                recs.push_back(std::move(r));
            } catch (const std::exception& e) {
                failures.add(id, e.what());
            }
        }
    }

    json out = json::array();
    for (const auto& r : recs) {
        out.push_back(cobb::json_io::to_json(r));
    }
    if (!args.out.empty()) {
        cobb::json_io::write_json_file(args.out, out);
    }
    if (common.format == "json" && args.out.empty()) {
        std::cout << out.dump(2) << '\n';
    } else if (common.format == "table") {
        print_measurements(recs);
    }
    return failures.report();
}

// ---------------------------------------------------------------- evaluate

struct EvaluateArgs {
    std::string predictions;
    std::string groundTruth;
    std::string out;
    std::string name = "this run";
};

void print_report(const cobb::EvalReport& r)
{
    std::printf("images: %zu\nSMAPE: %.4f%%\n\n", r.n, r.smapePercent);
    std::printf("%-12s %8s %10s %12s\n", "abs diff", "count", "fraction", "reference");
    for (std::size_t b = 0; b < 4; ++b) {
        std::printf("%-12s %8zu %9.2f%%", cobb::BucketReport::kLabels[b], r.buckets.counts[b],
                    100.0 * r.buckets.fractions[b]);
        if (b < cobb::kReferenceBuckets.size()) {
            std::printf(" %11.2f%%", cobb::kReferenceBuckets[b]);
        }
        std::printf("\n");
    }
    std::printf("\n%-32s %8s\n", "method", "SMAPE");
    for (const auto& row : r.referenceScores) {
        std::printf("%-32s %7.2f%%%s\n", row.method.c_str(), row.smapePercent, row.caller ? "  <-" : "");
    }
}

int cmd_evaluate(const EvaluateArgs& args, const Common& common)
{
    std::map<std::string, cobb::AngleTriple> preds;
    std::vector<std::string> order;
    for (const json& r : cobb::json_io::records(cobb::json_io::read_json_file(args.predictions))) {
        const auto t = cobb::json_io::predicted_angles(r);
        if (!t) {
            throw cobb::FormatError("prediction " + r.value("imageId", std::string("?")) + " has no angles");
        }
        const std::string id = r.at("imageId").get<std::string>();
        if (preds.emplace(id, *t).second) {
            order.push_back(id);
        }
    }
    std::map<std::string, cobb::AngleTriple> gts;
    for (const json& r : cobb::json_io::records(cobb::json_io::read_json_file(args.groundTruth))) {
        const auto t = cobb::json_io::reference_angles(r);
        if (!t) {
            throw cobb::FormatError("ground truth " + r.value("imageId", std::string("?")) + " has no angles");
        }
        gts.emplace(r.at("imageId").get<std::string>(), *t);
    }

    std::vector<std::string> missing;
    for (const auto& id : order) {
        if (!gts.count(id)) {
            missing.push_back(id + " (no ground truth)");
        }
    }
    for (const auto& [id, t] : gts) {
        if (!preds.count(id)) {
            missing.push_back(id + " (no prediction)");
        }
    }
    if (!missing.empty()) {
        for (const auto& m : missing) {
            std::cerr << "error: unmatched id: " << m << '\n';
        }
        return 1;
    }

    std::vector<cobb::AngleTriple> p, g;
    for (const auto& id : order) {
        p.push_back(preds.at(id));
        g.push_back(gts.at(id));
    }
    cobb::EvalReport r = cobb::evaluate(order, p, g);
    r.referenceScores = cobb::comparison_table(r.smapePercent, args.name);

    json perImage = json::array();
    for (std::size_t j = 0; j < r.n; ++j) {
        perImage.push_back({{"imageId", r.imageIds[j]}, {"absDiff", r.perImageAbsDiff[j]}});
    }
    json buckets = json::array();
    for (std::size_t b = 0; b < 4; ++b) {
        buckets.push_back({{"label", cobb::BucketReport::kLabels[b]},
                           {"count", r.buckets.counts[b]},
                           {"fraction", r.buckets.fractions[b]}});
    }
    json table = json::array();
    for (const auto& row : r.referenceScores) {
        table.push_back({{"method", row.method}, {"smape", row.smapePercent}, {"thisRun", row.caller}});
    }
    const json report{{"n", r.n},
                      {"smape", r.smapePercent},
                      {"buckets", buckets},
                      {"referenceBuckets", cobb::kReferenceBuckets},
                      {"comparison", table},
                      {"perImage", perImage}};
    if (!args.out.empty()) {
        cobb::json_io::write_json_file(args.out, report);
    }
    if (common.format == "json") {
        std::cout << report.dump(2) << '\n';
    } else {
        print_report(r);
    }
    return 0;
}

// ---------------------------------------------------------------- render

struct RenderArgs {
    std::string image;
    std::string record;
    std::string imageId;
    std::string out = "overlay.png";
};

int cmd_render(const RenderArgs& args, const Common& common)
{
    const cobb::GrayImage img = cobb::png::read_gray(args.image);
    const std::vector<json> recs = cobb::json_io::records(cobb::json_io::read_json_file(args.record));
    const std::string want = args.imageId.empty() ? fs::path(args.image).filename().string() : args.imageId;
    const json* chosen = recs.size() == 1 ? &recs[0] : nullptr;
    for (const json& r : recs) {
        if (r.value("imageId", std::string()) == want) {
            chosen = &r;
        }
    }
    if (!chosen) {
        throw cobb::FormatError("no record for '" + want + "' in " + args.record);
    }

    cobb::SpineAnnotation a;
    std::optional<cobb::CobbMeasurement> m;
    cobb::LineMode mode = cobb::json_io::line_mode_from_string(common.lineMode);
    if (chosen->contains("pt") && chosen->contains("mt") && chosen->contains("tl")) {
        const auto rec = cobb::json_io::measurement_from_json(*chosen);
        a = rec.annotation;
        m = rec.cobb;
        mode = rec.lineMode;
    } else {
        a = cobb::json_io::annotation_from_json(*chosen);
    }
    if (a.width != img.width() || a.height != img.height()) {
        throw cobb::ShapeError("image is " + std::to_string(img.width()) + "x" + std::to_string(img.height()) +
                               " but the record declares " + std::to_string(a.width) + "x" +
                               std::to_string(a.height));
    }
    cobb::png::write_rgb(args.out, cobb::render::overlay(img, a, m, mode));
    std::cout << "wrote " << args.out;
    if (m) {
        std::cout << ' ' << cobb::render::caption(*m);
    }
    std::cout << '\n';
    return 0;
}

// ---------------------------------------------------------------- synth

struct SynthArgs {
    std::size_t count = 10;
    std::string outDir = "synthetic";
};

/// Writes a synthetic corpus: a gray image per spine, its mask PNGs and an annotation file.
int cmd_synth(const SynthArgs& args, const Common& common)
{
    cobb::Rng rng(common.seed);
    const fs::path root(args.outDir);
    fs::create_directories(root / "images");
    fs::create_directories(root / "masks");
    json anns = json::array();
    for (std::size_t i = 0; i < args.count; ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "spine_%04zu", i);
        const cobb::SpineAnnotation a = cobb::generate_spine(cobb::random_spine_params(rng), std::string(name) + ".png");
        const std::vector<cobb::InstanceMask> masks = cobb::rasterize(a);
        cobb::GrayImage img(a.height, a.width, 20);
        const fs::path maskDir = root / "masks" / a.imageId;
        fs::create_directories(maskDir);
        for (std::size_t k = 0; k < masks.size(); ++k) {
            char mname[32];
            std::snprintf(mname, sizeof mname, "%02zu.png", k);
            cobb::png::write_mask((maskDir / mname).string(), masks[k]);
            for (std::size_t p = 0; p < img.size(); ++p) {
                if (masks[k].pixels.data()[p]) {
                    img.data()[p] = 110;
                }
            }
        }
        cobb::png::write_gray((root / "images" / a.imageId).string(), img);
        anns.push_back(cobb::json_io::to_json(a));
    }
    cobb::json_io::write_json_file((root / "annotations.json").string(), anns);
    std::cout << "wrote " << args.count << " synthetic spine(s) to " << args.outDir << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Cobb angle toolkit: landmarks, masks, measurement and evaluation"};
    app.require_subcommand(1);
    Common common;
    auto add_common = [&common](CLI::App* sub) {
        sub->add_option("--seed", common.seed, "Random seed")->capture_default_str();
        sub->add_option("--format", common.format, "Console output format")
            ->check(CLI::IsMember({"json", "table"}))
            ->capture_default_str();
    };

    ConvertArgs convert;
    auto* c = app.add_subcommand("convert", "Landmark files to canonical annotation JSON and COCO");
    c->add_option("inputs", convert.inputs, "Landmark files or directories")->required()->check(CLI::ExistingPath);
    c->add_option("-o,--out", convert.out, "Canonical annotation JSON")->capture_default_str();
    c->add_option("--coco", convert.coco, "Also write a COCO JSON file");
    c->add_option("--images", convert.images, "Directory of PNG images used for the image size");
    c->add_option("--size", [&convert](const CLI::results_t& r) {
        std::istringstream in(r[0]);
        char x = 0;
        return static_cast<bool>(in >> convert.width >> x >> convert.height) && x == 'x';
    }, "Image size WIDTHxHEIGHT when no image is available")->type_name("WxH");
    c->add_option("--layout", common.layout, "Landmark layout, e.g. values=interleaved;coords=pixels;corners=TL,TR,BL,BR");
    c->add_option("--exclusions", common.exclusions, "Exclusion list file (default: built-in list)")->check(CLI::ExistingFile);
    c->add_flag("--apply-exclusions", common.applyExclusions, "Drop ids on the exclusion list");
    add_common(c);

    SplitArgs split;
    auto* s = app.add_subcommand("split", "Deterministic 70/15/15 train/validation/test split");
    s->add_option("input", split.input, "Annotation JSON or text file of ids")->required()->check(CLI::ExistingFile);
    s->add_option("-o,--out", split.out, "Split JSON (default: stdout)");
    s->add_option("--exclusions", common.exclusions, "Exclusion list file (default: built-in list)")->check(CLI::ExistingFile);
    s->add_flag("--apply-exclusions", common.applyExclusions, "Remove listed ids from the test split");
    s->add_flag("--exclude-all", split.excludeAll, "Remove listed ids before splitting");
    add_common(s);

    AugmentArgs augment;
    auto* a = app.add_subcommand("augment", "Disjoint 10% rotate/hflip/vflip/histeq augmentation");
    a->add_option("annotations", augment.annotations, "Canonical annotation JSON")->required()->check(CLI::ExistingFile);
    a->add_option("--images", augment.images, "Directory of source PNG images");
    a->add_option("-o,--out-dir", augment.outDir, "Write transformed images and annotations here");
    a->add_option("--plan", augment.plan, "Write the augmentation plan JSON");
    add_common(a);

    AssembleArgs assemble;
    auto* m = app.add_subcommand("assemble", "Prototype/coefficient tensors to binary mask PNGs");
    m->add_option("prototypes", assemble.prototypes, "Prototype tensor-text file (TT1 h w k)")->required()->check(CLI::ExistingFile);
    m->add_option("coefficients", assemble.coefficients, "Coefficient tensor-text file (TT1 n k)")->required()->check(CLI::ExistingFile);
    m->add_option("-o,--out-dir", assemble.outDir, "Output directory")->capture_default_str();
    m->add_option("--threshold", common.threshold, "Foreground iff probability > threshold")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    add_common(m);

    MeasureArgs measure;
    auto* me = app.add_subcommand("measure", "Cobb angles from mask directories or annotation JSON");
    me->add_option("input", measure.input, "Masks directory or annotation JSON")->required()->check(CLI::ExistingPath);
    me->add_option("-o,--out", measure.out, "Measurement JSON");
    me->add_option("--gt", measure.gt, "Attach ground-truth angles from this JSON")->check(CLI::ExistingFile);
    me->add_option("--scores", measure.scores, "JSON map \"<image>/<mask.png>\" -> confidence")->check(CLI::ExistingFile);
    me->add_option("--line-mode", common.lineMode, "Endplate candidates")
        ->check(CLI::IsMember({"both", "lower"}))
        ->capture_default_str();
    me->add_option("--threshold", common.threshold, "Mask PNG foreground iff value/255 > threshold")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    me->add_option("--target-count", common.targetCount, "Vertebrae kept after pruning")->capture_default_str();
    add_common(me);

    EvaluateArgs evaluate;
    auto* e = app.add_subcommand("evaluate", "SMAPE, error buckets and comparison table");
    e->add_option("predictions", evaluate.predictions, "Measurement JSON")->required()->check(CLI::ExistingFile);
    e->add_option("ground_truth", evaluate.groundTruth, "Annotation or measurement JSON")->required()->check(CLI::ExistingFile);
    e->add_option("-o,--out", evaluate.out, "Report JSON");
    e->add_option("--name", evaluate.name, "Row label in the comparison table")->capture_default_str();
    add_common(e);

    RenderArgs renderArgs;
    auto* r = app.add_subcommand("render", "Overlay quads, endplate lines and the three angle pairs");
    r->add_option("image", renderArgs.image, "Grayscale PNG")->required()->check(CLI::ExistingFile);
    r->add_option("record", renderArgs.record, "Annotation or measurement JSON")->required()->check(CLI::ExistingFile);
    r->add_option("--image-id", renderArgs.imageId, "Record to draw (default: the image file name)");
    r->add_option("-o,--out", renderArgs.out, "Output PNG")->capture_default_str();
    r->add_option("--line-mode", common.lineMode, "Endplate candidates for annotation-only records")
        ->check(CLI::IsMember({"both", "lower"}))
        ->capture_default_str();
    add_common(r);

    SynthArgs synth;
    auto* y = app.add_subcommand("synth", "Write a synthetic spine corpus with masks and ground truth");
    y->add_option("-n,--count", synth.count, "Number of spines")->capture_default_str();
    y->add_option("-o,--out-dir", synth.outDir, "Output directory")->capture_default_str();
    add_common(y);

    CLI11_PARSE(app, argc, argv);

    try {
        if (c->parsed()) return cmd_convert(convert, common);
        if (s->parsed()) return cmd_split(split, common);
        if (a->parsed()) return cmd_augment(augment, common);
        if (m->parsed()) return cmd_assemble(assemble, common);
        if (me->parsed()) return cmd_measure(measure, common);
        if (e->parsed()) return cmd_evaluate(evaluate, common);
        if (r->parsed()) return cmd_render(renderArgs, common);
        if (y->parsed()) return cmd_synth(synth, common);
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << '\n';
        return 1;
    }
    return 1;
}
