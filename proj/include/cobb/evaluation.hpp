#pragma once

// SMAPE over Cobb triples, absolute differences, error buckets and the published
// comparison scores.

#include "cobb/annotation.hpp"
#include "cobb/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace cobb {

/// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double v) noexcept
    {
        const double t = sum_ + v;
        comp_ += std::abs(sum_) >= std::abs(v) ? (sum_ - t) + v : (v - t) + sum_;
        sum_ = t;
    }
    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline std::array<double, 3> as_array(const AngleTriple& t) noexcept { return {t.pt, t.mt, t.tl}; }

/// Per-image SMAPE term as a fraction in [0, 1].
inline double smape_term(const AngleTriple& a, const AngleTriple& b)
{
    const auto x = as_array(a);
    const auto y = as_array(b);
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
        num += std::abs(x[i] - y[i]);
        den += std::abs(x[i] + y[i]);
    }
    if (den == 0.0) {
        if (num == 0.0) {
            return 0.0;
        }
        throw ParameterError("smape: zero denominator with nonzero numerator");
    }
    return num / den;
}

/// Mean over images of sum|a - b| / sum|a + b|, in percent.
inline double smape(const std::vector<AngleTriple>& preds, const std::vector<AngleTriple>& gts)
{
    if (preds.size() != gts.size()) {
        throw ShapeError("smape: " + std::to_string(preds.size()) + " predictions vs " + std::to_string(gts.size()) +
                         " ground truths");
    }
    if (preds.empty()) {
        throw InsufficientInputError("smape: no images");
    }
    CompensatedSum total;
    for (std::size_t j = 0; j < preds.size(); ++j) {
        total.add(smape_term(preds[j], gts[j]));
    }
    return 100.0 * total.value() / static_cast<double>(preds.size());
}

inline std::array<double, 3> abs_diff(const AngleTriple& pred, const AngleTriple& gt) noexcept
{
    return {std::abs(gt.pt - pred.pt), std::abs(gt.mt - pred.mt), std::abs(gt.tl - pred.tl)};
}

/// Fractions of differences in [0,5), [5,10), [10,20) and [20,inf) degrees.
struct BucketReport {
    std::array<double, 4> fractions{};
    std::array<std::size_t, 4> counts{};
    std::size_t total = 0;

    static constexpr std::array<const char*, 4> kLabels{"< 5 deg", "5-10 deg", "10-20 deg", ">= 20 deg"};
};

inline BucketReport bucket_report(const std::vector<double>& diffs)
{
    if (diffs.empty()) {
        throw InsufficientInputError("bucket_report: no values");
    }
    BucketReport r;
    for (double d : diffs) {
        if (!(d >= 0.0)) {
            throw ParameterError("bucket_report: negative or NaN difference " + std::to_string(d));
        }
        const std::size_t b = d < 5.0 ? 0 : d < 10.0 ? 1 : d < 20.0 ? 2 : 3;
        ++r.counts[b];
    }
    r.total = diffs.size();
    for (std::size_t b = 0; b < 4; ++b) {
        r.fractions[b] = static_cast<double>(r.counts[b]) / static_cast<double>(r.total);
    }
    return r;
}

struct ReferenceScore {
    std::string method;
    double smapePercent = 0.0;
    bool caller = false;
};

/// Published SMAPE scores of earlier automatic Cobb-angle methods (percent).
inline std::vector<ReferenceScore> reference_scores()
{
    return {
        {"Revised U-Net", 16.48},
        {"ResNet", 10.81},
        {"Fast RCNN", 25.69},
        {"Multi-View Extrapolation Net", 18.95},
        {"S^2VR", 37.08},
        {"BoostNet", 23.44},
        {"YOLACT", 10.76},
    };
}

/// Published error-bucket distribution of the instance-segmentation pipeline (percent).
inline constexpr std::array<double, 3> kReferenceBuckets{64.86, 29.73, 5.41};

/// Reference rows plus an optional caller score, sorted ascending by SMAPE.
inline std::vector<ReferenceScore> comparison_table(std::optional<double> callerScore = std::nullopt,
                                                    const std::string& callerName = "this run")
{
    auto rows = reference_scores();
    if (callerScore) {
        rows.push_back({callerName, *callerScore, true});
    }
    std::stable_sort(rows.begin(), rows.end(),
                     [](const ReferenceScore& a, const ReferenceScore& b) { return a.smapePercent < b.smapePercent; });
    return rows;
}

struct EvalReport {
    std::size_t n = 0;
    double smapePercent = 0.0;
    std::vector<std::string> imageIds;
    std::vector<std::array<double, 3>> perImageAbsDiff;
    BucketReport buckets;
    std::vector<ReferenceScore> referenceScores;
};

inline EvalReport evaluate(const std::vector<std::string>& ids, const std::vector<AngleTriple>& preds,
                           const std::vector<AngleTriple>& gts)
{
    EvalReport r;
    r.n = preds.size();
    r.smapePercent = smape(preds, gts);
    r.imageIds = ids;
    std::vector<double> flat;
    flat.reserve(3 * preds.size());
    for (std::size_t j = 0; j < preds.size(); ++j) {
        r.perImageAbsDiff.push_back(abs_diff(preds[j], gts[j]));
        flat.insert(flat.end(), r.perImageAbsDiff.back().begin(), r.perImageAbsDiff.back().end());
    }
    r.buckets = bucket_report(flat);
    r.referenceScores = comparison_table(r.smapePercent);
    return r;
}

} // namespace cobb
