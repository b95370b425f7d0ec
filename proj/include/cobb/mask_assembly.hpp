#pragma once

// Prototype/coefficient mask assembly, binarization and the forward loss terms
// used to supervise the assembled masks.

#include "cobb/error.hpp"
#include "cobb/raster.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace cobb {

/// k prototype masks of size height x width, stored row-major as (row, col, prototype).
struct PrototypeStack {
    int height = 0;
    int width = 0;
    int k = 32;
    std::vector<double> values;

    PrototypeStack() = default;
    PrototypeStack(int h, int w, int kk, std::vector<double> v) : height(h), width(w), k(kk), values(std::move(v))
    {
        validate();
    }

    double at(int row, int col, int j) const noexcept
    {
        return values[(static_cast<std::size_t>(row) * width + col) * k + j];
    }

    void validate() const
    {
        if (height < 1 || width < 1 || k < 1) {
            throw ShapeError("prototype stack needs height, width, k >= 1, got " + std::to_string(height) + "x" +
                             std::to_string(width) + "x" + std::to_string(k));
        }
        if (values.size() != static_cast<std::size_t>(height) * width * k) {
            throw ShapeError("prototype stack expects " + std::to_string(static_cast<std::size_t>(height) * width * k) +
                             " values, got " + std::to_string(values.size()));
        }
    }
};

/// n x k mask coefficients, row-major (instance, prototype).
struct CoeffMatrix {
    int n = 0;
    int k = 0;
    std::vector<double> values;

    CoeffMatrix() = default;
    CoeffMatrix(int nn, int kk, std::vector<double> v) : n(nn), k(kk), values(std::move(v)) { validate(); }

    double at(int i, int j) const noexcept { return values[static_cast<std::size_t>(i) * k + j]; }

    void validate() const
    {
        if (n < 0 || k < 1) {
            throw ShapeError("coefficient matrix needs n >= 0 and k >= 1, got " + std::to_string(n) + "x" +
                             std::to_string(k));
        }
        if (values.size() != static_cast<std::size_t>(n) * k) {
            throw ShapeError("coefficient matrix expects " + std::to_string(static_cast<std::size_t>(n) * k) +
                             " values, got " + std::to_string(values.size()));
        }
    }
};

/// Post-sigmoid per-pixel foreground probabilities.
using SoftMask = Raster<double>;

struct LossTriple {
    double classification = 0.0;
    double box = 0.0;
    double mask = 0.0;

    friend LossTriple operator+(LossTriple a, LossTriple b) noexcept
    {
        return {a.classification + b.classification, a.box + b.box, a.mask + b.mask};
    }
};

inline constexpr double kClassificationWeight = 1.0;
inline constexpr double kBoxWeight = 1.5;
inline constexpr double kMaskWeight = 6.125;
inline constexpr double kBceEpsilon = 1e-7;
inline constexpr double kDefaultThreshold = 0.5;

inline double sigmoid(double z) noexcept
{
    // Branch keeps exp() from overflowing for large |z|.
    if (z >= 0.0) {
        return 1.0 / (1.0 + std::exp(-z));
    }
    const double e = std::exp(z);
    return e / (1.0 + e);
}

inline CoeffMatrix activate_coefficients(const CoeffMatrix& raw)
{
    CoeffMatrix out = raw;
    for (double& v : out.values) {
        v = std::tanh(v);
    }
    return out;
}

/// M_i = sigmoid(P c_i^T) for every coefficient row c_i, with P viewed as (h*w) x k.
inline std::vector<SoftMask> assemble_masks(const PrototypeStack& p, const CoeffMatrix& c)
{
    p.validate();
    c.validate();
    if (p.k != c.k) {
        throw ShapeError("assemble_masks: prototype k = " + std::to_string(p.k) + " but coefficient k = " +
                         std::to_string(c.k));
    }
    const std::size_t pixels = static_cast<std::size_t>(p.height) * p.width;
    const std::size_t k = static_cast<std::size_t>(p.k);

    std::vector<SoftMask> masks;
    masks.reserve(static_cast<std::size_t>(c.n));
    for (int i = 0; i < c.n; ++i) {
        SoftMask m(p.height, p.width);
        const double* coeff = c.values.data() + static_cast<std::size_t>(i) * k;
        auto& out = m.data();
        for (std::size_t px = 0; px < pixels; ++px) {
            const double* proto = p.values.data() + px * k;
            double logit = 0.0;
            for (std::size_t j = 0; j < k; ++j) {
                logit += proto[j] * coeff[j];
            }
            out[px] = sigmoid(logit);
        }
        masks.push_back(std::move(m));
    }
    return masks;
}

/// Foreground iff the soft value is strictly above `threshold`.
inline InstanceMask binarize(const SoftMask& m, double threshold = kDefaultThreshold, double score = 1.0)
{
    if (!(threshold > 0.0 && threshold < 1.0)) {
        throw ParameterError("binarize: threshold must lie in (0, 1), got " + std::to_string(threshold));
    }
    InstanceMask out(m.height(), m.width(), score);
    const auto& src = m.data();
    auto& dst = out.pixels.data();
    for (std::size_t i = 0; i < src.size(); ++i) {
        dst[i] = src[i] > threshold ? 1 : 0;
    }
    return out;
}

/// Mean pixel-wise binary cross-entropy, predictions clamped to [eps, 1 - eps].
inline double mask_bce_loss(const SoftMask& pred, const InstanceMask& truth)
{
    if (!pred.same_shape(truth.pixels)) {
        throw ShapeError("mask_bce_loss: prediction is " + std::to_string(pred.height()) + "x" +
                         std::to_string(pred.width()) + " but truth is " + std::to_string(truth.height()) + "x" +
                         std::to_string(truth.width()));
    }
    if (pred.empty()) {
        throw ShapeError("mask_bce_loss: empty mask");
    }
    const auto& p = pred.data();
    const auto& y = truth.pixels.data();
    // Neumaier summation keeps the mean stable for large rasters.
    double sum = 0.0;
    double comp = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double q = std::clamp(p[i], kBceEpsilon, 1.0 - kBceEpsilon);
        const double term = y[i] != 0 ? -std::log(q) : -std::log1p(-q);
        const double t = sum + term;
        comp += std::abs(sum) >= std::abs(term) ? (sum - t) + term : (term - t) + sum;
        sum = t;
    }
    return (sum + comp) / static_cast<double>(p.size());
}

inline double total_loss(const LossTriple& l)
{
    if (l.classification < 0.0 || l.box < 0.0 || l.mask < 0.0) {
        throw ParameterError("total_loss: loss components must be nonnegative");
    }
    return kClassificationWeight * l.classification + kBoxWeight * l.box + kMaskWeight * l.mask;
}

} // namespace cobb
