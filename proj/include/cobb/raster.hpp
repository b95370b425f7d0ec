#pragma once

#include "cobb/error.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace cobb {

/// Dense row-major 2D grid.
template <typename T>
class Raster {
public:
    Raster() = default;
    Raster(int height, int width, T fill = T{})
        : height_(height), width_(width), data_(checked_size(height, width), fill)
    {}

    int height() const noexcept { return height_; }
    int width() const noexcept { return width_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    T& operator()(int row, int col) noexcept { return data_[index(row, col)]; }
    const T& operator()(int row, int col) const noexcept { return data_[index(row, col)]; }

    bool in_bounds(int row, int col) const noexcept
    {
        return row >= 0 && col >= 0 && row < height_ && col < width_;
    }

    std::vector<T>& data() noexcept { return data_; }
    const std::vector<T>& data() const noexcept { return data_; }

    template <typename U>
    bool same_shape(const Raster<U>& other) const noexcept
    {
        return height_ == other.height() && width_ == other.width();
    }

    friend bool operator==(const Raster&, const Raster&) = default;

private:
    static std::size_t checked_size(int height, int width)
    {
        if (height < 0 || width < 0) {
            throw ShapeError("raster dimensions must be nonnegative, got " + std::to_string(height) + "x" +
                             std::to_string(width));
        }
        return static_cast<std::size_t>(height) * static_cast<std::size_t>(width);
    }
    std::size_t index(int row, int col) const noexcept
    {
        return static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(col);
    }

    int height_ = 0;
    int width_ = 0;
    std::vector<T> data_;
};

using GrayImage = Raster<std::uint8_t>;

struct Rgb {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;
    friend bool operator==(Rgb, Rgb) = default;
};
using RgbImage = Raster<Rgb>;

/// Binary instance mask with the detector confidence that produced it.
struct InstanceMask {
    Raster<std::uint8_t> pixels; // 0 = background, 1 = foreground
    double score = 1.0;

    InstanceMask() = default;
    InstanceMask(int height, int width, double s = 1.0) : pixels(height, width, 0), score(s) {}

    int height() const noexcept { return pixels.height(); }
    int width() const noexcept { return pixels.width(); }
    bool on(int row, int col) const noexcept { return pixels(row, col) != 0; }

    std::size_t foreground_count() const noexcept
    {
        std::size_t count = 0;
        for (auto v : pixels.data()) {
            count += v != 0;
        }
        return count;
    }
};

} // namespace cobb
