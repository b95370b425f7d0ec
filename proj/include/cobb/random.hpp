#pragma once

// Portable seeded randomness. The engine is std::mt19937_64, whose output sequence
// is fixed by the C++ standard; the distributions below are spelled out here rather
// than taken from <random>, whose distributions differ between standard libraries.
//
//   uniform_index(n): draw x until x < 2^64 - (2^64 mod n), return x mod n
//   uniform01():      (x >> 11) * 2^-53
//   shuffle:          Fisher-Yates from the back, j = uniform_index(i + 1)

#include <cstdint>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

namespace cobb {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    std::uint64_t uniform_index(std::uint64_t n)
    {
        if (n <= 1) {
            return 0;
        }
        const std::uint64_t limit = std::uint64_t(0) - (std::uint64_t(0) - n) % n; // 2^64 - (2^64 mod n), mod 2^64
        while (true) {
            const std::uint64_t x = next();
            if (limit == 0 || x < limit) {
                return x % n;
            }
        }
    }

    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    template <typename T>
    void shuffle(std::vector<T>& v)
    {
        for (std::size_t i = v.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(uniform_index(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

/// 64-bit FNV-1a.
constexpr std::uint64_t fnv1a64(std::string_view s) noexcept
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

} // namespace cobb
