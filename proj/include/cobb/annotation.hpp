#pragma once

#include "cobb/landmarks.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cobb {

/// Proximal-thoracic, main-thoracic and thoraco-lumbar Cobb angles in degrees.
struct AngleTriple {
    double pt = 0.0;
    double mt = 0.0;
    double tl = 0.0;

    friend bool operator==(const AngleTriple&, const AngleTriple&) = default;
};

/// One radiograph: identity, size and vertebra landmarks ordered cranial to caudal.
struct SpineAnnotation {
    std::string imageId;
    int width = 0;
    int height = 0;
    std::vector<VertebraQuad> quads;
    std::optional<AngleTriple> gtAngles;
    std::vector<std::string> warnings;

    /// Warnings for landmarks outside [0, width] x [0, height]; returns whether any were found.
    bool flag_out_of_bounds()
    {
        bool any = false;
        for (const auto& q : quads) {
            for (std::size_t c = 0; c < 4; ++c) {
                const Point2D p = q.corners[c];
                if (p.x < 0.0 || p.y < 0.0 || p.x > width || p.y > height) {
                    warnings.push_back("vertebra " + std::to_string(q.index) + " corner " + std::to_string(c) +
                                       " lies outside the image");
                    any = true;
                }
            }
        }
        return any;
    }
};

} // namespace cobb
