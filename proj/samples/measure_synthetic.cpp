// Generates one S-shaped synthetic spine, rasterizes it to instance masks and
// measures the Cobb triple from the masks alone.

#include "cobb/cobb.hpp"

#include <cstdio>

int main()
{
    cobb::SpineParams p;
    p.imageWidth = 320;
    p.amplitude = 45.0;
    p.periods = 1.25;
    p.phase = 0.4;
    const cobb::SpineAnnotation spine = cobb::generate_spine(p, "sample.png");

    const cobb::MaskMeasurement m = cobb::measure_from_masks(cobb::rasterize(spine));
    const cobb::AngleTriple& gt = *spine.gtAngles;
    std::printf("exact     PT %6.2f  MT %6.2f  TL %6.2f\n", gt.pt, gt.mt, gt.tl);
    std::printf("measured  PT %6.2f  MT %6.2f  TL %6.2f  (MT lines %d-%d)\n", m.cobb.pt, m.cobb.mt, m.cobb.tl,
                m.cobb.mtPair[0], m.cobb.mtPair[1]);
    std::printf("SMAPE %.3f%%\n", cobb::smape({m.cobb.angles()}, {gt}));
}
