#pragma once

// Umbrella header for the library. PNG helpers live separately in cobb/png_io.hpp
// because they require libpng.

#include "cobb/annotation.hpp"
#include "cobb/coco.hpp"
#include "cobb/cobb_engine.hpp"
#include "cobb/contour.hpp"
#include "cobb/dataset.hpp"
#include "cobb/error.hpp"
#include "cobb/evaluation.hpp"
#include "cobb/geometry.hpp"
#include "cobb/json_io.hpp"
#include "cobb/landmarks.hpp"
#include "cobb/mask_assembly.hpp"
#include "cobb/random.hpp"
#include "cobb/raster.hpp"
#include "cobb/render.hpp"
#include "cobb/synthetic.hpp"
#include "cobb/tensor_text.hpp"
