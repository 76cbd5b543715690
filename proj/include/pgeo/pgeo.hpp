#pragma once

// Umbrella header.

#include "autodiff.hpp"
#include "curvegeom.hpp"
#include "energy.hpp"
#include "errors.hpp"
#include "io.hpp"
#include "metrics.hpp"
#include "optimize.hpp"
#include "shapes.hpp"
#include "splitting.hpp"
#include "vec2.hpp"
