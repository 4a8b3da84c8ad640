#pragma once

// Umbrella header for the eXIE library: explainable image enhancement by
// searching for an elementary operator program that transforms a source
// image into an approximation of a target image.

#include "exie/color.hpp"
#include "exie/error.hpp"
#include "exie/heuristic.hpp"
#include "exie/image.hpp"
#include "exie/image_io.hpp"
#include "exie/metrics.hpp"
#include "exie/operators.hpp"
#include "exie/search.hpp"
#include "exie/sequence.hpp"
#include "exie/synth.hpp"
