#pragma once

// Umbrella header for the core library (no file I/O).

#include "fieldvision/bench.hpp"
#include "fieldvision/colorspace.hpp"
#include "fieldvision/config.hpp"
#include "fieldvision/edges.hpp"
#include "fieldvision/error.hpp"
#include "fieldvision/image.hpp"
#include "fieldvision/pipeline.hpp"
#include "fieldvision/saliency.hpp"
#include "fieldvision/segmentation.hpp"
#include "fieldvision/session.hpp"
