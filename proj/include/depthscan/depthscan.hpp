// Umbrella header: pulls in the whole library.
#pragma once

#include "depthscan/bench.hpp"
#include "depthscan/depth.hpp"
#include "depthscan/errors.hpp"
#include "depthscan/gp.hpp"
#include "depthscan/io.hpp"
#include "depthscan/matern.hpp"
#include "depthscan/outlier.hpp"
#include "depthscan/parallel.hpp"
#include "depthscan/qn.hpp"
#include "depthscan/random.hpp"
#include "depthscan/sim_models.hpp"
#include "depthscan/shape_test.hpp"
#include "depthscan/stats.hpp"
#include "depthscan/types.hpp"
