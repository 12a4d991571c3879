#pragma once

// Causal direction discovery for multivariate extremes: threshold
// exceedances are moved to the standard Pareto scale and each margin is
// compared to the unit exponential through its 1-Wasserstein distance.

#include "tailcausal/csv.hpp"
#include "tailcausal/errors.hpp"
#include "tailcausal/gp.hpp"
#include "tailcausal/inference.hpp"
#include "tailcausal/margins.hpp"
#include "tailcausal/matrix.hpp"
#include "tailcausal/pipeline.hpp"
#include "tailcausal/rng.hpp"
#include "tailcausal/samplers.hpp"
#include "tailcausal/score.hpp"
#include "tailcausal/stats.hpp"
#include "tailcausal/wasserstein.hpp"
#include "tailcausal/window.hpp"
