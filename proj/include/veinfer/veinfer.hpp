#pragma once

// Umbrella header: two-arm vaccine-efficacy estimation via the conditional
// Beta-binomial method and a full Bayesian rate model with MCMC, plus the
// simulation and quadrature oracles that validate the closed forms.

#include "veinfer/analysis.hpp"
#include "veinfer/conditional.hpp"
#include "veinfer/densities.hpp"
#include "veinfer/errors.hpp"
#include "veinfer/io.hpp"
#include "veinfer/likelihood.hpp"
#include "veinfer/mcmc.hpp"
#include "veinfer/moments.hpp"
#include "veinfer/priors.hpp"
#include "veinfer/quadrature.hpp"
#include "veinfer/rng.hpp"
#include "veinfer/simulate.hpp"
#include "veinfer/special_functions.hpp"
#include "veinfer/trial.hpp"
#include "veinfer/version.hpp"
