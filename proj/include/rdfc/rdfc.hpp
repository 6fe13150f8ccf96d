#pragma once

// Umbrella header for the RDFC calculator library.
//
// The library evaluates the two corner points of the coordination-
// randomness rate region for randomized distributed function computation
// under local differential privacy, in both a clipped-Gaussian continuous
// model and a discrete randomized-response model, plus the finite-
// blocklength privacy gap and an exact small-blocklength synthesis
// simulator. All rates and entropies are in nats unless converted at the
// CLI boundary.

#include "rdfc/coord_synth.hpp"
#include "rdfc/discrete_rr.hpp"
#include "rdfc/errors.hpp"
#include "rdfc/finite_blocklength.hpp"
#include "rdfc/gaussian_ldp.hpp"
#include "rdfc/quadrature.hpp"
#include "rdfc/rng.hpp"
#include "rdfc/special_functions.hpp"
#include "rdfc/version.hpp"
