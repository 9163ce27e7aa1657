#pragma once

// Seeded random states, unitaries and pinchings for property checks.

#include <random>

#include "qht/operator_core.hpp"
#include "qht/types_pinch.hpp"

namespace qht {

using Rng = std::mt19937_64;

/// Haar-distributed unitary (QR of a complex Gaussian matrix, phases fixed).
Matrix random_unitary(Index dim, Rng& rng);

/// Full-rank density (1 - floor) G G^dagger / tr + floor * 1/d.
DensityOperator random_density(Index dim, Rng& rng, double floor = 0.05);

/// Pinching with K blocks in a random basis; every block is non-empty.
PinchingSpec random_pinching(Index dim, int K, Rng& rng);

}  // namespace qht
