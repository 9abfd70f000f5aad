#pragma once

#include <cstdint>

#include "warpcheck/warped.hpp"

namespace warpcheck {

/// Seeded random warped product for oracle-equivalence stress tests:
/// a 2D Riemannian base with bounded trig/polynomial metric perturbations
/// (diagonal stays within [0.8, 1.2], off-diagonal within +-0.12 at
/// amplitude 1), a warping function 1 + bounded perturbation (>= 0.85), and
/// a unit-sphere fiber. Expression sources are generated as text so the fuzz
/// path also exercises the parser. `amplitude` in [0,1] scales every
/// perturbation coefficient.
WarpedProduct fuzzed_warped_product(std::uint64_t seed, double amplitude = 1.0);

} // namespace warpcheck
