// random_state.hpp — Deterministic random test data: spectral states with a
// |xi|^{-2} amplitude envelope and uniform phases. Smooth, mean-zero in the
// first component, and byte-reproducible for a given seed (raw mt19937_64
// output only; no distribution objects).

#pragma once

#include "wavescat/state.hpp"

namespace wavescat {

/// Unit-energy two-component spectral state. The first component's zero mode
/// is zero (energy-space-legal data); the second keeps its zero mode.
StateVector random_state(const GridPtr& grid, unsigned long seed);

/// Single random field with the same envelope, unit norm, mean zero when
/// mean_zero is set. Physical representation.
Field random_field(const GridPtr& grid, unsigned long seed, bool mean_zero = true);

} // namespace wavescat
