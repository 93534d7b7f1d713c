// field.hpp — Complex grid functions in physical or spectral representation,
// the unitary discrete Fourier transform between them, and the |D| multiplier.

#pragma once

#include <complex>

#include <Eigen/Dense>

#include "wavescat/grid.hpp"

namespace wavescat {

enum class Rep { physical, spectral };
enum class TransformDirection { forward, inverse };

/// A complex-valued grid function together with the representation it lives
/// in. The transform between representations is unitary (1/sqrt(N^n) on both
/// directions), so the plain vector 2-norm is the discrete L2 norm in either
/// representation.
struct Field {
    GridPtr grid;
    Rep rep = Rep::physical;
    Eigen::VectorXcd values;
};

Field make_field(GridPtr grid, Rep rep);
Field constant_field(GridPtr grid, std::complex<double> value, Rep rep = Rep::physical);

/// Spectral indicator of a single mode (unit coefficient at the given flat
/// spectral index, zero elsewhere).
Field mode_field(GridPtr grid, Eigen::Index flat_index, std::complex<double> amplitude = 1.0);

/// Unitary DFT. forward: physical -> spectral, inverse: spectral -> physical.
/// Throws std::invalid_argument when the field is not in the source
/// representation of the requested direction.
Field transform(const Field& f, TransformDirection direction);

/// Representation coercions (no-ops when already there).
Field to_spectral(Field f);
Field to_physical(Field f);

/// Spectral multiplication by |xi|^power, power in {+1, -1}. The zero mode is
/// mapped to zero for both powers, which makes the inverse total. Accepts
/// either representation and returns the input's representation.
Field apply_abs_d(const Field& f, int power);

/// Discrete L2 norm (representation independent by unitarity).
double field_norm(const Field& f);

} // namespace wavescat
