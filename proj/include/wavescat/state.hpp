// state.hpp — Two-component states and the lift between wave data
// (u, D_t u) and the first-order spectral state U = (|D| u^, D_t u^).

#pragma once

#include <utility>

#include "wavescat/field.hpp"

namespace wavescat {

/// Two grid functions sharing grid and representation. This is the arena all
/// propagators act on, both in the lifted picture U and the diagonalized
/// picture U0 = M^{-1} U.
struct StateVector {
    Field c1, c2;

    GridPtr grid() const { return c1.grid; }
    Rep rep() const { return c1.rep; }
};

StateVector make_state(GridPtr grid, Rep rep = Rep::spectral);
StateVector to_spectral(StateVector U);
StateVector to_physical(StateVector U);

StateVector operator+(const StateVector& a, const StateVector& b);
StateVector operator-(const StateVector& a, const StateVector& b);
StateVector operator*(std::complex<double> a, const StateVector& U);
StateVector& operator+=(StateVector& a, const StateVector& b);
StateVector& operator-=(StateVector& a, const StateVector& b);

/// Lift wave data (u1, u2) = (u, D_t u) to U = (|D| u1^, u2^) in spectral
/// representation. The mean of u1 is projected out (|D| annihilates it
/// anyway); the zero mode of u2 is kept. Throws on grid mismatch.
StateVector lift_data(const Field& u1, const Field& u2);

/// Inverse of lift_data: returns (|D|^{-1} U1, U2) as physical fields. The
/// first component comes back mean-zero.
std::pair<Field, Field> restore_data(const StateVector& U);

/// Energy norm: sqrt(||U1||^2 + ||U2||^2). Via the lift this equals the
/// H^1-dot x L2 energy of the wave data.
double energy_norm(const StateVector& U);

} // namespace wavescat
