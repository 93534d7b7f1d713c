#include "wavescat/state.hpp"

#include <cmath>
#include <stdexcept>

namespace wavescat {

StateVector make_state(GridPtr grid, Rep rep) {
    StateVector U;
    U.c1 = make_field(grid, rep);
    U.c2 = make_field(std::move(grid), rep);
    return U;
}

StateVector to_spectral(StateVector U) {
    U.c1 = to_spectral(std::move(U.c1));
    U.c2 = to_spectral(std::move(U.c2));
    return U;
}

StateVector to_physical(StateVector U) {
    U.c1 = to_physical(std::move(U.c1));
    U.c2 = to_physical(std::move(U.c2));
    return U;
}

StateVector operator+(const StateVector& a, const StateVector& b) {
    StateVector r = a;
    r.c1.values += b.c1.values;
    r.c2.values += b.c2.values;
    return r;
}

StateVector operator-(const StateVector& a, const StateVector& b) {
    StateVector r = a;
    r.c1.values -= b.c1.values;
    r.c2.values -= b.c2.values;
    return r;
}

StateVector operator*(std::complex<double> a, const StateVector& U) {
    StateVector r = U;
    r.c1.values *= a;
    r.c2.values *= a;
    return r;
}

StateVector& operator+=(StateVector& a, const StateVector& b) {
    a.c1.values += b.c1.values;
    a.c2.values += b.c2.values;
    return a;
}

StateVector& operator-=(StateVector& a, const StateVector& b) {
    a.c1.values -= b.c1.values;
    a.c2.values -= b.c2.values;
    return a;
}

StateVector lift_data(const Field& u1, const Field& u2) {
    if (!u1.grid->same_layout(*u2.grid))
        throw std::invalid_argument("lift_data: components live on different grids");
    StateVector U;
    U.c1 = apply_abs_d(to_spectral(u1), +1); // kills the mean of u1
    U.c2 = to_spectral(u2);
    return U;
}

std::pair<Field, Field> restore_data(const StateVector& U) {
    Field u1 = to_physical(apply_abs_d(U.c1, -1));
    Field u2 = to_physical(U.c2);
    return {std::move(u1), std::move(u2)};
}

double energy_norm(const StateVector& U) {
    return std::sqrt(U.c1.values.squaredNorm() + U.c2.values.squaredNorm());
}

} // namespace wavescat
