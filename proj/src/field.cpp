#include "wavescat/field.hpp"

#include <stdexcept>

#include <unsupported/Eigen/FFT>

namespace wavescat {

namespace {

// One 1D complex transform engine, reused across calls. kissfft caches
// twiddle tables per size internally.
Eigen::FFT<double>& fft_engine() {
    static Eigen::FFT<double> fft(Eigen::default_fft_impl<double>(),
                                  Eigen::FFT<double>::Unscaled);
    return fft;
}

// Applies the unscaled 1D transform along every axis of the flattened array,
// then applies the unitary normalization once.
void dft_all_axes(const GridSpec& g, Eigen::VectorXcd& data, TransformDirection dir) {
    const int n = g.points_per_axis;
    const Eigen::Index total = g.size();
    Eigen::VectorXcd line(n), line_out(n);
    auto& fft = fft_engine();

    Eigen::Index stride = 1;
    for (int axis = 0; axis < g.dimension; ++axis) {
        const Eigen::Index block = stride * n;
        for (Eigen::Index base = 0; base < total; base += block) {
            for (Eigen::Index off = 0; off < stride; ++off) {
                for (int k = 0; k < n; ++k) line[k] = data[base + off + k * stride];
                if (dir == TransformDirection::forward)
                    fft.fwd(line_out, line);
                else
                    fft.inv(line_out, line);
                for (int k = 0; k < n; ++k) data[base + off + k * stride] = line_out[k];
            }
        }
        stride *= n;
    }
    data *= std::pow(1.0 / std::sqrt(double(n)), g.dimension);
}

} // namespace

Field make_field(GridPtr grid, Rep rep) {
    Field f;
    f.grid = std::move(grid);
    f.rep = rep;
    f.values = Eigen::VectorXcd::Zero(f.grid->size());
    return f;
}

Field constant_field(GridPtr grid, std::complex<double> value, Rep rep) {
    Field f = make_field(std::move(grid), rep);
    f.values.setConstant(value);
    return f;
}

Field mode_field(GridPtr grid, Eigen::Index flat_index, std::complex<double> amplitude) {
    Field f = make_field(std::move(grid), Rep::spectral);
    f.values[flat_index] = amplitude;
    return f;
}

Field transform(const Field& f, TransformDirection direction) {
    const Rep source = (direction == TransformDirection::forward) ? Rep::physical : Rep::spectral;
    if (f.rep != source)
        throw std::invalid_argument("transform: field is not in the source representation "
                                    "of the requested direction");
    Field out = f;
    dft_all_axes(*f.grid, out.values, direction);
    out.rep = (direction == TransformDirection::forward) ? Rep::spectral : Rep::physical;
    return out;
}

Field to_spectral(Field f) {
    if (f.rep == Rep::spectral) return f;
    return transform(f, TransformDirection::forward);
}

Field to_physical(Field f) {
    if (f.rep == Rep::physical) return f;
    return transform(f, TransformDirection::inverse);
}

Field apply_abs_d(const Field& f, int power) {
    if (power != 1 && power != -1)
        throw std::invalid_argument("apply_abs_d: power must be +1 or -1");
    const Rep original = f.rep;
    Field g = to_spectral(f);
    const auto& w = g.grid->abs_freq;
    for (Eigen::Index i = 0; i < g.values.size(); ++i) {
        if (w[i] == 0.0)
            g.values[i] = 0.0;
        else
            g.values[i] *= (power > 0) ? w[i] : 1.0 / w[i];
    }
    if (original == Rep::physical) g = to_physical(std::move(g));
    return g;
}

double field_norm(const Field& f) { return f.values.norm(); }

} // namespace wavescat
