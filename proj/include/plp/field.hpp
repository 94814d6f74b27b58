#pragma once

#include <complex>
#include <memory>
#include <string>
#include <vector>

#include "plp/grid.hpp"

namespace plp {

using Complex = std::complex<double>;

// Real-valued samples over a grid with a lazily cached discrete Fourier
// spectrum (forward transform unnormalized, inverse carries 1/N).
class Field {
public:
    Field() = default;
    Field(Grid grid, std::vector<double> values);
    static Field zeros(const Grid& grid);
    static Field from_spectrum(const Grid& grid, const std::vector<Complex>& spectrum);

    const Grid& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }
    double value(std::size_t i) const { return values_[i]; }

    // Forward DFT, cached on first use.
    const std::vector<Complex>& spectrum() const;
    bool spectrum_cached() const { return spectrum_ != nullptr; }

private:
    Grid grid_;
    std::vector<double> values_;
    mutable std::shared_ptr<const std::vector<Complex>> spectrum_;
};

// n+1 component fields on a shared grid (e.g. a space-time gradient).
struct VectorField {
    std::vector<Field> components;

    explicit VectorField(std::vector<Field> comps);
    const Grid& grid() const { return components.front().grid(); }
    int count() const { return static_cast<int>(components.size()); }
};

struct DerivativeOrder {
    int time = 0;                 // order in the last axis
    std::vector<int> space;      // per-spatial-axis orders (size n)
    int total() const;
};

// Caches the spectrum (returns a copy sharing the cached transform).
Field to_spectral(const Field& f);

// Spectral derivative d_t^r d_x^s f; multiplies by prod (i xi_i)^{o_i} and
// zeroes the unpaired Nyquist modes of differentiated axes.  Warns on stderr
// when the top frequency shell carries more than 1e-6 of the energy.
Field spectral_derivative(const Field& f, const DerivativeOrder& ord);
Field axis_derivative(const Field& f, int axis, int order = 1);
VectorField gradient(const Field& f);

double grid_mean(const Field& f);
Field mean_subtract(const Field& f);

// Spectral antiderivative along one axis: divides by (i xi) off the
// xi_axis = 0 hyperplane and fixes each slice constant to zero slice mean.
// Requires vanishing slice means (tolerance 1e-10 relative to max|f|).
Field antiderivative(const Field& f, int axis);

Field field_scale(const Field& f, double s);
Field field_add(const Field& f, const Field& g, double cf = 1.0, double cg = 1.0);
Field field_product(const Field& f, const Field& g);

// --- import/export -------------------------------------------------------
// `path` holds the samples (flat little-endian doubles in row-major order for
// "bin", text rows for "csv"); `path + ".json"` holds the header (dims, box,
// anisotropy, sample offset, format).  Binary round trips bit-exactly.
void write_field(const Field& f, const std::string& path, const std::string& format = "bin");
Field read_field(const std::string& path);

}  // namespace plp
