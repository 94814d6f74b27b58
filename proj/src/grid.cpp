#include "plp/grid.hpp"

#include <cmath>

#include "plp/errors.hpp"

namespace plp {

Grid::Grid(std::vector<int> dims, Box box, Anisotropy aniso, double sample_offset)
    : dims_(std::move(dims)), box_(std::move(box)), aniso_(std::move(aniso)), offset_(sample_offset) {
    if (static_cast<int>(dims_.size()) != box_.axes() || box_.axes() != aniso_.axes())
        throw StructuralError("grid: dims/box/anisotropy axis mismatch");
    total_ = 1;
    cell_volume_ = 1.0;
    spacing_.resize(dims_.size());
    for (size_t i = 0; i < dims_.size(); ++i) {
        if (dims_[i] < 4 || dims_[i] % 2 != 0)
            throw ConfigError("grid: dims must be even and >= 4");
        total_ *= static_cast<std::size_t>(dims_[i]);
        spacing_[i] = box_.length(static_cast<int>(i)) / dims_[i];
        cell_volume_ *= spacing_[i];
    }
    strides_.assign(dims_.size(), 1);
    for (int ax = static_cast<int>(dims_.size()) - 2; ax >= 0; --ax)
        strides_[static_cast<size_t>(ax)] =
            strides_[static_cast<size_t>(ax) + 1] * static_cast<std::size_t>(dims_[static_cast<size_t>(ax) + 1]);

    // Resolvable dyadic scales.
    double r_nyquist = std::numeric_limits<double>::infinity();
    double rho_min = std::numeric_limits<double>::infinity();
    for (int ax = 0; ax < axes(); ++ax) {
        const double w = aniso_.weight(ax);
        const double nyq = M_PI * dim(ax) / box_.length(ax);
        const double fund = 2.0 * M_PI / box_.length(ax);
        r_nyquist = std::min(r_nyquist, std::pow(nyq, 1.0 / w));
        rho_min = std::min(rho_min, std::pow(fund, 1.0 / w));
    }
    j_max_ = static_cast<int>(std::floor(std::log2(r_nyquist) + 1e-9)) - 1;
    j_min_ = static_cast<int>(std::ceil(std::log2(rho_min) - 1.0 - 1e-9));
}

Point Grid::point(const std::vector<int>& idx) const {
    Point z(idx.size());
    for (size_t i = 0; i < idx.size(); ++i) z[i] = coord(static_cast<int>(i), idx[i]);
    return z;
}

double Grid::freq_aniso_norm(std::size_t linear) const {
    Point xi(static_cast<size_t>(axes()));
    std::size_t rem = linear;
    for (int ax = 0; ax < axes(); ++ax) {
        const int idx = static_cast<int>(rem / strides_[static_cast<size_t>(ax)]);
        rem %= strides_[static_cast<size_t>(ax)];
        xi[static_cast<size_t>(ax)] = freq(ax, idx);
    }
    return aniso_distance(xi, aniso_);
}

std::size_t Grid::linear(const std::vector<int>& idx) const {
    std::size_t l = 0;
    for (size_t i = 0; i < idx.size(); ++i) l += static_cast<std::size_t>(idx[i]) * strides_[i];
    return l;
}

std::vector<int> Grid::unravel(std::size_t linear) const {
    std::vector<int> idx(dims_.size());
    for (size_t i = 0; i < dims_.size(); ++i) {
        idx[i] = static_cast<int>(linear / strides_[i]);
        linear %= strides_[i];
    }
    return idx;
}

}  // namespace plp
