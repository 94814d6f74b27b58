#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "plp/anisotropy.hpp"
#include "plp/geometry.hpp"

namespace plp {

// Uniform grid over a rectangular fundamental domain.  Sample points sit at
// lo + (idx + sample_offset) * h; offset 0 is the periodic/spectral
// convention, offset 0.5 the cell-centered one used for bounded domains.
class Grid {
public:
    Grid() = default;
    Grid(std::vector<int> dims, Box box, Anisotropy aniso, double sample_offset = 0.0);

    int axes() const { return static_cast<int>(dims_.size()); }
    const std::vector<int>& dims() const { return dims_; }
    int dim(int ax) const { return dims_[static_cast<size_t>(ax)]; }
    const Box& box() const { return box_; }
    const Anisotropy& aniso() const { return aniso_; }
    double sample_offset() const { return offset_; }

    std::size_t total() const { return total_; }
    double spacing(int ax) const { return spacing_[static_cast<size_t>(ax)]; }
    double cell_volume() const { return cell_volume_; }

    double coord(int ax, int idx) const {
        return box_.lo[static_cast<size_t>(ax)] + (idx + offset_) * spacing(ax);
    }
    Point point(const std::vector<int>& idx) const;

    // Signed frequency 2*pi*k/L of spectral index idx (k in [-N/2, N/2-1]).
    double freq(int ax, int idx) const {
        const int n = dim(ax);
        const int k = idx < n / 2 ? idx : idx - n;
        return 2.0 * M_PI * k / box_.length(ax);
    }
    // True when idx is the unpaired Nyquist mode k = -N/2 on axis ax.
    bool is_nyquist(int ax, int idx) const { return idx == dim(ax) / 2; }

    // The anisotropic distance of the frequency vector at a linear index.
    double freq_aniso_norm(std::size_t linear) const;

    std::size_t linear(const std::vector<int>& idx) const;
    std::vector<int> unravel(std::size_t linear) const;
    std::size_t stride(int ax) const { return strides_[static_cast<size_t>(ax)]; }

    // Largest/smallest dyadic scale j whose frequency annulus
    // {2^{j-1} <= |xi|_a <= 2^{j+1}} is representable on this grid: the top
    // scale's annulus must fit inside the Nyquist region, the bottom scale's
    // must contain at least one nonzero grid frequency.
    std::pair<int, int> dyadic_range() const { return {j_min_, j_max_}; }

    bool same_layout(const Grid& o) const {
        return dims_ == o.dims_ && box_ == o.box_ && aniso_ == o.aniso_ && offset_ == o.offset_;
    }

private:
    std::vector<int> dims_;
    Box box_;
    Anisotropy aniso_{std::vector<double>{1.0}};
    double offset_ = 0.0;
    std::vector<double> spacing_;
    std::vector<std::size_t> strides_;
    std::size_t total_ = 0;
    double cell_volume_ = 0.0;
    int j_min_ = 0, j_max_ = -1;
};

}  // namespace plp
