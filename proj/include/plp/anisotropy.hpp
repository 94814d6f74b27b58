#pragma once

#include <span>
#include <vector>

namespace plp {

// Weight vector a = (a_1, ..., a_d) of the anisotropic scaling
// mu^a z = (mu^{a_1} z_1, ..., mu^{a_d} z_d).  The last axis is time; the
// parabolic case assigns it weight 2 and all spatial axes weight 1.
class Anisotropy {
public:
    explicit Anisotropy(std::vector<double> weights);

    // (1,...,1,2) in spatial_dims+1 axes.
    static Anisotropy parabolic(int spatial_dims);
    // (1,...,1) in `axes` axes.
    static Anisotropy isotropic(int axes);

    int axes() const { return static_cast<int>(weights_.size()); }
    double weight(int i) const { return weights_[static_cast<size_t>(i)]; }
    const std::vector<double>& weights() const { return weights_; }

    // Sum of the weights; n+2 for the parabolic anisotropy in n+1 axes.
    double homogeneous_dimension() const { return homdim_; }

    bool is_isotropic() const { return isotropic_; }
    bool is_parabolic() const { return parabolic_; }

    bool operator==(const Anisotropy& o) const { return weights_ == o.weights_; }

private:
    std::vector<double> weights_;
    double homdim_ = 0.0;
    bool isotropic_ = false;
    bool parabolic_ = false;
};

using Point = std::vector<double>;

// Componentwise dilation mu^a z.
Point dilate(std::span<const double> z, const Anisotropy& a, double mu);

// The anisotropic distance |z|_a: the unique mu > 0 with
// sum_i z_i^2 / mu^{2 a_i} = 1 (0 for z = 0).  Euclidean norm when a is
// isotropic; closed form mu^2 = (r^2 + sqrt(r^4 + 4 t^2))/2 with r = |x|
// in the parabolic case; bracketed bisection otherwise.
double aniso_distance(std::span<const double> z, const Anisotropy& a);

}  // namespace plp
