#include "plp/anisotropy.hpp"

#include <algorithm>
#include <cmath>

#include "plp/errors.hpp"

namespace plp {

Anisotropy::Anisotropy(std::vector<double> weights) : weights_(std::move(weights)) {
    if (weights_.empty()) throw ConfigError("anisotropy needs at least one axis");
    for (double w : weights_) {
        if (!(w > 0.0)) throw ConfigError("anisotropy weights must be strictly positive");
        homdim_ += w;
    }
    isotropic_ = std::all_of(weights_.begin(), weights_.end(), [](double w) { return w == 1.0; });
    parabolic_ = weights_.size() >= 2 && weights_.back() == 2.0 &&
                 std::all_of(weights_.begin(), weights_.end() - 1, [](double w) { return w == 1.0; });
}

Anisotropy Anisotropy::parabolic(int spatial_dims) {
    if (spatial_dims < 1) throw ConfigError("parabolic anisotropy needs n >= 1");
    std::vector<double> w(static_cast<size_t>(spatial_dims) + 1, 1.0);
    w.back() = 2.0;
    return Anisotropy(std::move(w));
}

Anisotropy Anisotropy::isotropic(int axes) {
    if (axes < 1) throw ConfigError("isotropic anisotropy needs >= 1 axis");
    return Anisotropy(std::vector<double>(static_cast<size_t>(axes), 1.0));
}

Point dilate(std::span<const double> z, const Anisotropy& a, double mu) {
    if (static_cast<int>(z.size()) != a.axes())
        throw StructuralError("dilate: point/anisotropy length mismatch");
    Point out(z.size());
    for (size_t i = 0; i < z.size(); ++i) out[i] = std::pow(mu, a.weight(static_cast<int>(i))) * z[i];
    return out;
}

double aniso_distance(std::span<const double> z, const Anisotropy& a) {
    if (static_cast<int>(z.size()) != a.axes())
        throw StructuralError("aniso_distance: point/anisotropy length mismatch");

    if (a.is_isotropic()) {
        double s = 0.0;
        for (double zi : z) s += zi * zi;
        return std::sqrt(s);
    }
    if (a.is_parabolic()) {
        double r2 = 0.0;
        for (size_t i = 0; i + 1 < z.size(); ++i) r2 += z[i] * z[i];
        const double t = z.back();
        if (r2 == 0.0 && t == 0.0) return 0.0;
        const double mu2 = 0.5 * (r2 + std::sqrt(r2 * r2 + 4.0 * t * t));
        return std::sqrt(mu2);
    }

    // General diagonal anisotropy: G(mu) = sum z_i^2 mu^{-2 a_i} is strictly
    // decreasing; bracket the root of G = 1 and bisect.
    double lo = 0.0;
    double amin = a.weight(0);
    for (int i = 0; i < a.axes(); ++i) {
        amin = std::min(amin, a.weight(i));
        if (z[static_cast<size_t>(i)] != 0.0)
            lo = std::max(lo, std::pow(std::abs(z[static_cast<size_t>(i)]), 1.0 / a.weight(i)));
    }
    if (lo == 0.0) return 0.0;
    double hi = lo * std::pow(static_cast<double>(a.axes()), 0.5 / amin);

    auto g = [&](double mu) {
        double s = 0.0;
        for (int i = 0; i < a.axes(); ++i)
            s += z[static_cast<size_t>(i)] * z[static_cast<size_t>(i)] * std::pow(mu, -2.0 * a.weight(i));
        return s;
    };
    // lo already satisfies G(lo) >= 1; widen hi until G(hi) <= 1.
    while (g(hi) > 1.0) hi *= 2.0;
    for (int it = 0; it < 200 && (hi - lo) > 1e-12 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) >= 1.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace plp
