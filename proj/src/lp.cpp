#include "plp/lp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "plp/errors.hpp"

namespace plp {

namespace {

double bump(double u) { return u > 0.0 ? std::exp(-1.0 / u) : 0.0; }

}  // namespace

CutoffProfile::CutoffProfile(int smoothness_order) : order_(smoothness_order) {
    if (smoothness_order < 1) throw ConfigError("cutoff: smoothness order must be >= 1");
}

double CutoffProfile::operator()(double r) const {
    if (r <= 1.0) return 1.0;
    if (r >= 2.0) return 0.0;
    const double a = bump(2.0 - r), b = bump(r - 1.0);
    return a / (a + b);
}

CutoffProfile build_cutoff(int smoothness_order) { return CutoffProfile(smoothness_order); }

DyadicSymbolBank::DyadicSymbolBank(const Grid& grid, const CutoffProfile& profile, BankMode mode)
    : grid_(grid), profile_(profile), mode_(mode) {
    auto [jlo, jhi] = grid.dyadic_range();
    if (mode == BankMode::Inhomogeneous) jlo = 0;
    if (jlo > jhi) throw ConfigError("symbol bank: grid resolves no dyadic scales");
    j_min_ = jlo;
    j_max_ = jhi;

    rho_.resize(grid.total());
    for (std::size_t i = 0; i < rho_.size(); ++i) rho_[i] = grid.freq_aniso_norm(i);

    psi_.assign(static_cast<size_t>(count()), std::vector<double>(grid.total()));
    for (int j = j_min_; j <= j_max_; ++j) {
        auto& m = psi_[static_cast<size_t>(j - j_min_)];
        const double s0 = std::pow(2.0, -j), s1 = 2.0 * s0;
        if (mode == BankMode::Inhomogeneous && j == 0) {
            for (std::size_t i = 0; i < m.size(); ++i) m[i] = profile(rho_[i]);
        } else {
            for (std::size_t i = 0; i < m.size(); ++i) m[i] = profile(s0 * rho_[i]) - profile(s1 * rho_[i]);
        }
    }
}

const std::vector<double>& DyadicSymbolBank::multiplier(int j) const {
    if (j < j_min_ || j > j_max_) throw ConfigError("symbol bank: scale out of range");
    return psi_[static_cast<size_t>(j - j_min_)];
}

double DyadicSymbolBank::partition_residual() const {
    const double lo = mode_ == BankMode::Homogeneous ? std::pow(2.0, j_min_ + 1) : -1.0;
    const double hi = std::pow(2.0, j_max_ - 1);
    double worst = 0.0;
    for (std::size_t i = 0; i < rho_.size(); ++i) {
        if (rho_[i] > hi) continue;
        if (mode_ == BankMode::Homogeneous && (rho_[i] == 0.0 || rho_[i] < lo)) continue;
        double s = 0.0;
        for (const auto& m : psi_) s += m[i];
        worst = std::max(worst, std::abs(s - 1.0));
    }
    return worst;
}

DyadicSymbolBank build_symbol_bank(const Grid& grid, const CutoffProfile& profile, BankMode mode) {
    return DyadicSymbolBank(grid, profile, mode);
}

LPDecomposition lp_decompose(const Field& f, const DyadicSymbolBank& bank) {
    if (!f.grid().same_layout(bank.grid())) throw StructuralError("lp_decompose: field not on the bank's grid");
    const Grid& g = f.grid();
    const auto& spec = f.spectrum();
    const std::size_t n = g.total();

    LPDecomposition dec;
    dec.bank = &bank;
    dec.j_min = bank.j_min();
    dec.j_max = bank.j_max();

    std::vector<double> covered(n, 0.0);
    std::vector<Complex> buf(n);
    for (int j = bank.j_min(); j <= bank.j_max(); ++j) {
        const auto& m = bank.multiplier(j);
        for (std::size_t i = 0; i < n; ++i) {
            buf[i] = m[i] * spec[i];
            covered[i] += m[i];
        }
        dec.blocks.push_back(Field::from_spectrum(g, buf));
    }

    // Whatever the truncated scale range misses, reported rather than dropped.
    const bool homogeneous = bank.mode() == BankMode::Homogeneous;
    dec.dc = homogeneous ? spec[0].real() / static_cast<double>(n) : 0.0;
    for (std::size_t i = 0; i < n; ++i) buf[i] = (1.0 - covered[i]) * spec[i];
    if (homogeneous) buf[0] = Complex(0.0, 0.0);
    dec.residual = Field::from_spectrum(g, buf);
    double e = 0.0;
    for (double v : dec.residual.values()) e += v * v;
    dec.residual_l2 = std::sqrt(e * g.cell_volume());
    return dec;
}

namespace {

// Kernel symbol on a grid: psi_j(xi) times (i xi_axis) 2^{-j a_axis} when a
// derivative factor is requested, with the phase that recenters samples on
// the box origin.
std::vector<Complex> kernel_spectrum(const Grid& g, const CutoffProfile& profile, int j, int axis_deriv) {
    const std::size_t n = g.total();
    std::vector<Complex> spec(n);
    const double s0 = std::pow(2.0, -j), s1 = 2.0 * s0;
    const double descale =
        axis_deriv >= 0 ? std::pow(2.0, -j * g.aniso().weight(axis_deriv)) : 1.0;
    const double amp = static_cast<double>(n) / g.box().volume();

    std::vector<int> idx(static_cast<size_t>(g.axes()), 0);
    for (std::size_t lin = 0; lin < n; ++lin) {
        const double rho = g.freq_aniso_norm(lin);
        double psi = profile(s0 * rho) - profile(s1 * rho);
        Complex v(psi * amp, 0.0);
        double phase = 0.0;
        bool drop = false;
        for (int ax = 0; ax < g.axes(); ++ax) {
            const int i = idx[static_cast<size_t>(ax)];
            const double xi = g.freq(ax, i);
            phase += xi * g.box().lo[static_cast<size_t>(ax)];
            if (axis_deriv == ax) {
                if (g.is_nyquist(ax, i)) drop = true;
                v *= Complex(0.0, xi * descale);
            }
        }
        spec[lin] = drop ? Complex(0.0, 0.0) : v * std::polar(1.0, phase);
        for (int ax = g.axes() - 1; ax >= 0; --ax) {
            if (++idx[static_cast<size_t>(ax)] < g.dim(ax)) break;
            idx[static_cast<size_t>(ax)] = 0;
        }
    }
    return spec;
}

}  // namespace

Field materialize_kernel(const Anisotropy& a, const CutoffProfile& profile, int j, int axis_derivative,
                         int dims_per_axis, double half_width, bool scale_box_with_j) {
    std::vector<double> lo(static_cast<size_t>(a.axes())), hi(lo.size());
    for (int ax = 0; ax < a.axes(); ++ax) {
        const double w = scale_box_with_j ? half_width * std::pow(2.0, -j * a.weight(ax)) : half_width;
        lo[static_cast<size_t>(ax)] = -w;
        hi[static_cast<size_t>(ax)] = w;
    }
    Grid g(std::vector<int>(static_cast<size_t>(a.axes()), dims_per_axis), Box(lo, hi), a);
    return Field::from_spectrum(g, kernel_spectrum(g, profile, j, axis_derivative));
}

DerivativeKernelBank derivative_kernel_bank(const DyadicSymbolBank& bank, int axis) {
    if (bank.mode() != BankMode::Homogeneous)
        throw ConfigError("derivative kernels: homogeneous bank required");
    const Grid& g = bank.grid();
    if (axis < 0 || axis >= g.axes()) throw StructuralError("derivative kernels: axis out of range");

    DerivativeKernelBank out;
    out.axis = axis;
    out.j_min = bank.j_min();
    out.j_max = bank.j_max();

    const std::size_t spec_size = g.total();
    std::vector<Complex> buf(spec_size);
    std::vector<int> idx(static_cast<size_t>(g.axes()), 0);
    for (int j = bank.j_min(); j <= bank.j_max(); ++j) {
        const double w = g.aniso().weight(axis);
        const double scale = std::pow(2.0, j * w);
        const auto& m = bank.multiplier(j);
        std::fill(idx.begin(), idx.end(), 0);
        for (std::size_t lin = 0; lin < spec_size; ++lin) {
            const int i = idx[static_cast<size_t>(axis)];
            const double xi = g.freq(axis, i);
            buf[lin] = g.is_nyquist(axis, i) ? Complex(0.0, 0.0) : Complex(0.0, xi / scale) * m[lin];
            for (int ax = g.axes() - 1; ax >= 0; --ax) {
                if (++idx[static_cast<size_t>(ax)] < g.dim(ax)) break;
                idx[static_cast<size_t>(ax)] = 0;
            }
        }
        out.kernels.push_back(Field::from_spectrum(g, buf));
        out.scale_factors.push_back(scale);
    }

    // Self-similarity check by resampling: Phi_1 represented on the
    // correspondingly dilated grid must reproduce 2^{|a|} Phi sample by
    // sample.  (Comparing on one fixed torus instead would mix two different
    // periodization lattices; that residual is tracked by the majorant
    // diagnostics, not asserted here.)
    if (g.axes() <= 3) {
        const int M = g.axes() <= 2 ? 256 : 48;
        const double W = 16.0;
        const Field base = materialize_kernel(g.aniso(), bank.profile(), 0, axis, M, W);
        const Field dil = materialize_kernel(g.aniso(), bank.profile(), 1, axis, M, W, true);
        const double factor = std::pow(2.0, g.aniso().homogeneous_dimension());
        double err = 0.0, scale_ref = 0.0;
        for (double v : dil.values()) scale_ref = std::max(scale_ref, std::abs(v));
        for (std::size_t i = 0; i < base.grid().total(); ++i)
            err = std::max(err, std::abs(dil.value(i) - factor * base.value(i)));
        out.self_similarity_error = scale_ref > 0.0 ? err / scale_ref : err;
    }
    return out;
}

RadialMajorant radial_majorant(const Field& kernel, int table_size) {
    const Grid& g = kernel.grid();
    const std::size_t n = g.total();

    // (|z|, |K(z)|) pairs with coordinates taken relative to the box center.
    std::vector<std::pair<double, double>> pts(n);
    std::vector<int> idx(static_cast<size_t>(g.axes()), 0);
    const Point c = g.box().center();
    for (std::size_t lin = 0; lin < n; ++lin) {
        double r2 = 0.0;
        for (int ax = 0; ax < g.axes(); ++ax) {
            const double dz = g.coord(ax, idx[static_cast<size_t>(ax)]) - c[static_cast<size_t>(ax)];
            r2 += dz * dz;
        }
        pts[lin] = {std::sqrt(r2), std::abs(kernel.value(lin))};
        for (int ax = g.axes() - 1; ax >= 0; --ax) {
            if (++idx[static_cast<size_t>(ax)] < g.dim(ax)) break;
            idx[static_cast<size_t>(ax)] = 0;
        }
    }
    std::sort(pts.begin(), pts.end());
    std::vector<double> suffix(n);
    double run = 0.0;
    for (std::size_t i = n; i-- > 0;) {
        run = std::max(run, pts[i].second);
        suffix[i] = run;
    }

    RadialMajorant out;
    out.h0 = suffix[0];
    const double r_max = pts.back().first;
    const double r_lo = std::max(pts[1].first, r_max / 4096.0);

    auto h_at = [&](double r) {
        const auto it = std::lower_bound(pts.begin(), pts.end(), std::make_pair(r, -1.0));
        if (it == pts.end()) return 0.0;
        return suffix[static_cast<std::size_t>(it - pts.begin())];
    };

    out.r.push_back(0.0);
    out.h.push_back(out.h0);
    for (int k = 0; k < table_size; ++k) {
        const double r = r_lo * std::pow(r_max / r_lo, static_cast<double>(k) / (table_size - 1));
        out.r.push_back(r);
        out.h.push_back(h_at(r));
    }

    const int spatial = g.axes() - 1;
    for (std::size_t k = 0; k + 1 < out.r.size(); ++k) {
        const double a = std::pow(out.r[k], spatial) * out.h[k];
        const double b = std::pow(out.r[k + 1], spatial) * out.h[k + 1];
        out.integral_rn_h += 0.5 * (a + b) * (out.r[k + 1] - out.r[k]);
    }

    const double homdim = g.aniso().homogeneous_dimension();
    double sxx = 0.0, sxy = 0.0, sx = 0.0, sy = 0.0;
    int cnt = 0;
    for (std::size_t k = 0; k < out.r.size(); ++k) {
        if (out.r[k] < 1.0 || out.h[k] <= 0.0) continue;
        out.sup_tail_weighted = std::max(out.sup_tail_weighted, out.h[k] * std::pow(out.r[k], homdim));
        const double lx = std::log(out.r[k]), ly = std::log(out.h[k]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++cnt;
    }
    if (cnt >= 2) out.fitted_tail_exponent = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
    return out;
}

double RadialMajorant::eval(double radius) const {
    if (radius <= 0.0) return h0;
    // Table is nonincreasing in r; take the entry at the first r >= radius.
    const auto it = std::lower_bound(r.begin(), r.end(), radius);
    if (it == r.end()) return 0.0;
    return h[static_cast<std::size_t>(it - r.begin())];
}

}  // namespace plp
