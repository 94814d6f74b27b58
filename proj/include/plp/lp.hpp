#pragma once

#include <map>
#include <vector>

#include "plp/field.hpp"

namespace plp {

// Scalar transition chi: [0,inf) -> [0,1] with chi = 1 on [0,1], 0 on
// [2,inf), realized as the bump quotient B(2-r)/(B(2-r)+B(r-1)) with
// B(u) = exp(-1/u) for u > 0.  theta(z) = chi(|z|_a).
class CutoffProfile {
public:
    explicit CutoffProfile(int smoothness_order = 2);
    double operator()(double r) const;
    int smoothness_order() const { return order_; }

private:
    int order_;
};

CutoffProfile build_cutoff(int smoothness_order);

enum class BankMode { Homogeneous, Inhomogeneous };

// The dyadic multipliers psi_j sampled on a grid's frequencies.
// psi_j(xi) = chi(2^{-j}|xi|_a) - chi(2^{1-j}|xi|_a); the inhomogeneous mode
// replaces the bottom member by theta and starts at j = 0.
class DyadicSymbolBank {
public:
    DyadicSymbolBank(const Grid& grid, const CutoffProfile& profile, BankMode mode);

    const Grid& grid() const { return grid_; }
    const CutoffProfile& profile() const { return profile_; }
    BankMode mode() const { return mode_; }
    int j_min() const { return j_min_; }
    int j_max() const { return j_max_; }
    int count() const { return j_max_ - j_min_ + 1; }

    const std::vector<double>& multiplier(int j) const;
    // |xi|_a per linear spectral index (shared by all members).
    const std::vector<double>& freq_norms() const { return rho_; }

    // max |sum_j psi_j - 1| over nonzero frequencies in the interior annulus
    // 2^{j_min+1} <= |xi|_a <= 2^{j_max-1} (inhomogeneous: all |xi|_a <=
    // 2^{j_max-1} including 0).
    double partition_residual() const;

private:
    Grid grid_;
    CutoffProfile profile_;
    BankMode mode_;
    int j_min_, j_max_;
    std::vector<double> rho_;
    std::vector<std::vector<double>> psi_;
};

DyadicSymbolBank build_symbol_bank(const Grid& grid, const CutoffProfile& profile, BankMode mode);

// Blocks phi_j * f realized as psi_j * fhat, plus the DC mode and the energy
// the truncated scale range cannot represent.
struct LPDecomposition {
    const DyadicSymbolBank* bank = nullptr;
    int j_min = 0, j_max = -1;
    std::vector<Field> blocks;    // index j - j_min
    Field residual;               // f - dc - sum blocks
    double dc = 0.0;              // spectral mean (homogeneous mode only)
    double residual_l2 = 0.0;

    const Field& block(int j) const { return blocks[static_cast<size_t>(j - j_min)]; }
    bool has_block(int j) const { return j >= j_min && j <= j_max; }
};

LPDecomposition lp_decompose(const Field& f, const DyadicSymbolBank& bank);

// The kernels Phi_j with d_axis phi_j = 2^{j a_axis} Phi_j, realized as
// (i xi_axis) psi_j(xi) 2^{-j a_axis}.  Scaling relation
// Phi_j(z) = 2^{|a| j} Phi(2^{j a} z) is verified on the exactly resampled
// index subset; the worst deviation is recorded.
struct DerivativeKernelBank {
    int axis = 0;
    int j_min = 0, j_max = -1;
    std::vector<Field> kernels;          // Phi_j, physical space
    std::vector<double> scale_factors;   // 2^{j a_axis}
    double self_similarity_error = 0.0;

    const Field& kernel(int j) const { return kernels[static_cast<size_t>(j - j_min)]; }
    double scale_factor(int j) const { return scale_factors[static_cast<size_t>(j - j_min)]; }
};

DerivativeKernelBank derivative_kernel_bank(const DyadicSymbolBank& bank, int axis);

// Decreasing envelope h(r) = sup_{|z| >= r} |K(z)| of a kernel sampled on a
// centered grid, tabulated on a log radius grid, with the tail diagnostics
// used by the convolution bound.
struct RadialMajorant {
    std::vector<double> r;        // tabulation radii (r[0] = 0)
    std::vector<double> h;        // h(r[k]), nonincreasing
    double h0 = 0.0;              // sup |K|
    double sup_tail_weighted = 0.0;   // sup over r in [1, r_max] of h(r) r^{|a|}
    double integral_rn_h = 0.0;       // trapezoid of r^n h(r) over the table
    double fitted_tail_exponent = 0.0;  // log-log slope of h over r >= 1

    double eval(double radius) const;  // sup of |K| over tabulated points with |z| >= radius
};

RadialMajorant radial_majorant(const Field& kernel, int table_size = 256);

// Materialize the physical-space kernel of one bank member on a padded
// centered grid so tail decay is measurable without periodization bias.
// When `scale_box_with_j` is set the box half-width per axis is
// half_width * 2^{-j a_i}, which keeps the sampling rate fixed relative to
// the kernel's own scale.
Field materialize_kernel(const Anisotropy& a, const CutoffProfile& profile, int j, int axis_derivative,
                         int dims_per_axis = 256, double half_width = 16.0,
                         bool scale_box_with_j = false);

}  // namespace plp
