#pragma once

#include <cstdint>
#include <functional>
#include <span>

#include "plp/field.hpp"
#include "plp/lp.hpp"

namespace plp {

// --- Lebesgue ---------------------------------------------------------------
double norm_lp(const Field& f, double p);  // p in [1, inf]; grid quadrature
double norm_linf(const Field& f);
double norm_lp_on(const Field& f, const Box& sub, double p);
double norm_linf_on(const Field& f, const Box& sub);

// --- parabolic Sobolev ------------------------------------------------------
// sum over 2r + |alpha| <= 2m of the L2 norms of d_t^r d_x^alpha f.
double norm_sobolev_parabolic(const Field& f, int m);
// Finite-difference variant for non-periodic (cell-centered) fields.
double norm_sobolev_parabolic_fd(const Field& f, int m, int accuracy = 4);

// All spatial multi-indices with |alpha| = order, in `vars` variables.
std::vector<std::vector<int>> spatial_multi_indices(int vars, int order);

// Fornberg weights: c[j] with sum_j c[j] u(x[j]) ~ u^(order)(x0).
std::vector<double> fd_weights(double x0, std::span<const double> x, int order);
// One-axis finite-difference derivative with shifted stencils at the edges.
Field fd_axis_derivative(const Field& f, int axis, int order, int accuracy = 4);

// --- BMO --------------------------------------------------------------------
struct BmoDiagnostics {
    int cubes = 0;
    int empty_cubes = 0;
    double best_radius = 0.0;  // |.|_a radius (balls) or 2^scale (lattice)
};

// Mean absolute deviation from the in-cube median (the exact minimizer of the
// empirical L1 objective).  `wrap` applies the periodic minimal image.
double cube_mean_abs_dev(const Field& f, const ParabolicCube& cube, bool wrap,
                         std::size_t* npts = nullptr);

double norm_bmo(const Field& f, std::span<const ParabolicCube> cubes, bool wrap = true,
                BmoDiagnostics* diag = nullptr);
double norm_bmo(const Field& f, const SamplerPolicy& policy, BmoDiagnostics* diag = nullptr);
// Cubes restricted to lie inside `omega`; no periodic wrap.
double norm_bmo_on(const Field& f, const Box& omega, const SamplerPolicy& policy,
                   BmoDiagnostics* diag = nullptr);
// BMO over omega plus the L1 norm over omega.
double norm_bar_bmo(const Field& f, const Box& omega, const SamplerPolicy& policy,
                    BmoDiagnostics* diag = nullptr);

// --- Besov / Lizorkin-Triebel ------------------------------------------------
// (sum_j 2^{sqj} |block_j|_{L^p}^q)^{1/q}; sup over j for q = inf.
double norm_besov(const LPDecomposition& dec, double s, double p, double q);
double norm_besov(const Field& f, const DyadicSymbolBank& bank, double s, double p, double q);

// |(sum_j 2^{sqj}|block_j|^q)^{1/q}|_{L^p}, finite p; pointwise sup for q = inf.
double norm_triebel(const LPDecomposition& dec, double s, double p, double q);
double norm_triebel(const Field& f, const DyadicSymbolBank& bank, double s, double p, double q);

struct LatticeCubePolicy {
    int per_scale = 0;  // 0: every lattice cube the grid resolves
    double min_side_cells = 1.0;
    std::uint64_t seed = 0;
};

// Dilated-cube form of the p = inf Lizorkin-Triebel norm:
// sup_Q ((1/|Q|) int_Q sum_{j >= -scale(Q)} |block_j|^q)^{1/q}.
double norm_triebel_infty_q(const LPDecomposition& dec, double q,
                            const LatticeCubePolicy& policy = {});

// Pointwise l^q over blocks j in [j_lo, j_hi] then sup over the grid.
double pointwise_block_lq_linf(const LPDecomposition& dec, double s, double q, int j_lo, int j_hi);

// High/low frequency truncations: l^q over j >= 1 resp. j <= -1.
double norm_fplus(const LPDecomposition& dec, double s, double q);
double norm_fminus(const LPDecomposition& dec, double s, double q);

// --- homogeneous Sobolev and Hoelder -----------------------------------------
// (sum_xi |xi|^{2s} |fhat|^2)^{1/2} with the Euclidean |xi|.
double norm_homogeneous_hs(const Field& f, double s);

struct HolderDiagnostics {
    std::size_t pairs = 0;
};

// sup |g(z1)-g(z2)| / |z1-z2|^gamma over all nearest-neighbor pairs plus a
// seeded random pair sample (a lower bound of the continuum sup).
double holder_seminorm(const Field& f, double gamma, std::uint64_t seed = 1,
                       std::size_t random_pairs = 4096, HolderDiagnostics* diag = nullptr);

// Vector-valued convention: max over components.
double max_over_components(const VectorField& vf, const std::function<double(const Field&)>& norm);

}  // namespace plp
