#pragma once

#include "plp/field.hpp"
#include "plp/lp.hpp"

namespace plp {

// Reflection coefficients: lambda_j = 2^{-j} and c_j solving
// sum_j c_j (-lambda_j)^k = 1 for k = 0..K-1, which matches derivatives
// through order K-1 across the reflection boundary.
struct ExtensionCoefficients {
    int order = 0;
    std::vector<double> lambdas;
    std::vector<double> cs;
    double residual = 0.0;            // max moment-equation defect
    double condition_estimate = 0.0;  // singular value ratio of the system
};

ExtensionCoefficients extension_coefficients(int K);  // 1 <= K <= 12

struct ExtensionResult {
    Field extended;                              // on the tripled box
    std::vector<ExtensionCoefficients> per_axis;  // spatial axes first, then time
};

// Higher-order reflection of a cell-centered field over its box onto the
// tripled box (each (lo,hi) becomes (lo-S, hi+S)); spatial axes use K = 2m,
// the time axis K = m.  Off-grid reflection sources are evaluated by centered
// polynomial interpolation of degree 2m+1.
ExtensionResult extend_to_box(const Field& f, int m);

// One axis of the reflection, exposed so axis-order independence is testable.
Field extend_one_axis(const Field& f, int axis, const ExtensionCoefficients& coef, int degree);

// Smooth plateau: 1 on z1, 0 outside z2, monotone tensor-product ramps.
Field build_plateau_cutoff(const Box& z1, const Box& z2, const Grid& grid);

// The nested plateau boxes of the bounded-domain pipeline: per axis,
// Z1 = (lo - S/4, hi + S/4) and Z2 = (lo - 3S/4, hi + 3S/4) with S the side.
std::pair<Box, Box> plateau_boxes(const Box& omega);

// A periodic grid aligned with `src`'s sample lattice that covers `support`
// expanded by pad_fraction of its span on every side.
Grid embedding_grid(const Grid& src, const Box& support, double pad_fraction = 0.25);
// Copy src samples onto coinciding points of `big`, zero elsewhere.
Field embed_field(const Field& src, const Grid& big);

struct LocalizeResult {
    Field product;                       // psi * f
    Field companion;                     // antiderivative of the corrected product
    int axis = 0;
    double slice_mean_correction = 0.0;  // largest slice mean removed before integrating
    double companion_linf = 0.0;
};

// Pointwise product psi*f plus its antiderivative along `axis`; the product's
// per-slice means are removed (and reported) so a periodic antiderivative
// exists.
LocalizeResult localize(const Field& f, const Field& psi, int axis = 0);

}  // namespace plp
