#include "plp/extension.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>
#include <cstdio>

#include "plp/errors.hpp"

namespace plp {

ExtensionCoefficients extension_coefficients(int K) {
    if (K < 1 || K > 12) throw ConfigError("extension_coefficients: K must lie in [1, 12]");
    ExtensionCoefficients out;
    out.order = K;
    out.lambdas.resize(static_cast<size_t>(K));
    for (int j = 0; j < K; ++j) out.lambdas[static_cast<size_t>(j)] = std::pow(2.0, -j);

    Eigen::MatrixXd M(K, K);
    for (int k = 0; k < K; ++k)
        for (int j = 0; j < K; ++j) M(k, j) = std::pow(-out.lambdas[static_cast<size_t>(j)], k);
    const Eigen::VectorXd rhs = Eigen::VectorXd::Ones(K);
    const auto lu = M.fullPivLu();
    Eigen::VectorXd c = lu.solve(rhs);

    // The nodes cluster near zero, so refine against a long-double residual
    // until the moment defect stops improving.
    auto residual_of = [&](const Eigen::VectorXd& cc, Eigen::VectorXd* r) {
        double worst = 0.0;
        for (int k = 0; k < K; ++k) {
            long double lhs = 0.0L;
            for (int j = 0; j < K; ++j)
                lhs += static_cast<long double>(cc(j)) *
                       powl(static_cast<long double>(-out.lambdas[static_cast<size_t>(j)]), k);
            const long double defect = 1.0L - lhs;
            if (r) (*r)(k) = static_cast<double>(defect);
            worst = std::max(worst, std::abs(static_cast<double>(defect)));
        }
        return worst;
    };
    Eigen::VectorXd r(K);
    double best = residual_of(c, &r);
    for (int it = 0; it < 8 && best > 1e-14; ++it) {
        const Eigen::VectorXd corrected = c + lu.solve(r);
        Eigen::VectorXd r2(K);
        const double res2 = residual_of(corrected, &r2);
        if (res2 >= best) break;
        c = corrected;
        r = r2;
        best = res2;
    }
    out.residual = best;

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
    const auto& sv = svd.singularValues();
    out.condition_estimate = sv(0) / sv(sv.size() - 1);
    if (out.condition_estimate > 1e12)
        std::fprintf(stderr, "plp: warning: extension system at K=%d has condition estimate %.2e\n", K,
                     out.condition_estimate);

    out.cs.resize(static_cast<size_t>(K));
    for (int j = 0; j < K; ++j) out.cs[static_cast<size_t>(j)] = c(j);
    return out;
}

namespace {

// Lagrange weights of the degree-(npts-1) interpolant at `x`, nodes being
// consecutive grid coordinates starting at node_start.
std::vector<double> lagrange_weights(double x, double node_start, double h, int npts) {
    std::vector<double> w(static_cast<size_t>(npts), 1.0);
    for (int p = 0; p < npts; ++p) {
        const double xp = node_start + p * h;
        for (int r = 0; r < npts; ++r) {
            if (r == p) continue;
            const double xr = node_start + r * h;
            w[static_cast<size_t>(p)] *= (x - xr) / (xp - xr);
        }
    }
    return w;
}

// One sparse row of the per-axis extension operator: new sample at
// position `x` outside (lo,hi) as a combination of old in-domain samples.
struct Row {
    int start = 0;
    std::vector<double> weights;
};

Row reflection_row(double x, double lo, double hi, int n_old, double h, double off,
                   const ExtensionCoefficients& coef, int degree) {
    const int npts = std::min(degree + 1, n_old);
    Row row;
    row.start = 0;
    row.weights.assign(static_cast<size_t>(n_old), 0.0);
    for (size_t j = 0; j < coef.cs.size(); ++j) {
        const double lam = coef.lambdas[j];
        const double src = x < lo ? lo + lam * (lo - x) : hi - lam * (x - hi);
        // Window of npts nodes around src, clamped inside the domain.
        int w0 = static_cast<int>(std::floor((src - lo) / h - off)) - (npts - 1) / 2;
        w0 = std::clamp(w0, 0, n_old - npts);
        const auto lw = lagrange_weights(src, lo + (w0 + off) * h, h, npts);
        for (int p = 0; p < npts; ++p) row.weights[static_cast<size_t>(w0 + p)] += coef.cs[j] * lw[static_cast<size_t>(p)];
    }
    // Trim to the occupied span.
    int first = 0, last = n_old - 1;
    while (first < last && row.weights[static_cast<size_t>(first)] == 0.0) ++first;
    while (last > first && row.weights[static_cast<size_t>(last)] == 0.0) --last;
    row.start = first;
    row.weights = std::vector<double>(row.weights.begin() + first, row.weights.begin() + last + 1);
    return row;
}

Field extend_axis(const Field& f, int axis, const ExtensionCoefficients& coef, int degree) {
    const Grid& g = f.grid();
    const int d = g.axes();
    const int n_old = g.dim(axis);
    const double h = g.spacing(axis);
    const double off = g.sample_offset();
    const double lo = g.box().lo[static_cast<size_t>(axis)];
    const double hi = g.box().hi[static_cast<size_t>(axis)];
    const double span = hi - lo;

    std::vector<int> dims = g.dims();
    dims[static_cast<size_t>(axis)] = 3 * n_old;
    Box box = g.box();
    box.lo[static_cast<size_t>(axis)] = lo - span;
    box.hi[static_cast<size_t>(axis)] = hi + span;
    Grid big(dims, box, g.aniso(), off);

    // Precompute rows per new along-axis index.
    std::vector<Row> rows(static_cast<size_t>(3 * n_old));
    for (int i = 0; i < 3 * n_old; ++i) {
        const double x = big.coord(axis, i);
        if (x > lo && x < hi) continue;  // interior copy
        rows[static_cast<size_t>(i)] = reflection_row(x, lo, hi, n_old, h, off, coef, degree);
    }

    std::vector<double> out(big.total());
    const std::size_t stride_old = g.stride(axis);
    const std::size_t stride_new = big.stride(axis);
    const std::size_t nslices = g.total() / static_cast<std::size_t>(n_old);
    for (std::size_t sl = 0; sl < nslices; ++sl) {
        std::size_t base_old = 0, base_new = 0, rem = sl;
        for (int ax = d - 1; ax >= 0; --ax) {
            if (ax == axis) continue;
            const std::size_t nn = static_cast<std::size_t>(g.dim(ax));
            const std::size_t k = rem % nn;
            base_old += k * g.stride(ax);
            base_new += k * big.stride(ax);
            rem /= nn;
        }
        for (int i = 0; i < 3 * n_old; ++i) {
            const double x = big.coord(axis, i);
            double v;
            if (x > lo && x < hi) {
                v = f.value(base_old + static_cast<std::size_t>(i - n_old) * stride_old);
            } else {
                const Row& row = rows[static_cast<size_t>(i)];
                v = 0.0;
                for (size_t p = 0; p < row.weights.size(); ++p)
                    v += row.weights[p] *
                         f.value(base_old + static_cast<std::size_t>(row.start + static_cast<int>(p)) * stride_old);
            }
            out[base_new + static_cast<std::size_t>(i) * stride_new] = v;
        }
    }
    return Field(big, std::move(out));
}

}  // namespace

Field extend_one_axis(const Field& f, int axis, const ExtensionCoefficients& coef, int degree) {
    if (f.grid().sample_offset() != 0.5)
        throw StructuralError("extend: field must be sampled cell-centered over its box");
    if (axis < 0 || axis >= f.grid().axes()) throw StructuralError("extend: axis out of range");
    return extend_axis(f, axis, coef, degree);
}

ExtensionResult extend_to_box(const Field& f, int m) {
    if (m < 1) throw ConfigError("extend_to_box: m must be >= 1");
    if (f.grid().sample_offset() != 0.5)
        throw StructuralError("extend_to_box: field must be sampled cell-centered over its box");
    const int d = f.grid().axes();
    const int degree = 2 * m + 1;

    ExtensionResult res{f, {}};
    for (int ax = 0; ax < d; ++ax) {
        const int K = ax == d - 1 ? m : 2 * m;
        res.per_axis.push_back(extension_coefficients(K));
        res.extended = extend_axis(res.extended, ax, res.per_axis.back(), degree);
    }
    return res;
}

namespace {

double ramp(double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / u), b = std::exp(-1.0 / (1.0 - u));
    return a / (a + b);
}

}  // namespace

std::pair<Box, Box> plateau_boxes(const Box& omega) {
    std::vector<double> l1(omega.lo), h1(omega.hi), l2(omega.lo), h2(omega.hi);
    for (int ax = 0; ax < omega.axes(); ++ax) {
        const double S = omega.length(ax);
        l1[static_cast<size_t>(ax)] -= 0.25 * S;
        h1[static_cast<size_t>(ax)] += 0.25 * S;
        l2[static_cast<size_t>(ax)] -= 0.75 * S;
        h2[static_cast<size_t>(ax)] += 0.75 * S;
    }
    return {Box(l1, h1), Box(l2, h2)};
}

Field build_plateau_cutoff(const Box& z1, const Box& z2, const Grid& grid) {
    if (z1.axes() != grid.axes() || z2.axes() != grid.axes())
        throw StructuralError("plateau cutoff: axis count mismatch");
    for (int ax = 0; ax < grid.axes(); ++ax)
        if (!(z2.lo[static_cast<size_t>(ax)] < z1.lo[static_cast<size_t>(ax)] &&
              z1.hi[static_cast<size_t>(ax)] < z2.hi[static_cast<size_t>(ax)]))
            throw ConfigError("plateau cutoff: z1 must lie strictly inside z2");

    // Per-axis 1-D profiles, then the tensor product.
    std::vector<std::vector<double>> prof(static_cast<size_t>(grid.axes()));
    for (int ax = 0; ax < grid.axes(); ++ax) {
        auto& p = prof[static_cast<size_t>(ax)];
        p.resize(static_cast<size_t>(grid.dim(ax)));
        const double l2 = z2.lo[static_cast<size_t>(ax)], l1 = z1.lo[static_cast<size_t>(ax)];
        const double h1 = z1.hi[static_cast<size_t>(ax)], h2 = z2.hi[static_cast<size_t>(ax)];
        for (int i = 0; i < grid.dim(ax); ++i) {
            const double x = grid.coord(ax, i);
            p[static_cast<size_t>(i)] = ramp((x - l2) / (l1 - l2)) * ramp((h2 - x) / (h2 - h1));
        }
    }
    std::vector<double> out(grid.total());
    std::vector<int> idx(static_cast<size_t>(grid.axes()), 0);
    for (std::size_t lin = 0; lin < grid.total(); ++lin) {
        double v = 1.0;
        for (int ax = 0; ax < grid.axes(); ++ax) v *= prof[static_cast<size_t>(ax)][static_cast<size_t>(idx[static_cast<size_t>(ax)])];
        out[lin] = v;
        for (int ax = grid.axes() - 1; ax >= 0; --ax) {
            if (++idx[static_cast<size_t>(ax)] < grid.dim(ax)) break;
            idx[static_cast<size_t>(ax)] = 0;
        }
    }
    return Field(grid, std::move(out));
}

Grid embedding_grid(const Grid& src, const Box& support, double pad_fraction) {
    std::vector<int> dims(static_cast<size_t>(src.axes()));
    std::vector<double> lo(dims.size()), hi(dims.size());
    for (int ax = 0; ax < src.axes(); ++ax) {
        const double h = src.spacing(ax);
        const double pad = pad_fraction * support.length(ax);
        const double want_lo = std::min(support.lo[static_cast<size_t>(ax)] - pad, src.box().lo[static_cast<size_t>(ax)]);
        const double want_hi = std::max(support.hi[static_cast<size_t>(ax)] + pad, src.box().hi[static_cast<size_t>(ax)]);
        const long n_lo = static_cast<long>(std::ceil((src.box().lo[static_cast<size_t>(ax)] - want_lo) / h - 1e-9));
        long n_hi = static_cast<long>(std::ceil((want_hi - src.box().hi[static_cast<size_t>(ax)]) / h - 1e-9));
        long n = src.dim(ax) + n_lo + n_hi;
        if (n % 2 != 0) {
            ++n_hi;
            ++n;
        }
        dims[static_cast<size_t>(ax)] = static_cast<int>(n);
        lo[static_cast<size_t>(ax)] = src.box().lo[static_cast<size_t>(ax)] - static_cast<double>(n_lo) * h;
        hi[static_cast<size_t>(ax)] = src.box().hi[static_cast<size_t>(ax)] + static_cast<double>(n_hi) * h;
    }
    return Grid(dims, Box(lo, hi), src.aniso(), src.sample_offset());
}

Field embed_field(const Field& src, const Grid& big) {
    const Grid& g = src.grid();
    if (big.axes() != g.axes()) throw StructuralError("embed_field: axis count mismatch");
    std::vector<long> shift(static_cast<size_t>(g.axes()));
    for (int ax = 0; ax < g.axes(); ++ax) {
        const double h = g.spacing(ax);
        if (std::abs(big.spacing(ax) - h) > 1e-12 * h)
            throw StructuralError("embed_field: grids have different spacing");
        const double s = (g.box().lo[static_cast<size_t>(ax)] - big.box().lo[static_cast<size_t>(ax)]) / h;
        shift[static_cast<size_t>(ax)] = std::lround(s);
        if (std::abs(s - static_cast<double>(shift[static_cast<size_t>(ax)])) > 1e-9)
            throw StructuralError("embed_field: sample lattices are not aligned");
        if (shift[static_cast<size_t>(ax)] < 0 ||
            shift[static_cast<size_t>(ax)] + g.dim(ax) > big.dim(ax))
            throw StructuralError("embed_field: target grid does not cover the source box");
    }
    std::vector<double> out(big.total(), 0.0);
    std::vector<int> idx(static_cast<size_t>(g.axes()), 0);
    for (std::size_t lin = 0; lin < g.total(); ++lin) {
        std::size_t blin = 0;
        for (int ax = 0; ax < g.axes(); ++ax)
            blin += static_cast<std::size_t>(idx[static_cast<size_t>(ax)] + shift[static_cast<size_t>(ax)]) *
                    big.stride(ax);
        out[blin] = src.value(lin);
        for (int ax = g.axes() - 1; ax >= 0; --ax) {
            if (++idx[static_cast<size_t>(ax)] < g.dim(ax)) break;
            idx[static_cast<size_t>(ax)] = 0;
        }
    }
    return Field(big, std::move(out));
}

LocalizeResult localize(const Field& f, const Field& psi, int axis) {
    if (!f.grid().same_layout(psi.grid())) throw StructuralError("localize: fields on different grids");
    LocalizeResult res{field_product(f, psi), Field(), axis, 0.0, 0.0};

    // Remove per-slice means so a periodic antiderivative exists; the removed
    // amount is part of the record.
    const Grid& g = f.grid();
    const int d = g.axes();
    const int nax = g.dim(axis);
    const std::size_t stride = g.stride(axis);
    const std::size_t nslices = g.total() / static_cast<std::size_t>(nax);
    std::vector<double> corrected = res.product.values();
    for (std::size_t sl = 0; sl < nslices; ++sl) {
        std::size_t base = 0, rem = sl;
        for (int ax = d - 1; ax >= 0; --ax) {
            if (ax == axis) continue;
            const std::size_t nn = static_cast<std::size_t>(g.dim(ax));
            base += (rem % nn) * g.stride(ax);
            rem /= nn;
        }
        double mean = 0.0;
        for (int i = 0; i < nax; ++i) mean += corrected[base + static_cast<std::size_t>(i) * stride];
        mean /= nax;
        res.slice_mean_correction = std::max(res.slice_mean_correction, std::abs(mean));
        for (int i = 0; i < nax; ++i) corrected[base + static_cast<std::size_t>(i) * stride] -= mean;
    }
    res.companion = antiderivative(Field(g, std::move(corrected)), axis);
    for (double v : res.companion.values()) res.companion_linf = std::max(res.companion_linf, std::abs(v));
    return res;
}

}  // namespace plp
