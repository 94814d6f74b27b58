#include "plp/norms.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "plp/errors.hpp"

namespace plp {

namespace {

bool is_inf(double p) { return std::isinf(p); }

void check_exponent(double p, const char* who) {
    if (!(p >= 1.0)) throw ConfigError(std::string(who) + ": exponent must be in [1, inf]");
}

}  // namespace

// --- Lebesgue ----------------------------------------------------------------

double norm_linf(const Field& f) {
    double m = 0.0;
    for (double v : f.values()) m = std::max(m, std::abs(v));
    return m;
}

double norm_lp(const Field& f, double p) {
    check_exponent(p, "norm_lp");
    if (is_inf(p)) return norm_linf(f);
    double s = 0.0;
    if (p == 1.0) {
        for (double v : f.values()) s += std::abs(v);
    } else if (p == 2.0) {
        for (double v : f.values()) s += v * v;
    } else {
        for (double v : f.values()) s += std::pow(std::abs(v), p);
    }
    return std::pow(s * f.grid().cell_volume(), 1.0 / p);
}

namespace {

template <typename Body>
void for_each_point_in(const Field& f, const Box& sub, Body&& body) {
    const Grid& g = f.grid();
    const int d = g.axes();
    std::vector<int> lo(static_cast<size_t>(d)), hi(static_cast<size_t>(d));
    for (int ax = 0; ax < d; ++ax) {
        const double h = g.spacing(ax);
        const double off = g.sample_offset();
        // indices with sub.lo <= coord < sub.hi (half-open cell convention)
        int a = static_cast<int>(std::ceil((sub.lo[static_cast<size_t>(ax)] - g.box().lo[static_cast<size_t>(ax)]) / h - off - 1e-12));
        int b = static_cast<int>(std::floor((sub.hi[static_cast<size_t>(ax)] - g.box().lo[static_cast<size_t>(ax)]) / h - off - 1e-12));
        a = std::max(a, 0);
        b = std::min(b, g.dim(ax) - 1);
        if (a > b) return;  // empty intersection
        lo[static_cast<size_t>(ax)] = a;
        hi[static_cast<size_t>(ax)] = b;
    }
    std::vector<int> idx(lo);
    while (true) {
        std::size_t lin = 0;
        for (int ax = 0; ax < d; ++ax) lin += static_cast<std::size_t>(idx[static_cast<size_t>(ax)]) * g.stride(ax);
        body(lin);
        int ax = d - 1;
        for (; ax >= 0; --ax) {
            if (++idx[static_cast<size_t>(ax)] <= hi[static_cast<size_t>(ax)]) break;
            idx[static_cast<size_t>(ax)] = lo[static_cast<size_t>(ax)];
        }
        if (ax < 0) break;
    }
}

}  // namespace

double norm_lp_on(const Field& f, const Box& sub, double p) {
    check_exponent(p, "norm_lp_on");
    if (is_inf(p)) return norm_linf_on(f, sub);
    double s = 0.0;
    for_each_point_in(f, sub, [&](std::size_t lin) { s += std::pow(std::abs(f.value(lin)), p); });
    return std::pow(s * f.grid().cell_volume(), 1.0 / p);
}

double norm_linf_on(const Field& f, const Box& sub) {
    double m = 0.0;
    for_each_point_in(f, sub, [&](std::size_t lin) { m = std::max(m, std::abs(f.value(lin))); });
    return m;
}

// --- parabolic Sobolev ---------------------------------------------------------

std::vector<std::vector<int>> spatial_multi_indices(int vars, int order) {
    std::vector<std::vector<int>> out;
    if (vars == 0) {
        if (order == 0) out.push_back({});
        return out;
    }
    for (int first = order; first >= 0; --first)
        for (auto& rest : spatial_multi_indices(vars - 1, order - first)) {
            std::vector<int> idx;
            idx.push_back(first);
            idx.insert(idx.end(), rest.begin(), rest.end());
            out.push_back(std::move(idx));
        }
    return out;
}

double norm_sobolev_parabolic(const Field& f, int m) {
    if (m < 1) throw ConfigError("sobolev norm: m must be >= 1");
    const Grid& g = f.grid();
    const int d = g.axes(), n = d - 1;
    const auto& spec = f.spectrum();
    const double weight = g.cell_volume() / static_cast<double>(g.total());

    // One accumulator per derivative term; all terms in a single spectral pass.
    struct Term {
        int time;
        std::vector<int> alpha;
        double acc = 0.0;
    };
    std::vector<Term> terms;
    for (int j = 0; j <= 2 * m; ++j)
        for (int r = 0; 2 * r <= j; ++r)
            for (auto& alpha : spatial_multi_indices(n, j - 2 * r)) terms.push_back({r, alpha, 0.0});

    std::vector<int> idx(static_cast<size_t>(d), 0);
    std::vector<double> xi(static_cast<size_t>(d));
    std::vector<bool> nyq(static_cast<size_t>(d));
    for (std::size_t lin = 0; lin < g.total(); ++lin) {
        for (int ax = 0; ax < d; ++ax) {
            xi[static_cast<size_t>(ax)] = g.freq(ax, idx[static_cast<size_t>(ax)]);
            nyq[static_cast<size_t>(ax)] = g.is_nyquist(ax, idx[static_cast<size_t>(ax)]);
        }
        const double e = std::norm(spec[lin]);
        if (e != 0.0) {
            for (Term& t : terms) {
                double mult = 1.0;
                bool dropped = false;
                for (int ax = 0; ax < n && !dropped; ++ax) {
                    const int o = t.alpha[static_cast<size_t>(ax)];
                    if (o == 0) continue;
                    if (nyq[static_cast<size_t>(ax)]) dropped = true;
                    for (int k = 0; k < o; ++k) mult *= xi[static_cast<size_t>(ax)];
                }
                if (t.time > 0) {
                    if (nyq[static_cast<size_t>(d - 1)]) dropped = true;
                    for (int k = 0; k < t.time; ++k) mult *= xi[static_cast<size_t>(d - 1)];
                }
                if (!dropped) t.acc += mult * mult * e;
            }
        }
        for (int ax = d - 1; ax >= 0; --ax) {
            if (++idx[static_cast<size_t>(ax)] < g.dim(ax)) break;
            idx[static_cast<size_t>(ax)] = 0;
        }
    }
    double total = 0.0;
    for (const Term& t : terms) total += std::sqrt(t.acc * weight);
    return total;
}

// --- finite differences ---------------------------------------------------------

std::vector<double> fd_weights(double x0, std::span<const double> x, int order) {
    // Fornberg's recursion for the weights of an arbitrary-node stencil.
    const int nn = static_cast<int>(x.size());
    if (order >= nn) throw ConfigError("fd_weights: need more nodes than the derivative order");
    std::vector<std::vector<double>> c(static_cast<size_t>(nn),
                                       std::vector<double>(static_cast<size_t>(order) + 1, 0.0));
    double c1 = 1.0;
    double c4 = x[0] - x0;
    c[0][0] = 1.0;
    for (int i = 1; i < nn; ++i) {
        const int mn = std::min(i, order);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = x[static_cast<size_t>(i)] - x0;
        for (int j = 0; j < i; ++j) {
            const double c3 = x[static_cast<size_t>(i)] - x[static_cast<size_t>(j)];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k)
                    c[static_cast<size_t>(i)][static_cast<size_t>(k)] =
                        c1 * (k * c[static_cast<size_t>(i - 1)][static_cast<size_t>(k - 1)] -
                              c5 * c[static_cast<size_t>(i - 1)][static_cast<size_t>(k)]) /
                        c2;
                c[static_cast<size_t>(i)][0] = -c1 * c5 * c[static_cast<size_t>(i - 1)][0] / c2;
            }
            for (int k = mn; k >= 1; --k)
                c[static_cast<size_t>(j)][static_cast<size_t>(k)] =
                    (c4 * c[static_cast<size_t>(j)][static_cast<size_t>(k)] -
                     k * c[static_cast<size_t>(j)][static_cast<size_t>(k - 1)]) /
                    c3;
            c[static_cast<size_t>(j)][0] = c4 * c[static_cast<size_t>(j)][0] / c3;
        }
        c1 = c2;
    }
    std::vector<double> w(static_cast<size_t>(nn));
    for (int j = 0; j < nn; ++j) w[static_cast<size_t>(j)] = c[static_cast<size_t>(j)][static_cast<size_t>(order)];
    return w;
}

Field fd_axis_derivative(const Field& f, int axis, int order, int accuracy) {
    const Grid& g = f.grid();
    const int d = g.axes();
    if (axis < 0 || axis >= d) throw StructuralError("fd_axis_derivative: axis out of range");
    if (order == 0) return f;
    const int nax = g.dim(axis);
    const int stencil = std::min(order + accuracy, nax);
    const double h = g.spacing(axis);

    // Per-target stencil windows; geometry shared across all slices.
    std::vector<int> starts(static_cast<size_t>(nax));
    std::vector<std::vector<double>> wts(static_cast<size_t>(nax));
    std::vector<double> nodes(static_cast<size_t>(stencil));
    for (int i = 0; i < nax; ++i) {
        int s = std::clamp(i - stencil / 2, 0, nax - stencil);
        starts[static_cast<size_t>(i)] = s;
        for (int k = 0; k < stencil; ++k) nodes[static_cast<size_t>(k)] = (s + k - i) * h;
        wts[static_cast<size_t>(i)] = fd_weights(0.0, nodes, order);
    }

    std::vector<double> out(g.total());
    const std::size_t stride = g.stride(axis);
    const std::size_t nslices = g.total() / static_cast<std::size_t>(nax);
    for (std::size_t sl = 0; sl < nslices; ++sl) {
        std::size_t base = 0, rem = sl;
        for (int ax = d - 1; ax >= 0; --ax) {
            if (ax == axis) continue;
            const std::size_t nn = static_cast<std::size_t>(g.dim(ax));
            base += (rem % nn) * g.stride(ax);
            rem /= nn;
        }
        for (int i = 0; i < nax; ++i) {
            const auto& w = wts[static_cast<size_t>(i)];
            const std::size_t w0 = base + static_cast<std::size_t>(starts[static_cast<size_t>(i)]) * stride;
            double acc = 0.0;
            for (int k = 0; k < stencil; ++k) acc += w[static_cast<size_t>(k)] * f.value(w0 + static_cast<std::size_t>(k) * stride);
            out[base + static_cast<std::size_t>(i) * stride] = acc;
        }
    }
    return Field(g, std::move(out));
}

double norm_sobolev_parabolic_fd(const Field& f, int m, int accuracy) {
    if (m < 1) throw ConfigError("sobolev norm: m must be >= 1");
    const Grid& g = f.grid();
    const int n = g.axes() - 1;
    double total = 0.0;
    for (int j = 0; j <= 2 * m; ++j) {
        for (int r = 0; 2 * r <= j; ++r) {
            for (auto& alpha : spatial_multi_indices(n, j - 2 * r)) {
                Field d = f;
                for (int ax = 0; ax < n; ++ax)
                    if (alpha[static_cast<size_t>(ax)] > 0)
                        d = fd_axis_derivative(d, ax, alpha[static_cast<size_t>(ax)], accuracy);
                if (r > 0) d = fd_axis_derivative(d, n, r, accuracy);
                total += norm_lp(d, 2.0);
            }
        }
    }
    return total;
}

// --- BMO -------------------------------------------------------------------------

namespace {

struct CubeScan {
    std::vector<double> scratch;

    // Collect in-cube sample values; periodic minimal image when `wrap`.
    void collect(const Field& f, const ParabolicCube& cube, bool wrap) {
        scratch.clear();
        const Grid& g = f.grid();
        const int d = g.axes();
        const Box bb = cube.bounding_box(g.aniso());
        std::vector<int> lo(static_cast<size_t>(d)), hi(static_cast<size_t>(d));
        for (int ax = 0; ax < d; ++ax) {
            const double h = g.spacing(ax);
            const double off = g.sample_offset();
            const double glo = g.box().lo[static_cast<size_t>(ax)];
            int a = static_cast<int>(std::ceil((bb.lo[static_cast<size_t>(ax)] - glo) / h - off - 1e-12));
            int b = static_cast<int>(std::floor((bb.hi[static_cast<size_t>(ax)] - glo) / h - off - 1e-12));
            if (wrap) {
                if (b - a + 1 >= g.dim(ax)) {
                    a = 0;
                    b = g.dim(ax) - 1;
                }
            } else {
                a = std::max(a, 0);
                b = std::min(b, g.dim(ax) - 1);
                if (a > b) return;
            }
            lo[static_cast<size_t>(ax)] = a;
            hi[static_cast<size_t>(ax)] = b;
        }
        const bool ball = cube.form == ParabolicCube::Form::Ball;
        std::vector<int> idx(lo);
        Point delta(static_cast<size_t>(d));
        while (true) {
            std::size_t lin = 0;
            bool inside = true;
            for (int ax = 0; ax < d; ++ax) {
                int i = idx[static_cast<size_t>(ax)];
                const int nn = g.dim(ax);
                int iw = ((i % nn) + nn) % nn;
                lin += static_cast<std::size_t>(iw) * g.stride(ax);
                if (ball) {
                    double dz = g.coord(ax, iw) - cube.center[static_cast<size_t>(ax)];
                    if (wrap) {
                        const double L = g.box().length(ax);
                        dz -= L * std::round(dz / L);
                    }
                    delta[static_cast<size_t>(ax)] = dz;
                }
            }
            if (ball) inside = aniso_distance(delta, g.aniso()) < cube.radius;
            if (inside) scratch.push_back(f.value(lin));
            int ax = d - 1;
            for (; ax >= 0; --ax) {
                if (++idx[static_cast<size_t>(ax)] <= hi[static_cast<size_t>(ax)]) break;
                idx[static_cast<size_t>(ax)] = lo[static_cast<size_t>(ax)];
            }
            if (ax < 0) break;
        }
    }

    // The lower median minimizes the empirical L1 objective.
    double mean_abs_dev() {
        const std::size_t n = scratch.size();
        auto mid = scratch.begin() + static_cast<std::ptrdiff_t>((n - 1) / 2);
        std::nth_element(scratch.begin(), mid, scratch.end());
        const double med = *mid;
        double s = 0.0;
        for (double v : scratch) s += std::abs(v - med);
        return s / static_cast<double>(n);
    }
};

double bmo_over(const Field& f, std::span<const ParabolicCube> cubes, bool wrap, BmoDiagnostics* diag) {
    CubeScan scan;
    double best = 0.0;
    BmoDiagnostics d;
    for (const ParabolicCube& q : cubes) {
        ++d.cubes;
        scan.collect(f, q, wrap);
        if (scan.scratch.empty()) {
            ++d.empty_cubes;
            continue;
        }
        const double dev = scan.mean_abs_dev();
        if (dev > best) {
            best = dev;
            d.best_radius = q.form == ParabolicCube::Form::Ball ? q.radius : std::pow(2.0, q.scale);
        }
    }
    if (diag) *diag = d;
    return best;
}

}  // namespace

double cube_mean_abs_dev(const Field& f, const ParabolicCube& cube, bool wrap, std::size_t* npts) {
    CubeScan scan;
    scan.collect(f, cube, wrap);
    if (npts) *npts = scan.scratch.size();
    if (scan.scratch.empty()) return 0.0;
    return scan.mean_abs_dev();
}

double norm_bmo(const Field& f, std::span<const ParabolicCube> cubes, bool wrap, BmoDiagnostics* diag) {
    if (cubes.empty()) throw ConfigError("norm_bmo: no cubes supplied");
    return bmo_over(f, cubes, wrap, diag);
}

double norm_bmo(const Field& f, const SamplerPolicy& policy, BmoDiagnostics* diag) {
    const Grid& g = f.grid();
    std::vector<double> h(static_cast<size_t>(g.axes()));
    for (int ax = 0; ax < g.axes(); ++ax) h[static_cast<size_t>(ax)] = g.spacing(ax);
    const auto cubes = sample_cubes(g.box(), g.aniso(), policy, h);
    return bmo_over(f, cubes, true, diag);
}

namespace {

std::vector<ParabolicCube> cubes_inside(const Field& f, const Box& omega, const SamplerPolicy& policy) {
    const Grid& g = f.grid();
    if (!g.box().contains_box(omega)) throw StructuralError("norm_bmo_on: omega exceeds the grid box");
    std::vector<double> h(static_cast<size_t>(g.axes()));
    for (int ax = 0; ax < g.axes(); ++ax) h[static_cast<size_t>(ax)] = g.spacing(ax);
    auto cubes = sample_cubes(omega, g.aniso(), policy, h);
    std::vector<ParabolicCube> kept;
    for (auto& q : cubes) {
        const Box bb = q.bounding_box(g.aniso());
        if (omega.contains_box(bb)) kept.push_back(std::move(q));
    }
    if (kept.empty()) throw ConfigError("norm_bmo_on: no sampled cube fits inside omega");
    return kept;
}

}  // namespace

double norm_bmo_on(const Field& f, const Box& omega, const SamplerPolicy& policy, BmoDiagnostics* diag) {
    const auto cubes = cubes_inside(f, omega, policy);
    return bmo_over(f, cubes, false, diag);
}

double norm_bar_bmo(const Field& f, const Box& omega, const SamplerPolicy& policy, BmoDiagnostics* diag) {
    return norm_bmo_on(f, omega, policy, diag) + norm_lp_on(f, omega, 1.0);
}

// --- Besov / Lizorkin-Triebel -------------------------------------------------

double norm_besov(const LPDecomposition& dec, double s, double p, double q) {
    check_exponent(p, "norm_besov");
    check_exponent(q, "norm_besov");
    double acc = 0.0, sup = 0.0;
    for (int j = dec.j_min; j <= dec.j_max; ++j) {
        const double term = std::pow(2.0, s * j) * norm_lp(dec.block(j), p);
        if (is_inf(q))
            sup = std::max(sup, term);
        else
            acc += std::pow(term, q);
    }
    return is_inf(q) ? sup : std::pow(acc, 1.0 / q);
}

double norm_besov(const Field& f, const DyadicSymbolBank& bank, double s, double p, double q) {
    return norm_besov(lp_decompose(f, bank), s, p, q);
}

double norm_triebel(const LPDecomposition& dec, double s, double p, double q) {
    check_exponent(q, "norm_triebel");
    if (!(p >= 1.0) || is_inf(p))
        throw ConfigError("norm_triebel: p must be finite (use norm_triebel_infty_q for p = inf)");
    const Grid& g = dec.blocks.front().grid();
    std::vector<double> acc(g.total(), 0.0);
    for (int j = dec.j_min; j <= dec.j_max; ++j) {
        const double w = std::pow(2.0, s * j);
        const auto& v = dec.block(j).values();
        if (is_inf(q)) {
            for (std::size_t i = 0; i < acc.size(); ++i) acc[i] = std::max(acc[i], w * std::abs(v[i]));
        } else {
            for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += std::pow(w * std::abs(v[i]), q);
        }
    }
    double s_out = 0.0;
    const double qinv = is_inf(q) ? 1.0 : 1.0 / q;
    for (double a : acc) s_out += std::pow(is_inf(q) ? a : std::pow(a, qinv), p);
    return std::pow(s_out * g.cell_volume(), 1.0 / p);
}

double norm_triebel(const Field& f, const DyadicSymbolBank& bank, double s, double p, double q) {
    return norm_triebel(lp_decompose(f, bank), s, p, q);
}

double norm_triebel_infty_q(const LPDecomposition& dec, double q, const LatticeCubePolicy& policy) {
    check_exponent(q, "norm_triebel_infty_q");
    if (is_inf(q)) throw ConfigError("norm_triebel_infty_q: q must be finite");
    if (dec.bank->mode() != BankMode::Homogeneous)
        throw ConfigError("norm_triebel_infty_q: homogeneous decomposition required");
    const Grid& g = dec.blocks.front().grid();
    const Anisotropy& a = g.aniso();
    const int d = g.axes();

    // suffix[m][z] = sum_{j >= j_min + m} |block_j(z)|^q
    const int nblocks = dec.j_max - dec.j_min + 1;
    std::vector<std::vector<double>> suffix(static_cast<size_t>(nblocks) + 1,
                                            std::vector<double>(g.total(), 0.0));
    for (int bi = nblocks - 1; bi >= 0; --bi) {
        const auto& v = dec.blocks[static_cast<size_t>(bi)].values();
        auto& dst = suffix[static_cast<size_t>(bi)];
        const auto& src = suffix[static_cast<size_t>(bi) + 1];
        for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = src[i] + std::pow(std::abs(v[i]), q);
    }

    // Lattice scales the grid resolves.
    int jlo = std::numeric_limits<int>::min(), jhi = std::numeric_limits<int>::max();
    for (int ax = 0; ax < d; ++ax) {
        const double w = a.weight(ax);
        jhi = std::min(jhi, static_cast<int>(std::floor(std::log2(g.box().length(ax)) / w + 1e-9)));
        jlo = std::max(jlo, static_cast<int>(std::ceil(std::log2(policy.min_side_cells * g.spacing(ax)) / w - 1e-9)));
    }

    double sup = 0.0;
    std::vector<int> lo(static_cast<size_t>(d)), hi(static_cast<size_t>(d)), idx(static_cast<size_t>(d));
    for (int jc = jlo; jc <= jhi; ++jc) {
        // blocks j >= -scale(Q)
        const int start = std::max(-jc, dec.j_min);
        if (start > dec.j_max) continue;
        const auto& S = suffix[static_cast<size_t>(start - dec.j_min)];

        SamplerPolicy sp;
        sp.lattice_per_scale = policy.per_scale > 0 ? policy.per_scale : std::numeric_limits<int>::max();
        sp.random_count = 0;
        sp.seed = policy.seed;
        sp.scale_min = jc;
        sp.scale_max = jc;
        sp.min_side_cells = policy.min_side_cells;
        std::vector<double> h(static_cast<size_t>(d));
        for (int ax = 0; ax < d; ++ax) h[static_cast<size_t>(ax)] = g.spacing(ax);
        for (const auto& cube : sample_cubes(g.box(), a, sp, h)) {
            const Box bb = cube.bounding_box(a);
            bool empty = false;
            for (int ax = 0; ax < d; ++ax) {
                const double hsp = g.spacing(ax), off = g.sample_offset();
                const double glo = g.box().lo[static_cast<size_t>(ax)];
                int aa = static_cast<int>(std::ceil((bb.lo[static_cast<size_t>(ax)] - glo) / hsp - off - 1e-12));
                int bbx = static_cast<int>(std::floor((bb.hi[static_cast<size_t>(ax)] - glo) / hsp - off - 1e-12));
                aa = std::max(aa, 0);
                bbx = std::min(bbx, g.dim(ax) - 1);
                if (aa > bbx) {
                    empty = true;
                    break;
                }
                lo[static_cast<size_t>(ax)] = aa;
                hi[static_cast<size_t>(ax)] = bbx;
            }
            if (empty) continue;
            double sum = 0.0;
            std::size_t count = 0;
            idx = lo;
            while (true) {
                std::size_t lin = 0;
                for (int ax = 0; ax < d; ++ax)
                    lin += static_cast<std::size_t>(idx[static_cast<size_t>(ax)]) * g.stride(ax);
                sum += S[lin];
                ++count;
                int ax = d - 1;
                for (; ax >= 0; --ax) {
                    if (++idx[static_cast<size_t>(ax)] <= hi[static_cast<size_t>(ax)]) break;
                    idx[static_cast<size_t>(ax)] = lo[static_cast<size_t>(ax)];
                }
                if (ax < 0) break;
            }
            if (count > 0) sup = std::max(sup, std::pow(sum / static_cast<double>(count), 1.0 / q));
        }
    }
    return sup;
}

double pointwise_block_lq_linf(const LPDecomposition& dec, double s, double q, int j_lo, int j_hi) {
    check_exponent(q, "pointwise_block_lq_linf");
    j_lo = std::max(j_lo, dec.j_min);
    j_hi = std::min(j_hi, dec.j_max);
    if (j_lo > j_hi) return 0.0;
    const Grid& g = dec.blocks.front().grid();
    std::vector<double> acc(g.total(), 0.0);
    for (int j = j_lo; j <= j_hi; ++j) {
        const double w = std::pow(2.0, s * j);
        const auto& v = dec.block(j).values();
        if (is_inf(q)) {
            for (std::size_t i = 0; i < acc.size(); ++i) acc[i] = std::max(acc[i], w * std::abs(v[i]));
        } else {
            for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += std::pow(w * std::abs(v[i]), q);
        }
    }
    double sup = 0.0;
    for (double v : acc) sup = std::max(sup, v);
    return is_inf(q) ? sup : std::pow(sup, 1.0 / q);
}

double norm_fplus(const LPDecomposition& dec, double s, double q) {
    if (dec.j_max < 1) throw ConfigError("norm_fplus: grid resolves no scales j >= 1");
    return pointwise_block_lq_linf(dec, s, q, 1, dec.j_max);
}

double norm_fminus(const LPDecomposition& dec, double s, double q) {
    if (dec.j_min > -1) throw ConfigError("norm_fminus: grid resolves no scales j <= -1");
    return pointwise_block_lq_linf(dec, s, q, dec.j_min, -1);
}

// --- homogeneous Sobolev / Hoelder ----------------------------------------------

double norm_homogeneous_hs(const Field& f, double s) {
    const Grid& g = f.grid();
    const auto& spec = f.spectrum();
    const double weight = g.cell_volume() / static_cast<double>(g.total());
    double acc = 0.0;
    std::vector<int> idx(static_cast<size_t>(g.axes()), 0);
    for (std::size_t lin = 0; lin < g.total(); ++lin) {
        // |xi|^2 with unpaired Nyquist components zeroed, matching the
        // derivative multiplier convention; s = 0 is plain Parseval.
        double xi2 = 0.0;
        for (int ax = 0; ax < g.axes(); ++ax) {
            if (g.is_nyquist(ax, idx[static_cast<size_t>(ax)])) continue;
            const double xi = g.freq(ax, idx[static_cast<size_t>(ax)]);
            xi2 += xi * xi;
        }
        if (s == 0.0)
            acc += std::norm(spec[lin]);
        else if (xi2 > 0.0)
            acc += std::pow(xi2, s) * std::norm(spec[lin]);
        for (int ax = g.axes() - 1; ax >= 0; --ax) {
            if (++idx[static_cast<size_t>(ax)] < g.dim(ax)) break;
            idx[static_cast<size_t>(ax)] = 0;
        }
    }
    return std::sqrt(acc * weight);
}

double holder_seminorm(const Field& f, double gamma, std::uint64_t seed, std::size_t random_pairs,
                       HolderDiagnostics* diag) {
    if (!(gamma > 0.0 && gamma < 1.0)) throw ConfigError("holder_seminorm: gamma must lie in (0,1)");
    const Grid& g = f.grid();
    const int d = g.axes();
    double sup = 0.0;
    std::size_t pairs = 0;

    // Nearest-neighbor pairs along every axis (periodic), which dominate the
    // sup for gamma < 1.
    for (int ax = 0; ax < d; ++ax) {
        const double denom = std::pow(g.spacing(ax), gamma);
        const std::size_t stride = g.stride(ax);
        const int nax = g.dim(ax);
        const std::size_t nsl = g.total() / static_cast<std::size_t>(nax);
        for (std::size_t sl = 0; sl < nsl; ++sl) {
            std::size_t base = 0, rem = sl;
            for (int a2 = d - 1; a2 >= 0; --a2) {
                if (a2 == ax) continue;
                const std::size_t nn = static_cast<std::size_t>(g.dim(a2));
                base += (rem % nn) * g.stride(a2);
                rem /= nn;
            }
            for (int i = 0; i < nax; ++i) {
                const std::size_t p0 = base + static_cast<std::size_t>(i) * stride;
                const std::size_t p1 = base + static_cast<std::size_t>((i + 1) % nax) * stride;
                sup = std::max(sup, std::abs(f.value(p0) - f.value(p1)) / denom);
                ++pairs;
            }
        }
    }

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, g.total() - 1);
    for (std::size_t k = 0; k < random_pairs; ++k) {
        const std::size_t i = pick(rng), j = pick(rng);
        if (i == j) continue;
        auto zi = g.unravel(i), zj = g.unravel(j);
        double dist2 = 0.0;
        for (int ax = 0; ax < d; ++ax) {
            double dz = g.coord(ax, zi[static_cast<size_t>(ax)]) - g.coord(ax, zj[static_cast<size_t>(ax)]);
            const double L = g.box().length(ax);
            dz -= L * std::round(dz / L);
            dist2 += dz * dz;
        }
        if (dist2 == 0.0) continue;
        sup = std::max(sup, std::abs(f.value(i) - f.value(j)) / std::pow(std::sqrt(dist2), gamma));
        ++pairs;
    }
    if (diag) diag->pairs = pairs;
    return sup;
}

double max_over_components(const VectorField& vf, const std::function<double(const Field&)>& norm) {
    double m = 0.0;
    for (const Field& c : vf.components) m = std::max(m, norm(c));
    return m;
}

}  // namespace plp
