#include "plp/family.hpp"

#include <cmath>
#include <random>

#include "plp/errors.hpp"
#include "plp/norms.hpp"

namespace plp {

FamilyKind parse_family_kind(const std::string& name) {
    if (name == "band-limited-random") return FamilyKind::BandLimitedRandom;
    if (name == "aniso-gaussian") return FamilyKind::AnisoGaussian;
    if (name == "truncated-log") return FamilyKind::TruncatedLog;
    if (name == "dilation-sweep") return FamilyKind::DilationSweep;
    if (name == "constant") return FamilyKind::Constant;
    if (name == "single-mode") return FamilyKind::SingleMode;
    if (name == "standard") return FamilyKind::Standard;
    throw ConfigError("unknown family kind: " + name);
}

std::string to_string(FamilyKind kind) {
    switch (kind) {
        case FamilyKind::BandLimitedRandom: return "band-limited-random";
        case FamilyKind::AnisoGaussian: return "aniso-gaussian";
        case FamilyKind::TruncatedLog: return "truncated-log";
        case FamilyKind::DilationSweep: return "dilation-sweep";
        case FamilyKind::Constant: return "constant";
        case FamilyKind::SingleMode: return "single-mode";
        case FamilyKind::Standard: return "standard";
    }
    return "?";
}

namespace {

std::uint64_t mix(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t x = seed ^ (0x9e3779b97f4a7c15ull + salt * 0xbf58476d1ce4e5b9ull);
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ull;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebull;
    x ^= x >> 31;
    return x;
}

Field band_limited(const Grid& g, std::uint64_t seed, double bandwidth, double decay) {
    const std::size_t n = g.total();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<Complex> spec(n, Complex(0.0, 0.0));
    const int d = g.axes();

    std::vector<int> idx(static_cast<size_t>(d), 0);
    for (std::size_t lin = 0; lin < n; ++lin) {
        // Hermitian pairing: fill a mode and its reflection together.
        std::size_t partner = 0;
        bool self_paired = true;
        bool nyquist = false;
        for (int ax = 0; ax < d; ++ax) {
            const int i = idx[static_cast<size_t>(ax)];
            const int nn = g.dim(ax);
            const int ri = i == 0 ? 0 : nn - i;
            partner += static_cast<std::size_t>(ri) * g.stride(ax);
            if (ri != i) self_paired = false;
            if (g.is_nyquist(ax, i)) nyquist = true;
        }
        if (lin != 0 && !nyquist && lin <= partner) {
            const double rho = g.freq_aniso_norm(lin);
            if (rho <= bandwidth) {
                const double amp = std::pow(1.0 + rho, -decay);
                if (self_paired) {
                    spec[lin] = Complex(amp * gauss(rng), 0.0);
                } else {
                    const Complex v(amp * gauss(rng), amp * gauss(rng));
                    spec[lin] = v;
                    spec[partner] = std::conj(v);
                }
            }
        }
        for (int ax = d - 1; ax >= 0; --ax) {
            if (++idx[static_cast<size_t>(ax)] < g.dim(ax)) break;
            idx[static_cast<size_t>(ax)] = 0;
        }
    }
    return Field::from_spectrum(g, spec);
}

Field gaussian_profile(const Grid& g, std::uint64_t seed, double sigma_scale, double time_squeeze) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const int d = g.axes();
    Point c(static_cast<size_t>(d));
    std::vector<double> sig(static_cast<size_t>(d));
    for (int ax = 0; ax < d; ++ax) {
        const double L = g.box().length(ax);
        c[static_cast<size_t>(ax)] = g.box().lo[static_cast<size_t>(ax)] + (0.25 + 0.5 * unif(rng)) * L;
        double s = sigma_scale > 0.0 ? sigma_scale * L : (1.0 / 24.0 + unif(rng) / 24.0) * L;
        if (ax == d - 1) s *= time_squeeze;
        sig[static_cast<size_t>(ax)] = s;
    }
    std::vector<double> v(g.total());
    std::vector<int> idx(static_cast<size_t>(d), 0);
    for (std::size_t lin = 0; lin < g.total(); ++lin) {
        double e = 0.0;
        for (int ax = 0; ax < d; ++ax) {
            double dz = g.coord(ax, idx[static_cast<size_t>(ax)]) - c[static_cast<size_t>(ax)];
            const double L = g.box().length(ax);
            dz -= L * std::round(dz / L);
            e += dz * dz / (2.0 * sig[static_cast<size_t>(ax)] * sig[static_cast<size_t>(ax)]);
        }
        v[lin] = std::exp(-e);
        for (int ax = d - 1; ax >= 0; --ax) {
            if (++idx[static_cast<size_t>(ax)] < g.dim(ax)) break;
            idx[static_cast<size_t>(ax)] = 0;
        }
    }
    return mean_subtract(Field(g, std::move(v)));
}

Field truncated_log_profile(const Grid& g, std::uint64_t seed, double eps_cells) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const int d = g.axes();
    const Anisotropy& a = g.aniso();
    Point c(static_cast<size_t>(d));
    double r_cap = std::numeric_limits<double>::infinity();
    double eps = 0.0;
    for (int ax = 0; ax < d; ++ax) {
        const double L = g.box().length(ax);
        c[static_cast<size_t>(ax)] = g.box().lo[static_cast<size_t>(ax)] + (0.25 + 0.5 * unif(rng)) * L;
        r_cap = std::min(r_cap, std::pow(0.45 * L, 1.0 / a.weight(ax)));
        eps = std::max(eps, std::pow(eps_cells * g.spacing(ax), 1.0 / a.weight(ax)));
    }
    const double R = (0.3 + 0.2 * unif(rng)) * r_cap;  // support |z|_a <= 2R inside the box
    const CutoffProfile chi(2);

    std::vector<double> v(g.total());
    Point dz(static_cast<size_t>(d));
    std::vector<int> idx(static_cast<size_t>(d), 0);
    for (std::size_t lin = 0; lin < g.total(); ++lin) {
        for (int ax = 0; ax < d; ++ax) {
            double e = g.coord(ax, idx[static_cast<size_t>(ax)]) - c[static_cast<size_t>(ax)];
            const double L = g.box().length(ax);
            e -= L * std::round(e / L);
            dz[static_cast<size_t>(ax)] = e;
        }
        const double rho = aniso_distance(dz, a);
        v[lin] = chi(rho / R) * std::log(1.0 / std::max(rho, eps));
        for (int ax = d - 1; ax >= 0; --ax) {
            if (++idx[static_cast<size_t>(ax)] < g.dim(ax)) break;
            idx[static_cast<size_t>(ax)] = 0;
        }
    }
    return mean_subtract(Field(g, std::move(v)));
}

}  // namespace

FamilyGenerator::FamilyGenerator(FamilySpec spec, Grid grid) : spec_(std::move(spec)), grid_(std::move(grid)) {
    if (spec_.count < 1) throw ConfigError("family: count must be >= 1");
    const double nyq = std::pow(2.0, grid_.dyadic_range().second + 1);
    if (spec_.bandwidth > nyq) throw ConfigError("family: bandwidth exceeds the grid's resolvable band");
}

Sample FamilyGenerator::make(int index) const {
    if (index < 0 || index >= spec_.count) throw ConfigError("family: sample index out of range");
    const std::uint64_t s = mix(spec_.seed, static_cast<std::uint64_t>(index));
    const double bw_default = std::pow(2.0, grid_.dyadic_range().second);
    const double bw = spec_.bandwidth > 0.0 ? spec_.bandwidth : bw_default;

    FamilyKind kind = spec_.kind;
    std::string label = to_string(kind);
    Field g;
    Grid grid = grid_;

    if (kind == FamilyKind::Standard) {
        switch (index % 5) {
            case 0: kind = FamilyKind::BandLimitedRandom; break;
            case 1: kind = FamilyKind::BandLimitedRandom; break;
            case 2: kind = FamilyKind::AnisoGaussian; break;
            case 3: kind = FamilyKind::TruncatedLog; break;
            default: kind = FamilyKind::AnisoGaussian; break;
        }
    }

    switch (kind) {
        case FamilyKind::BandLimitedRandom: {
            const double decay = 0.5 + 2.0 * ((index % 7) / 6.0);
            const double b = (spec_.kind == FamilyKind::Standard && index % 5 == 1) ? 0.5 * bw : bw;
            g = band_limited(grid, s, b, decay);
            label = "band-limited(bw=" + std::to_string(b) + ")";
            break;
        }
        case FamilyKind::AnisoGaussian: {
            const double squeeze = (spec_.kind == FamilyKind::Standard && index % 5 == 4) ? 0.4 : 1.0;
            g = gaussian_profile(grid, s, spec_.sigma, squeeze);
            label = squeeze == 1.0 ? "aniso-gaussian" : "aniso-gaussian(squeezed)";
            break;
        }
        case FamilyKind::TruncatedLog:
            g = truncated_log_profile(grid, s, spec_.log_epsilon_cells);
            label = "truncated-log";
            break;
        case FamilyKind::DilationSweep: {
            if (spec_.dilations.empty()) throw ConfigError("family: dilation set is empty");
            const int nd = static_cast<int>(spec_.dilations.size());
            const double mu = spec_.dilations[static_cast<size_t>(index % nd)];
            const Field base = band_limited(grid_, mix(spec_.seed, static_cast<std::uint64_t>(index / nd)),
                                            bw, 1.0);
            // g_mu(z) = g(mu^a z) carried by the same samples on the rescaled box.
            std::vector<double> lo(grid_.box().lo), hi(grid_.box().hi);
            for (int ax = 0; ax < grid_.axes(); ++ax) {
                const double f = std::pow(mu, -grid_.aniso().weight(ax));
                lo[static_cast<size_t>(ax)] *= f;
                hi[static_cast<size_t>(ax)] *= f;
            }
            grid = Grid(grid_.dims(), Box(lo, hi), grid_.aniso(), grid_.sample_offset());
            g = Field(grid, base.values());
            label = "dilation(mu=" + std::to_string(mu) + ")";
            break;
        }
        case FamilyKind::Constant: {
            std::vector<double> v(grid.total(), spec_.constant_value);
            g = Field(grid, std::move(v));
            label = "constant(" + std::to_string(spec_.constant_value) + ")";
            break;
        }
        case FamilyKind::SingleMode: {
            std::vector<long> k = spec_.mode_index;
            if (k.empty()) k.assign(static_cast<size_t>(grid.axes()), 1);
            if (static_cast<int>(k.size()) != grid.axes())
                throw ConfigError("family: single-mode index length mismatch");
            std::mt19937_64 rng(s);
            std::uniform_real_distribution<double> unif(0.0, 2.0 * M_PI);
            const double phase = unif(rng);
            std::vector<double> v(grid.total());
            std::vector<int> idx(static_cast<size_t>(grid.axes()), 0);
            for (std::size_t lin = 0; lin < grid.total(); ++lin) {
                double arg = phase;
                for (int ax = 0; ax < grid.axes(); ++ax)
                    arg += 2.0 * M_PI * static_cast<double>(k[static_cast<size_t>(ax)]) *
                           (grid.coord(ax, idx[static_cast<size_t>(ax)]) - grid.box().lo[static_cast<size_t>(ax)]) /
                           grid.box().length(ax);
                v[lin] = std::sin(arg);
                for (int ax = grid.axes() - 1; ax >= 0; --ax) {
                    if (++idx[static_cast<size_t>(ax)] < grid.dim(ax)) break;
                    idx[static_cast<size_t>(ax)] = 0;
                }
            }
            g = Field(grid, std::move(v));
            label = "single-mode";
            break;
        }
        default:
            throw ConfigError("family: unsupported kind");
    }

    if (spec_.normalize_l2) {
        const double l2 = norm_lp(g, 2.0);
        if (l2 > 0.0) g = field_scale(g, 1.0 / l2);
    }

    Sample out{index, label, g, gradient(g)};
    return out;
}

Field bounded_sample(const Grid& omega_grid, std::uint64_t seed, int index) {
    // Smooth non-periodic mixtures: a few global trig waves plus local bumps.
    std::mt19937_64 rng(mix(seed, static_cast<std::uint64_t>(index)));
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const int d = omega_grid.axes();
    const int nwaves = 2 + static_cast<int>(unif(rng) * 3);
    const int nbumps = 1 + static_cast<int>(unif(rng) * 3);

    struct Wave {
        std::vector<double> k;
        double phase, amp;
    };
    struct Bump {
        std::vector<double> c, s;
        double amp;
    };
    std::vector<Wave> waves;
    std::vector<Bump> bumps;
    for (int w = 0; w < nwaves; ++w) {
        Wave wv;
        wv.k.resize(static_cast<size_t>(d));
        for (int ax = 0; ax < d; ++ax)
            wv.k[static_cast<size_t>(ax)] = (unif(rng) * 4.0 - 2.0) * 2.0 * M_PI / omega_grid.box().length(ax);
        wv.phase = unif(rng) * 2.0 * M_PI;
        wv.amp = 0.5 + unif(rng);
        waves.push_back(std::move(wv));
    }
    for (int b = 0; b < nbumps; ++b) {
        Bump bp;
        bp.c.resize(static_cast<size_t>(d));
        bp.s.resize(static_cast<size_t>(d));
        for (int ax = 0; ax < d; ++ax) {
            const double L = omega_grid.box().length(ax);
            bp.c[static_cast<size_t>(ax)] = omega_grid.box().lo[static_cast<size_t>(ax)] + (0.2 + 0.6 * unif(rng)) * L;
            bp.s[static_cast<size_t>(ax)] = (0.08 + 0.15 * unif(rng)) * L;
        }
        bp.amp = 2.0 * unif(rng) - 1.0;
        bumps.push_back(std::move(bp));
    }

    std::vector<double> v(omega_grid.total());
    std::vector<int> idx(static_cast<size_t>(d), 0);
    for (std::size_t lin = 0; lin < omega_grid.total(); ++lin) {
        Point z = omega_grid.point(idx);
        double val = 0.0;
        for (const Wave& w : waves) {
            double arg = w.phase;
            for (int ax = 0; ax < d; ++ax) arg += w.k[static_cast<size_t>(ax)] * z[static_cast<size_t>(ax)];
            val += w.amp * std::sin(arg);
        }
        for (const Bump& b : bumps) {
            double e = 0.0;
            for (int ax = 0; ax < d; ++ax) {
                const double dz = z[static_cast<size_t>(ax)] - b.c[static_cast<size_t>(ax)];
                e += dz * dz / (2.0 * b.s[static_cast<size_t>(ax)] * b.s[static_cast<size_t>(ax)]);
            }
            val += b.amp * std::exp(-e);
        }
        v[lin] = val;
        for (int ax = d - 1; ax >= 0; --ax) {
            if (++idx[static_cast<size_t>(ax)] < omega_grid.dim(ax)) break;
            idx[static_cast<size_t>(ax)] = 0;
        }
    }
    return Field(omega_grid, std::move(v));
}

}  // namespace plp
