#include "plp/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "plp/errors.hpp"

namespace plp {

Box::Box(std::vector<double> lo_, std::vector<double> hi_) : lo(std::move(lo_)), hi(std::move(hi_)) {
    if (lo.size() != hi.size() || lo.empty()) throw StructuralError("box: bound length mismatch");
    for (size_t i = 0; i < lo.size(); ++i)
        if (!(lo[i] < hi[i])) throw ConfigError("box: lower bound must be below upper bound on every axis");
}

Box Box::unit(int axes) { return cube(axes, 0.0, 1.0); }

Box Box::cube(int axes, double lo, double hi) {
    return Box(std::vector<double>(static_cast<size_t>(axes), lo),
               std::vector<double>(static_cast<size_t>(axes), hi));
}

double Box::volume() const {
    double v = 1.0;
    for (int ax = 0; ax < axes(); ++ax) v *= length(ax);
    return v;
}

bool Box::contains(std::span<const double> z) const {
    if (static_cast<int>(z.size()) != axes()) throw StructuralError("box: point length mismatch");
    for (size_t i = 0; i < z.size(); ++i)
        if (!(z[i] > lo[i] && z[i] < hi[i])) return false;
    return true;
}

bool Box::contains_box(const Box& inner) const {
    if (inner.axes() != axes()) throw StructuralError("box: axis count mismatch");
    for (size_t i = 0; i < lo.size(); ++i)
        if (inner.lo[i] < lo[i] || inner.hi[i] > hi[i]) return false;
    return true;
}

Point Box::center() const {
    Point c(lo.size());
    for (size_t i = 0; i < lo.size(); ++i) c[i] = 0.5 * (lo[i] + hi[i]);
    return c;
}

ParabolicCube ParabolicCube::ball(Point center, double radius) {
    if (!(radius > 0.0)) throw ConfigError("cube: radius must be positive");
    ParabolicCube q;
    q.form = Form::Ball;
    q.center = std::move(center);
    q.radius = radius;
    return q;
}

ParabolicCube ParabolicCube::lattice(int scale, std::vector<long> offset) {
    ParabolicCube q;
    q.form = Form::Lattice;
    q.scale = scale;
    q.offset = std::move(offset);
    return q;
}

double unit_ball_measure(int axes) {
    return std::pow(M_PI, 0.5 * axes) / std::tgamma(0.5 * axes + 1.0);
}

double ParabolicCube::measure(const Anisotropy& a) const {
    if (form == Form::Ball) return std::pow(radius, a.homogeneous_dimension()) * unit_ball_measure(a.axes());
    return std::pow(2.0, scale * a.homogeneous_dimension());
}

bool ParabolicCube::contains(std::span<const double> z, const Anisotropy& a) const {
    if (form == Form::Ball) {
        Point d(z.size());
        for (size_t i = 0; i < z.size(); ++i) d[i] = z[i] - center[i];
        return aniso_distance(d, a) < radius;
    }
    for (size_t i = 0; i < z.size(); ++i) {
        const double side = std::pow(2.0, scale * a.weight(static_cast<int>(i)));
        const double zlo = side * static_cast<double>(offset[i]);
        if (!(z[i] >= zlo && z[i] < zlo + side)) return false;
    }
    return true;
}

Box ParabolicCube::bounding_box(const Anisotropy& a) const {
    std::vector<double> lo(static_cast<size_t>(a.axes())), hi(lo.size());
    if (form == Form::Ball) {
        for (int i = 0; i < a.axes(); ++i) {
            const double ext = std::pow(radius, a.weight(i));
            lo[static_cast<size_t>(i)] = center[static_cast<size_t>(i)] - ext;
            hi[static_cast<size_t>(i)] = center[static_cast<size_t>(i)] + ext;
        }
    } else {
        for (int i = 0; i < a.axes(); ++i) {
            const double side = std::pow(2.0, scale * a.weight(i));
            lo[static_cast<size_t>(i)] = side * static_cast<double>(offset[static_cast<size_t>(i)]);
            hi[static_cast<size_t>(i)] = lo[static_cast<size_t>(i)] + side;
        }
    }
    return Box(std::move(lo), std::move(hi));
}

namespace {

// Offset range of scale-j cubes intersecting [lo, hi) on one axis.
std::pair<long, long> offset_range(double lo, double hi, double side) {
    const long k0 = static_cast<long>(std::floor(lo / side + 1e-12));
    long k1 = static_cast<long>(std::ceil(hi / side - 1e-12)) - 1;
    if (k1 < k0) k1 = k0;
    return {k0, k1};
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t x = seed + 0x9e3779b97f4a7c15ull * (salt + 1);
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ull;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebull;
    x ^= x >> 31;
    return x;
}

}  // namespace

long lattice_cube_count(const Box& domain, const Anisotropy& a, int scale) {
    long count = 1;
    for (int ax = 0; ax < domain.axes(); ++ax) {
        const double side = std::pow(2.0, scale * a.weight(ax));
        auto [k0, k1] = offset_range(domain.lo[static_cast<size_t>(ax)], domain.hi[static_cast<size_t>(ax)], side);
        count *= (k1 - k0 + 1);
    }
    return count;
}

std::vector<ParabolicCube> sample_cubes(const Box& domain, const Anisotropy& a,
                                        const SamplerPolicy& policy,
                                        std::span<const double> spacing) {
    if (domain.axes() != a.axes()) throw StructuralError("sample_cubes: domain/anisotropy mismatch");
    if (policy.lattice_per_scale <= 0 && policy.random_count <= 0)
        throw ConfigError("sample_cubes: policy requests zero cubes");

    const int d = a.axes();

    // Resolvable scales: side >= min_side_cells * h on every axis (when a grid
    // is given) and side <= domain length on every axis.
    int jlo = policy.scale_min, jhi = policy.scale_max;
    for (int ax = 0; ax < d; ++ax) {
        const double w = a.weight(ax);
        jhi = std::min(jhi, static_cast<int>(std::floor(std::log2(domain.length(ax)) / w + 1e-9)));
        if (!spacing.empty()) {
            const double floor_side = policy.min_side_cells * spacing[static_cast<size_t>(ax)];
            jlo = std::max(jlo, static_cast<int>(std::ceil(std::log2(floor_side) / w - 1e-9)));
        }
    }
    if (spacing.empty() && jlo == std::numeric_limits<int>::min()) jlo = jhi;

    std::vector<ParabolicCube> out;

    if (policy.lattice_per_scale > 0) {
        for (int j = jlo; j <= jhi; ++j) {
            std::vector<std::pair<long, long>> ranges(static_cast<size_t>(d));
            long total = 1;
            for (int ax = 0; ax < d; ++ax) {
                const double side = std::pow(2.0, j * a.weight(ax));
                ranges[static_cast<size_t>(ax)] =
                    offset_range(domain.lo[static_cast<size_t>(ax)], domain.hi[static_cast<size_t>(ax)], side);
                total *= (ranges[static_cast<size_t>(ax)].second - ranges[static_cast<size_t>(ax)].first + 1);
            }
            auto nth_offset = [&](long t) {
                std::vector<long> k(static_cast<size_t>(d));
                for (int ax = d - 1; ax >= 0; --ax) {
                    const long span = ranges[static_cast<size_t>(ax)].second - ranges[static_cast<size_t>(ax)].first + 1;
                    k[static_cast<size_t>(ax)] = ranges[static_cast<size_t>(ax)].first + (t % span);
                    t /= span;
                }
                return k;
            };
            if (total <= policy.lattice_per_scale) {
                for (long t = 0; t < total; ++t) out.push_back(ParabolicCube::lattice(j, nth_offset(t)));
            } else {
                // Cap exceeded: seeded subset, stream keyed by (seed, scale).
                std::mt19937_64 rng(mix_seed(policy.seed, static_cast<std::uint64_t>(j + 4096)));
                std::uniform_int_distribution<long> pick(0, total - 1);
                std::vector<long> chosen;
                while (static_cast<int>(chosen.size()) < policy.lattice_per_scale) {
                    const long t = pick(rng);
                    if (std::find(chosen.begin(), chosen.end(), t) == chosen.end()) chosen.push_back(t);
                }
                std::sort(chosen.begin(), chosen.end());
                for (long t : chosen) out.push_back(ParabolicCube::lattice(j, nth_offset(t)));
            }
        }
    }

    if (policy.random_count > 0) {
        std::mt19937_64 rng(mix_seed(policy.seed, 0x52414e44));
        double rlo = 0.0, rhi = std::numeric_limits<double>::infinity();
        for (int ax = 0; ax < d; ++ax) {
            const double w = a.weight(ax);
            if (!spacing.empty())
                rlo = std::max(rlo, std::pow(policy.min_side_cells * spacing[static_cast<size_t>(ax)], 1.0 / w));
            rhi = std::min(rhi, std::pow(0.5 * domain.length(ax), 1.0 / w));
        }
        if (rlo <= 0.0) rlo = rhi / 1024.0;
        if (!(rlo < rhi)) rlo = rhi / 2.0;
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        for (int i = 0; i < policy.random_count; ++i) {
            Point c(static_cast<size_t>(d));
            for (int ax = 0; ax < d; ++ax)
                c[static_cast<size_t>(ax)] = domain.lo[static_cast<size_t>(ax)] + unif(rng) * domain.length(ax);
            const double r = rlo * std::pow(rhi / rlo, unif(rng));  // log-uniform
            out.push_back(ParabolicCube::ball(std::move(c), r));
        }
    }

    if (out.empty()) throw ConfigError("sample_cubes: no cubes resolvable under policy");
    return out;
}

}  // namespace plp
