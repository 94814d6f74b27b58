#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "plp/anisotropy.hpp"

namespace plp {

// Axis-aligned box given by per-axis open bounds (lo_i, hi_i).
struct Box {
    std::vector<double> lo, hi;

    Box() = default;
    Box(std::vector<double> lo_, std::vector<double> hi_);
    static Box unit(int axes);
    static Box cube(int axes, double lo, double hi);

    int axes() const { return static_cast<int>(lo.size()); }
    double length(int ax) const { return hi[static_cast<size_t>(ax)] - lo[static_cast<size_t>(ax)]; }
    double volume() const;
    bool contains(std::span<const double> z) const;
    bool contains_box(const Box& inner) const;
    Point center() const;

    bool operator==(const Box& o) const { return lo == o.lo && hi == o.hi; }
};

// A parabolic cube in either of the two shapes the norms use: a ball
// {z : |z - center|_a < radius} or a dilated lattice cube
// prod_i [2^{j a_i} k_i, 2^{j a_i} (k_i + 1)).
struct ParabolicCube {
    enum class Form { Ball, Lattice };

    Form form = Form::Ball;
    Point center;
    double radius = 0.0;
    int scale = 0;
    std::vector<long> offset;

    static ParabolicCube ball(Point center, double radius);
    static ParabolicCube lattice(int scale, std::vector<long> offset);

    // r^{|a|} times the Euclidean unit-ball measure for balls, 2^{j |a|}
    // for lattice cubes.
    double measure(const Anisotropy& a) const;
    bool contains(std::span<const double> z, const Anisotropy& a) const;
    // Per-axis extent as a box (for balls: center_i +- radius^{a_i}).
    Box bounding_box(const Anisotropy& a) const;
};

double unit_ball_measure(int axes);

struct SamplerPolicy {
    int lattice_per_scale = 64;  // per-scale cap; full tiling when it fits
    int random_count = 256;
    std::uint64_t seed = 0;
    int scale_min = std::numeric_limits<int>::min();
    int scale_max = std::numeric_limits<int>::max();
    double min_side_cells = 2.0;  // lattice/ball resolvability floor in grid cells
};

// Deterministic stream of cubes intersecting `domain`: the dyadic lattice at
// every resolvable scale followed by seeded random balls.  `spacing` gives
// the per-axis grid spacing used to decide which scales are resolvable (may
// be empty when no grid is involved).
std::vector<ParabolicCube> sample_cubes(const Box& domain, const Anisotropy& a,
                                        const SamplerPolicy& policy,
                                        std::span<const double> spacing = {});

// Offsets of the scale-j lattice cubes intersecting `domain` (counting oracle
// for tests; `sample_cubes` enumerates exactly these when the cap allows).
long lattice_cube_count(const Box& domain, const Anisotropy& a, int scale);

}  // namespace plp
