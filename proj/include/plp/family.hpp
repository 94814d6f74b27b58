#pragma once

#include <cstdint>
#include <string>

#include "plp/field.hpp"
#include "plp/lp.hpp"

namespace plp {

enum class FamilyKind {
    BandLimitedRandom,
    AnisoGaussian,
    TruncatedLog,
    DilationSweep,
    Constant,
    SingleMode,
    Standard,  // deterministic mix of the above shapes
};

FamilyKind parse_family_kind(const std::string& name);
std::string to_string(FamilyKind kind);

struct FamilySpec {
    FamilyKind kind = FamilyKind::Standard;
    int count = 200;
    std::uint64_t seed = 42;
    double bandwidth = 0.0;          // 0: grid default 2^{j_max}
    double sigma = 0.0;              // 0: randomized per sample
    std::vector<double> dilations = {0.25, 0.5, 1.0, 2.0, 4.0};
    bool normalize_l2 = false;       // scale so |g|_{L2} = 1
    double constant_value = 1.0;
    std::vector<long> mode_index;    // SingleMode: per-axis integer frequency index
    double log_epsilon_cells = 4.0;  // truncation of the log profile, in cells
};

struct Sample {
    int index = 0;
    std::string label;
    Field g;
    VectorField f;  // the exact spectral gradient of g

    const Grid& grid() const { return g.grid(); }
};

// Deterministic per (spec.seed, index); samples are created on demand.
class FamilyGenerator {
public:
    FamilyGenerator(FamilySpec spec, Grid grid);

    int count() const { return spec_.count; }
    const FamilySpec& spec() const { return spec_; }
    const Grid& base_grid() const { return grid_; }

    Sample make(int index) const;

private:
    FamilySpec spec_;
    Grid grid_;
};

// Smooth scalar samples on a bounded cell-centered grid (no periodicity),
// for the bounded-domain pipeline.
Field bounded_sample(const Grid& omega_grid, std::uint64_t seed, int index);

}  // namespace plp
