#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>

#include "plp/extension.hpp"
#include "plp/family.hpp"
#include "plp/norms.hpp"

namespace plp {

enum class InequalityId {
    Thm11,      // |f|_inf <= C(1 + |f|_BMO (log+(|f|_W + |g|_inf))^{1/2})
    EqIM,       // |f|_inf <= C(1 + |f|_BMO (1 + log+ |f|_W))
    Thm14,      // bounded-domain variant through the extension pipeline
    Thm17,      // (log+(|f|_W + |g|_inf))^{1/2} <= C(1 + log+ |f|_W)
    Lemma32,    // log estimate in the Lizorkin-Triebel scale
    Mt2ato,     // explicit-constant step-1 bound, worst case over N
    Lemma52,    // |g|_inf <= C(1 + |f|_W (log(e + (|f|_W+|g|_inf)/|f|_W))^{1/2})
    Embed212,   // Besov embedding at the scaling relation
    Embed213,   // Sobolev-to-Besov chain
    Bernstein,  // block L_inf vs 2^{(n+1)j/2} block L2, isotropic
};

InequalityId parse_inequality(const std::string& name);
std::string to_string(InequalityId id);

double log_plus(double x);

struct SampleEntry {
    int index = -1;
    std::string label;
    bool accepted = true;
    std::string rejected_hypothesis;
    double lhs = 0.0;
    double c_sample = 0.0;
    std::vector<std::pair<std::string, double>> components;

    void set(const std::string& key, double value) { components.emplace_back(key, value); }
    double component(const std::string& key) const;
};

struct Summary {
    int count = 0;
    double c_max = 0.0, c_median = 0.0, c_mean = 0.0;
    double q25 = 0.0, q75 = 0.0, q95 = 0.0;
};

Summary summarize(std::span<const SampleEntry> entries);

// Max/median spread plus the drift of the fitted constant between two runs
// (resolution doubling, dilation sweeps).
struct StabilityDelta {
    double base = 0.0, other = 0.0;
    double drift = 0.0;  // |other - base| / base
};
StabilityDelta stability(const Summary& base, const Summary& other);

struct LabConfig {
    int m = 1;
    double gamma = 0.5;
    SamplerPolicy sampler;         // BMO cube sampling
    LatticeCubePolicy lattice;     // dilated-cube Lizorkin-Triebel norm
    std::uint64_t holder_seed = 7;
    std::size_t holder_pairs = 4096;
    double T = 1.0;                // time extent of the bounded domain
    int fd_accuracy = 4;
};

// Caches the symbol banks and the cube family for one grid so a whole run
// prices them once; evaluation itself is pure.
class Lab {
public:
    Lab(Grid grid, LabConfig cfg = {});

    const Grid& grid() const { return grid_; }
    const LabConfig& config() const { return cfg_; }

    const DyadicSymbolBank& bank(BankMode mode) const;        // grid anisotropy
    const DyadicSymbolBank& isotropic_bank(BankMode mode) const;
    std::span<const ParabolicCube> bmo_cubes() const;

    double bmo(const Field& f) const;
    double sobolev(const Field& f) const { return norm_sobolev_parabolic(f, cfg_.m); }

    SampleEntry eval(InequalityId id, const Sample& s) const;

private:
    SampleEntry eval_thm11(const Sample& s, bool sqrt_log) const;
    SampleEntry eval_thm17(const Sample& s) const;
    SampleEntry eval_lemma32(const Sample& s) const;
    SampleEntry eval_mt2ato(const Sample& s) const;
    SampleEntry eval_lemma52(const Sample& s) const;
    SampleEntry eval_embed(const Sample& s, bool chain) const;
    SampleEntry eval_bernstein(const Sample& s) const;

    Grid grid_;
    LabConfig cfg_;
    mutable std::unique_ptr<DyadicSymbolBank> homog_, inhomog_, iso_homog_, iso_inhomog_;
    mutable std::vector<ParabolicCube> cubes_;
};

// --- explicit-constant machinery -------------------------------------------

// C_gamma = (1/(2^{2 gamma} - 1))^{1/2} of the step-1 bound.
double dyadic_tail_constant(double gamma);

// Step-1 right-hand side at a given N.
double step1_bound(double f02_pointwise, double fplus, double fminus, double gamma, int N);

struct DyadicCutResult {
    bool n1_branch = false;
    int n_analytic = 1;
    int n_bruteforce = 1;
    double beta = 1.0;
    std::vector<double> bound_curve;  // index N-1, N = 1..n_max
};

// Lemma 3.2 step-2 optimization: the analytic integer N(beta) rule vs the
// brute-force argmin of the step-1 bound.
DyadicCutResult optimize_dyadic_cut(double fplus_plus_fminus, double f02, double gamma, int n_max);

// Minimal C making the branch of x (log(e + y/x))^{1/2} <= C(...) hold at (x, y).
double split_inequality_min_c(double x, double y);

struct SplitScanResult {
    double c_max = 0.0;
    double worst_x = 0.0, worst_y = 0.0;
    long points = 0;
};
// Certifies a finite global constant over a log-spaced (x, y) scan grid.
SplitScanResult scan_split_inequality(double x_max = 10.0, double y_max = 1e6, int nx = 200, int ny = 120);

struct CaseSplitResult {
    int case_id = 1;          // 1: |f|_W <= 1, 2: |f|_W >= 1
    double w_norm = 0.0;
    double g_linf = 0.0;
    double x_value = 0.0;     // A or B
    double c_self = 0.0;      // minimal C with X <= C(1 + (log(e+1+X))^{1/2})
    double c_final = 0.0;     // minimal C in the comparison inequality itself
};
CaseSplitResult case_split_theorem17(const Sample& s, const Lab& lab);

// --- bounded-domain pipeline -------------------------------------------------

struct BoundedPipelineResult {
    SampleEntry entry;           // the bounded inequality itself
    double bmo_part = 0.0;       // BMO^a(Omega_T) component of the bar norm
    double l1_part = 0.0;
    double w_omega = 0.0;        // |f|_W(Omega_T), finite differences
    double w_extended = 0.0;     // |f~|_W on the tripled box
    double w_localized = 0.0;    // |psi f~|_W on the periodic embedding, spectral
    double g_linf = 0.0;
    double berna_ratio = 0.0;    // w_extended / w_omega
    double nhdn_ratio = 0.0;     // w_localized / w_omega
    double prog_ratio = 0.0;     // g_linf / w_omega
    double slice_mean_correction = 0.0;
    double inner_c = 0.0;        // scalar full-space inequality on (g, psi f~)
};

// Extension -> plateau localization -> antiderivative -> inequality, for a
// scalar sample on the cell-centered grid over Omega_T.
BoundedPipelineResult eval_bounded(const Field& f_omega, const LabConfig& cfg);

// --- reports -----------------------------------------------------------------

struct InequalityReport {
    int schema_version = 1;
    std::string inequality;
    std::string config_echo;  // JSON text
    std::vector<SampleEntry> entries;
    Summary summary;
    double runtime_seconds = 0.0;
};

InequalityReport run_family(const Lab& lab, InequalityId id, const FamilyGenerator& family);
std::string report_to_json(const InequalityReport& report);
std::string report_to_csv(const InequalityReport& report);

}  // namespace plp
