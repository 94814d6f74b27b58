#include "plp/inequalities.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "plp/errors.hpp"

namespace plp {

InequalityId parse_inequality(const std::string& name) {
    if (name == "thm1.1") return InequalityId::Thm11;
    if (name == "eqIM") return InequalityId::EqIM;
    if (name == "thm1.4") return InequalityId::Thm14;
    if (name == "thm1.7") return InequalityId::Thm17;
    if (name == "lemma3.2") return InequalityId::Lemma32;
    if (name == "mt2ato") return InequalityId::Mt2ato;
    if (name == "lemma5.2") return InequalityId::Lemma52;
    if (name == "embed2.12") return InequalityId::Embed212;
    if (name == "embed2.13") return InequalityId::Embed213;
    if (name == "bernstein") return InequalityId::Bernstein;
    throw ConfigError("unknown inequality id: " + name);
}

std::string to_string(InequalityId id) {
    switch (id) {
        case InequalityId::Thm11: return "thm1.1";
        case InequalityId::EqIM: return "eqIM";
        case InequalityId::Thm14: return "thm1.4";
        case InequalityId::Thm17: return "thm1.7";
        case InequalityId::Lemma32: return "lemma3.2";
        case InequalityId::Mt2ato: return "mt2ato";
        case InequalityId::Lemma52: return "lemma5.2";
        case InequalityId::Embed212: return "embed2.12";
        case InequalityId::Embed213: return "embed2.13";
        case InequalityId::Bernstein: return "bernstein";
    }
    return "?";
}

double log_plus(double x) { return x > 1.0 ? std::log(x) : 0.0; }

double SampleEntry::component(const std::string& key) const {
    for (const auto& [k, v] : components)
        if (k == key) return v;
    throw ConfigError("sample entry has no component " + key);
}

Summary summarize(std::span<const SampleEntry> entries) {
    std::vector<double> cs;
    for (const auto& e : entries)
        if (e.accepted) cs.push_back(e.c_sample);
    Summary s;
    s.count = static_cast<int>(cs.size());
    if (cs.empty()) return s;
    std::sort(cs.begin(), cs.end());
    auto quantile = [&](double q) {
        const double pos = q * (cs.size() - 1);
        const std::size_t i = static_cast<std::size_t>(pos);
        const double frac = pos - static_cast<double>(i);
        return i + 1 < cs.size() ? cs[i] * (1.0 - frac) + cs[i + 1] * frac : cs[i];
    };
    s.c_max = cs.back();
    s.c_median = quantile(0.5);
    s.q25 = quantile(0.25);
    s.q75 = quantile(0.75);
    s.q95 = quantile(0.95);
    for (double c : cs) s.c_mean += c;
    s.c_mean /= static_cast<double>(cs.size());
    return s;
}

StabilityDelta stability(const Summary& base, const Summary& other) {
    StabilityDelta d;
    d.base = base.c_max;
    d.other = other.c_max;
    d.drift = base.c_max > 0.0 ? std::abs(other.c_max - base.c_max) / base.c_max
                               : std::abs(other.c_max);
    return d;
}

// --- Lab ---------------------------------------------------------------------

Lab::Lab(Grid grid, LabConfig cfg) : grid_(std::move(grid)), cfg_(std::move(cfg)) {}

const DyadicSymbolBank& Lab::bank(BankMode mode) const {
    auto& slot = mode == BankMode::Homogeneous ? homog_ : inhomog_;
    if (!slot) slot = std::make_unique<DyadicSymbolBank>(grid_, CutoffProfile(2), mode);
    return *slot;
}

const DyadicSymbolBank& Lab::isotropic_bank(BankMode mode) const {
    auto& slot = mode == BankMode::Homogeneous ? iso_homog_ : iso_inhomog_;
    if (!slot) {
        Grid iso(grid_.dims(), grid_.box(), Anisotropy::isotropic(grid_.axes()), grid_.sample_offset());
        slot = std::make_unique<DyadicSymbolBank>(iso, CutoffProfile(2), mode);
    }
    return *slot;
}

std::span<const ParabolicCube> Lab::bmo_cubes() const {
    if (cubes_.empty()) {
        std::vector<double> h(static_cast<size_t>(grid_.axes()));
        for (int ax = 0; ax < grid_.axes(); ++ax) h[static_cast<size_t>(ax)] = grid_.spacing(ax);
        cubes_ = sample_cubes(grid_.box(), grid_.aniso(), cfg_.sampler, h);
    }
    return cubes_;
}

double Lab::bmo(const Field& f) const { return norm_bmo(f, bmo_cubes(), true); }

namespace {

bool order_hypothesis(int m, int axes) {
    // 2m > (n+2)/2 with n+1 = axes
    return 2.0 * m > 0.5 * (axes + 1);
}

}  // namespace

SampleEntry Lab::eval(InequalityId id, const Sample& s) const {
    switch (id) {
        case InequalityId::Thm11: return eval_thm11(s, true);
        case InequalityId::EqIM: return eval_thm11(s, false);
        case InequalityId::Thm17: return eval_thm17(s);
        case InequalityId::Lemma32: return eval_lemma32(s);
        case InequalityId::Mt2ato: return eval_mt2ato(s);
        case InequalityId::Lemma52: return eval_lemma52(s);
        case InequalityId::Embed212: return eval_embed(s, false);
        case InequalityId::Embed213: return eval_embed(s, true);
        case InequalityId::Bernstein: return eval_bernstein(s);
        case InequalityId::Thm14:
            throw ConfigError("thm1.4 runs through the bounded pipeline (eval_bounded)");
    }
    throw ConfigError("unhandled inequality id");
}

SampleEntry Lab::eval_thm11(const Sample& s, bool sqrt_log) const {
    SampleEntry e;
    e.index = s.index;
    e.label = s.label;
    if (!order_hypothesis(cfg_.m, grid_.axes())) {
        e.accepted = false;
        e.rejected_hypothesis = "2m > (n+2)/2";
        return e;
    }
    const double w = max_over_components(s.f, [&](const Field& c) { return sobolev(c); });
    const double b = max_over_components(s.f, [&](const Field& c) { return bmo(c); });
    const double lhs = max_over_components(s.f, [](const Field& c) { return norm_linf(c); });
    const double gl = norm_linf(s.g);
    double shape, log_term;
    if (sqrt_log) {
        log_term = std::sqrt(log_plus(w + gl));
        shape = 1.0 + b * log_term;
    } else {
        log_term = 1.0 + log_plus(w);
        shape = 1.0 + b * log_term;
    }
    e.lhs = lhs;
    e.c_sample = lhs / shape;
    e.set("f_linf", lhs);
    e.set("bmo", b);
    e.set("w_norm", w);
    e.set("g_linf", gl);
    e.set("log_term", log_term);
    e.set("shape", shape);
    return e;
}

SampleEntry Lab::eval_thm17(const Sample& s) const {
    SampleEntry e;
    e.index = s.index;
    e.label = s.label;
    const int n = grid_.axes() - 1;
    if (n < 1 || n > 3) {
        e.accepted = false;
        e.rejected_hypothesis = "n in {1,2,3}";
        return e;
    }
    if (!order_hypothesis(cfg_.m, grid_.axes())) {
        e.accepted = false;
        e.rejected_hypothesis = "2m > (n+2)/2";
        return e;
    }
    const double gl2 = norm_lp(s.g, 2.0);
    if (gl2 > 1.0 + 1e-9) {
        e.accepted = false;
        e.rejected_hypothesis = "|g|_L2 <= 1";
        return e;
    }
    const double w = max_over_components(s.f, [&](const Field& c) { return sobolev(c); });
    const double gl = norm_linf(s.g);
    e.lhs = std::sqrt(log_plus(w + gl));
    const double shape = 1.0 + log_plus(w);
    e.c_sample = e.lhs / shape;
    e.set("w_norm", w);
    e.set("g_linf", gl);
    e.set("g_l2", gl2);
    e.set("shape", shape);
    return e;
}

SampleEntry Lab::eval_lemma32(const Sample& s) const {
    SampleEntry e;
    e.index = s.index;
    e.label = s.label;
    const auto& bk = bank(BankMode::Homogeneous);
    if (bk.j_max() < 1 || bk.j_min() > -1) {
        e.accepted = false;
        e.rejected_hypothesis = "grid resolves both j >= 1 and j <= -1";
        return e;
    }
    const double gamma = cfg_.gamma;
    double lhs = 0.0, f02_cube = 0.0, f02_pw = 0.0, fp = 0.0, fm = 0.0;
    for (const Field& c : s.f.components) {
        const auto dec = lp_decompose(c, bk);
        lhs = std::max(lhs, pointwise_block_lq_linf(dec, 0.0, 1.0, dec.j_min, dec.j_max));
        f02_pw = std::max(f02_pw, pointwise_block_lq_linf(dec, 0.0, 2.0, dec.j_min, dec.j_max));
        f02_cube = std::max(f02_cube, norm_triebel_infty_q(dec, 2.0, cfg_.lattice));
        fp = std::max(fp, norm_fplus(dec, gamma, 2.0));
        fm = std::max(fm, norm_fminus(dec, -gamma, 2.0));
    }
    e.lhs = lhs;
    const double shape = 1.0 + f02_cube * std::sqrt(log_plus(fp + fm));
    e.c_sample = lhs / shape;
    e.set("f01_pointwise", lhs);
    e.set("f02_cube", f02_cube);
    e.set("f02_pointwise", f02_pw);
    e.set("fplus", fp);
    e.set("fminus", fm);
    e.set("shape", shape);
    return e;
}

SampleEntry Lab::eval_mt2ato(const Sample& s) const {
    SampleEntry e;
    e.index = s.index;
    e.label = s.label;
    const auto& bk = bank(BankMode::Homogeneous);
    if (bk.j_max() < 1 || bk.j_min() > -1) {
        e.accepted = false;
        e.rejected_hypothesis = "grid resolves both j >= 1 and j <= -1";
        return e;
    }
    const double gamma = cfg_.gamma;
    double lhs = 0.0, f02_pw = 0.0, fp = 0.0, fm = 0.0;
    for (const Field& c : s.f.components) {
        const auto dec = lp_decompose(c, bk);
        lhs = std::max(lhs, pointwise_block_lq_linf(dec, 0.0, 1.0, dec.j_min, dec.j_max));
        f02_pw = std::max(f02_pw, pointwise_block_lq_linf(dec, 0.0, 2.0, dec.j_min, dec.j_max));
        fp = std::max(fp, norm_fplus(dec, gamma, 2.0));
        fm = std::max(fm, norm_fminus(dec, -gamma, 2.0));
    }
    double worst_ratio = 0.0;
    int worst_n = 1;
    for (int N = 1; N <= 16; ++N) {
        const double rhs = step1_bound(f02_pw, fp, fm, gamma, N);
        const double ratio = rhs > 0.0 ? lhs / rhs : (lhs > 0.0 ? HUGE_VAL : 0.0);
        if (ratio > worst_ratio) {
            worst_ratio = ratio;
            worst_n = N;
        }
    }
    e.lhs = lhs;
    e.c_sample = worst_ratio;  // must stay <= 1 within roundoff
    e.set("c_gamma", dyadic_tail_constant(gamma));
    e.set("f02_pointwise", f02_pw);
    e.set("fplus", fp);
    e.set("fminus", fm);
    e.set("worst_n", worst_n);
    return e;
}

SampleEntry Lab::eval_lemma52(const Sample& s) const {
    SampleEntry e;
    e.index = s.index;
    e.label = s.label;
    if (!order_hypothesis(cfg_.m, grid_.axes())) {
        e.accepted = false;
        e.rejected_hypothesis = "2m > (n+2)/2";
        return e;
    }
    const double w = max_over_components(s.f, [&](const Field& c) { return sobolev(c); });
    const double gl = norm_linf(s.g);
    e.lhs = gl;
    const double shape = w > 0.0 ? 1.0 + w * std::sqrt(std::log(M_E + (w + gl) / w)) : 1.0;
    e.c_sample = e.lhs / shape;
    e.set("w_norm", w);
    e.set("g_linf", gl);
    e.set("shape", shape);
    return e;
}

SampleEntry Lab::eval_embed(const Sample& s, bool chain) const {
    SampleEntry e;
    e.index = s.index;
    e.label = s.label;
    const auto& bk = bank(BankMode::Inhomogeneous);
    const double homdim = grid_.aniso().homogeneous_dimension();
    const double s_hi = 2.0 * cfg_.m;
    const double eta = s_hi - 0.5 * homdim;  // s - homdim/p = t - homdim/r with p=2, r=inf
    if (!(eta > 0.0)) {
        e.accepted = false;
        e.rejected_hypothesis = "2m > (n+2)/2";
        return e;
    }
    const double inf = std::numeric_limits<double>::infinity();
    double ratio = 0.0, prop29 = 0.0;
    bool any = false;
    for (const Field& c : s.f.components) {
        const auto dec = lp_decompose(c, bk);
        if (chain) {
            const double w = sobolev(c);
            if (w <= 1e-300) continue;
            ratio = std::max(ratio, norm_besov(dec, eta, inf, inf) / w);
            prop29 = std::max(prop29, norm_besov(dec, s_hi, 2.0, inf) / w);
        } else {
            const double den = norm_besov(dec, s_hi, 2.0, inf);
            if (den <= 1e-300) continue;
            ratio = std::max(ratio, norm_besov(dec, eta, inf, inf) / den);
        }
        any = true;
    }
    if (!any) {
        e.accepted = false;
        e.rejected_hypothesis = "nonzero sample";
        return e;
    }
    e.lhs = ratio;
    e.c_sample = ratio;
    e.set("eta", eta);
    if (chain) e.set("prop29_ratio", prop29);
    return e;
}

SampleEntry Lab::eval_bernstein(const Sample& s) const {
    SampleEntry e;
    e.index = s.index;
    e.label = s.label;
    const auto& bk = isotropic_bank(BankMode::Homogeneous);
    if (bk.j_max() < 1) {
        e.accepted = false;
        e.rejected_hypothesis = "grid resolves j >= 1";
        return e;
    }
    const Field g_iso(bk.grid(), s.g.values());
    const auto dec = lp_decompose(g_iso, bk);
    const double exponent = 0.5 * grid_.axes();  // (n+1)/2
    const double g_l2 = norm_lp(s.g, 2.0);
    double worst = 0.0;
    int blocks_used = 0;
    for (int j = 1; j <= dec.j_max; ++j) {
        const double l2 = norm_lp(dec.block(j), 2.0);
        if (l2 <= 1e-13 * std::max(g_l2, 1.0)) continue;
        const double r = norm_linf(dec.block(j)) / (std::pow(2.0, exponent * j) * l2);
        worst = std::max(worst, r);
        ++blocks_used;
    }
    if (blocks_used == 0) {
        e.accepted = false;
        e.rejected_hypothesis = "energy in blocks j >= 1";
        return e;
    }
    e.lhs = worst;
    e.c_sample = worst;
    e.set("blocks_used", blocks_used);
    return e;
}

// --- explicit-constant machinery ----------------------------------------------

double dyadic_tail_constant(double gamma) {
    if (!(gamma > 0.0)) throw ConfigError("dyadic tail constant: gamma must be positive");
    return std::sqrt(1.0 / (std::pow(2.0, 2.0 * gamma) - 1.0));
}

double step1_bound(double f02_pointwise, double fplus, double fminus, double gamma, int N) {
    return std::sqrt(2.0 * N + 1.0) * f02_pointwise +
           dyadic_tail_constant(gamma) * std::pow(2.0, -gamma * N) * (fplus + fminus);
}

DyadicCutResult optimize_dyadic_cut(double fplus_plus_fminus, double f02, double gamma, int n_max) {
    if (!(gamma > 0.0 && gamma <= 1.0)) throw ConfigError("optimize_dyadic_cut: gamma must lie in (0,1]");
    if (n_max < 1) throw ConfigError("optimize_dyadic_cut: n_max must be >= 1");
    DyadicCutResult r;
    r.bound_curve.resize(static_cast<size_t>(n_max));
    int best = 1;
    for (int N = 1; N <= n_max; ++N) {
        r.bound_curve[static_cast<size_t>(N - 1)] = step1_bound(f02, fplus_plus_fminus, 0.0, gamma, N);
        if (r.bound_curve[static_cast<size_t>(N - 1)] < r.bound_curve[static_cast<size_t>(best - 1)]) best = N;
    }
    r.n_bruteforce = best;

    if (fplus_plus_fminus <= std::pow(2.0, gamma) * f02) {
        r.n1_branch = true;
        r.n_analytic = 1;
        r.beta = 1.0;
        return r;
    }
    const double L = std::log(fplus_plus_fminus / f02) / (gamma * std::log(2.0));
    // The unique integer in [L - 1/2, L + 1/2).
    int n = static_cast<int>(std::ceil(L - 0.5));
    n = std::max(n, 1);
    r.n_analytic = n;
    r.beta = std::pow(2.0, gamma * (n + 0.5)) * f02 / fplus_plus_fminus;
    return r;
}

double split_inequality_min_c(double x, double y) {
    if (!(x > 0.0) || y < 0.0) throw ConfigError("split inequality: requires x > 0, y >= 0");
    const double lhs = x * std::sqrt(std::log(M_E + y / x));
    if (x <= 1.0) return lhs / (1.0 + x * std::sqrt(std::log(M_E + y)));
    return lhs / (x * std::sqrt(std::log(M_E + y)));
}

SplitScanResult scan_split_inequality(double x_max, double y_max, int nx, int ny) {
    SplitScanResult r;
    const double x_min = 1e-6;
    for (int i = 0; i < nx; ++i) {
        const double x = x_min * std::pow(x_max / x_min, static_cast<double>(i) / (nx - 1));
        for (int j = -1; j < ny; ++j) {
            const double y = j < 0 ? 0.0 : 1e-6 * std::pow(y_max / 1e-6, static_cast<double>(j) / (ny - 1));
            const double c = split_inequality_min_c(x, y);
            ++r.points;
            if (c > r.c_max) {
                r.c_max = c;
                r.worst_x = x;
                r.worst_y = y;
            }
        }
    }
    return r;
}

CaseSplitResult case_split_theorem17(const Sample& s, const Lab& lab) {
    CaseSplitResult r;
    r.w_norm = max_over_components(s.f, [&](const Field& c) { return lab.sobolev(c); });
    r.g_linf = norm_linf(s.g);
    r.case_id = r.w_norm <= 1.0 ? 1 : 2;
    r.x_value = r.case_id == 1 ? r.g_linf : r.g_linf / r.w_norm;
    r.c_self = r.x_value / (1.0 + std::sqrt(std::log(M_E + 1.0 + r.x_value)));
    r.c_final = std::sqrt(log_plus(r.w_norm + r.g_linf)) / (1.0 + log_plus(r.w_norm));
    return r;
}

// --- bounded-domain pipeline ----------------------------------------------------

BoundedPipelineResult eval_bounded(const Field& f_omega, const LabConfig& cfg) {
    BoundedPipelineResult r;
    const Grid& og = f_omega.grid();
    const Box omega = og.box();

    r.entry.lhs = norm_linf(f_omega);
    BmoDiagnostics bdiag;
    r.bmo_part = norm_bmo_on(f_omega, omega, cfg.sampler, &bdiag);
    r.l1_part = norm_lp(f_omega, 1.0);
    r.w_omega = norm_sobolev_parabolic_fd(f_omega, cfg.m, cfg.fd_accuracy);

    const auto ext = extend_to_box(f_omega, cfg.m);
    r.w_extended = norm_sobolev_parabolic_fd(ext.extended, cfg.m, cfg.fd_accuracy);

    const auto [z1, z2] = plateau_boxes(omega);
    const Grid big = embedding_grid(ext.extended.grid(), z2, 0.25);
    const Field embedded = embed_field(ext.extended, big);
    const Field psi = build_plateau_cutoff(z1, z2, big);
    const auto loc = localize(embedded, psi, 0);

    r.w_localized = norm_sobolev_parabolic(loc.product, cfg.m);
    r.g_linf = loc.companion_linf;
    r.slice_mean_correction = loc.slice_mean_correction;
    r.berna_ratio = r.w_omega > 0.0 ? r.w_extended / r.w_omega : 0.0;
    r.nhdn_ratio = r.w_omega > 0.0 ? r.w_localized / r.w_omega : 0.0;
    r.prog_ratio = r.w_omega > 0.0 ? r.g_linf / r.w_omega : 0.0;

    const double psi_bmo = norm_bmo(loc.product, cfg.sampler);
    const double psi_linf = norm_linf(loc.product);
    const double inner_shape = 1.0 + psi_bmo * std::sqrt(log_plus(r.w_localized + r.g_linf));
    r.inner_c = psi_linf / inner_shape;

    const double bar = r.bmo_part + r.l1_part;
    const double shape = 1.0 + bar * std::sqrt(log_plus(r.w_omega));
    r.entry.c_sample = r.entry.lhs / shape;
    r.entry.set("bar_bmo", bar);
    r.entry.set("bmo_part", r.bmo_part);
    r.entry.set("l1_part", r.l1_part);
    r.entry.set("w_omega", r.w_omega);
    r.entry.set("shape", shape);
    r.entry.set("berna_ratio", r.berna_ratio);
    r.entry.set("nhdn_ratio", r.nhdn_ratio);
    r.entry.set("prog_ratio", r.prog_ratio);
    r.entry.set("inner_c", r.inner_c);
    return r;
}

// --- reports ---------------------------------------------------------------------

InequalityReport run_family(const Lab& lab, InequalityId id, const FamilyGenerator& family) {
    const auto start = std::chrono::steady_clock::now();
    InequalityReport report;
    report.inequality = to_string(id);
    for (int i = 0; i < family.count(); ++i) {
        const Sample s = family.make(i);
        report.entries.push_back(lab.eval(id, s));
    }
    report.summary = summarize(report.entries);
    report.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

std::string report_to_json(const InequalityReport& report) {
    nlohmann::json j;
    j["schema_version"] = report.schema_version;
    j["inequality"] = report.inequality;
    if (!report.config_echo.empty()) j["config_echo"] = nlohmann::json::parse(report.config_echo);
    auto& samples = j["per_sample"];
    samples = nlohmann::json::array();
    for (const auto& e : report.entries) {
        nlohmann::json je;
        je["index"] = e.index;
        je["label"] = e.label;
        je["accepted"] = e.accepted;
        if (!e.accepted) je["rejected_hypothesis"] = e.rejected_hypothesis;
        je["lhs"] = e.lhs;
        je["c_sample"] = e.c_sample;
        for (const auto& [k, v] : e.components) je["components"][k] = v;
        samples.push_back(std::move(je));
    }
    j["summary"] = {{"count", report.summary.count},   {"c_max", report.summary.c_max},
                    {"c_median", report.summary.c_median}, {"c_mean", report.summary.c_mean},
                    {"q25", report.summary.q25},       {"q75", report.summary.q75},
                    {"q95", report.summary.q95}};
    j["runtime_seconds"] = report.runtime_seconds;
    return j.dump(2);
}

std::string report_to_csv(const InequalityReport& report) {
    std::ostringstream os;
    os.precision(17);
    os << "index,label,accepted,lhs,c_sample";
    std::vector<std::string> keys;
    for (const auto& e : report.entries)
        for (const auto& [k, v] : e.components)
            if (std::find(keys.begin(), keys.end(), k) == keys.end()) keys.push_back(k);
    for (const auto& k : keys) os << "," << k;
    os << "\n";
    for (const auto& e : report.entries) {
        os << e.index << "," << e.label << "," << (e.accepted ? 1 : 0) << "," << e.lhs << "," << e.c_sample;
        for (const auto& k : keys) {
            os << ",";
            for (const auto& [ck, cv] : e.components)
                if (ck == k) {
                    os << cv;
                    break;
                }
        }
        os << "\n";
    }
    return os.str();
}

}  // namespace plp
