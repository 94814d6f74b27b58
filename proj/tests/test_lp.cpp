#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "plp/errors.hpp"
#include "plp/lp.hpp"
#include "plp/norms.hpp"

using namespace plp;

namespace {

Grid lab_grid(int n, double L = 4.0 * M_PI) {
    return Grid({n, n}, Box::cube(2, 0.0, L), Anisotropy::parabolic(1));
}

// O(N^2) direct DFT of a tiny grid, no FFT machinery involved.
std::vector<Complex> direct_dft(const Grid& g, const std::vector<double>& v) {
    const int nx = g.dim(0), nt = g.dim(1);
    std::vector<Complex> out(g.total());
    for (int k = 0; k < nx; ++k)
        for (int l = 0; l < nt; ++l) {
            Complex acc(0.0, 0.0);
            for (int i = 0; i < nx; ++i)
                for (int j = 0; j < nt; ++j) {
                    const double ang = -2.0 * M_PI * (static_cast<double>(k) * i / nx + static_cast<double>(l) * j / nt);
                    acc += v[static_cast<size_t>(i) * nt + j] * std::polar(1.0, ang);
                }
            out[static_cast<size_t>(k) * nt + l] = acc;
        }
    return out;
}

std::vector<double> direct_idft_real(const Grid& g, const std::vector<Complex>& s) {
    const int nx = g.dim(0), nt = g.dim(1);
    std::vector<double> out(g.total());
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < nt; ++j) {
            Complex acc(0.0, 0.0);
            for (int k = 0; k < nx; ++k)
                for (int l = 0; l < nt; ++l) {
                    const double ang = 2.0 * M_PI * (static_cast<double>(k) * i / nx + static_cast<double>(l) * j / nt);
                    acc += s[static_cast<size_t>(k) * nt + l] * std::polar(1.0, ang);
                }
            out[static_cast<size_t>(i) * nt + j] = acc.real() / static_cast<double>(g.total());
        }
    return out;
}

}  // namespace

TEST_CASE("cutoff transition values") {
    const CutoffProfile chi = build_cutoff(2);
    CHECK(chi(0.0) == 1.0);
    CHECK(chi(0.5) == 1.0);
    CHECK(chi(1.0) == 1.0);
    CHECK(chi(2.0) == 0.0);
    CHECK(chi(3.0) == 0.0);
    CHECK(chi(1.5) == doctest::Approx(0.5).epsilon(1e-15));  // bump-quotient symmetry
    for (double r = 1.0; r <= 2.0; r += 0.01) {
        CHECK(chi(r) >= 0.0);
        CHECK(chi(r) <= 1.0);
        CHECK(chi(r) <= chi(r - 0.01) + 1e-15);  // monotone nonincreasing
    }
    // smooth flattening at the junctions
    const double eps = 1e-3;
    CHECK(std::abs(chi(1.0 + eps) - chi(1.0)) / eps < 1e-10);
    CHECK(std::abs(chi(2.0) - chi(2.0 - eps)) / eps < 1e-10);
    CHECK_THROWS_AS(build_cutoff(0), ConfigError);
}

TEST_CASE("bank partition of unity and supports") {
    const Grid g = lab_grid(128);
    const CutoffProfile chi(2);
    const DyadicSymbolBank homog(g, chi, BankMode::Homogeneous);
    CHECK(homog.j_min() == -2);
    CHECK(homog.j_max() == 1);
    CHECK(homog.partition_residual() <= 1e-12);

    const DyadicSymbolBank inhomog(g, chi, BankMode::Inhomogeneous);
    CHECK(inhomog.j_min() == 0);
    CHECK(inhomog.partition_residual() <= 1e-12);
    // at xi = 0 only theta contributes, exactly 1
    double at_zero = 0.0;
    for (int j = inhomog.j_min(); j <= inhomog.j_max(); ++j) at_zero += inhomog.multiplier(j)[0];
    CHECK(at_zero == 1.0);

    const auto& rho = homog.freq_norms();
    for (int j = homog.j_min(); j <= homog.j_max(); ++j) {
        const auto& m = homog.multiplier(j);
        const double lo = std::pow(2.0, j - 1), hi = std::pow(2.0, j + 1);
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (m[i] != 0.0) {
                CHECK(rho[i] >= lo - 1e-12);
                CHECK(rho[i] <= hi + 1e-12);
            }
            // telescoping construction
            const double expect = chi(rho[i] / std::pow(2.0, j)) - chi(rho[i] / std::pow(2.0, j - 1));
            CHECK(m[i] == doctest::Approx(expect).epsilon(1e-15));
        }
    }

    // at |xi|_a exactly 2^{j0} only member j0 is alive
    for (std::size_t i = 0; i < rho.size(); ++i) {
        for (int j0 = homog.j_min(); j0 <= homog.j_max(); ++j0) {
            if (std::abs(rho[i] - std::pow(2.0, j0)) < 1e-14) {
                for (int j = homog.j_min(); j <= homog.j_max(); ++j) {
                    if (j == j0)
                        CHECK(homog.multiplier(j)[i] == doctest::Approx(1.0).epsilon(1e-14));
                    else
                        CHECK(std::abs(homog.multiplier(j)[i]) <= 1e-14);
                }
            }
        }
    }

    // blocks with |j - j'| >= 2 have disjoint spectral supports
    for (int j = homog.j_min(); j <= homog.j_max(); ++j)
        for (int jp = j + 2; jp <= homog.j_max(); ++jp) {
            const auto& a = homog.multiplier(j);
            const auto& b = homog.multiplier(jp);
            for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] * b[i] == 0.0);
        }
}

TEST_CASE("grid too coarse for any scale is a configuration error") {
    // a wildly elongated time axis leaves no annulus both inside Nyquist and
    // above the fundamental frequency
    const Grid g({4, 4}, Box({0.0, 0.0}, {2.0 * M_PI, 2.0 * M_PI * 1e6}), Anisotropy::parabolic(1));
    CHECK(g.dyadic_range().first > g.dyadic_range().second);
    CHECK_THROWS_AS(build_symbol_bank(g, CutoffProfile(2), BankMode::Homogeneous), ConfigError);
}

TEST_CASE("decomposition against a direct DFT-multiply oracle on 8x8") {
    const Grid g = lab_grid(8, 2.0 * M_PI);
    // single mode at |xi|_a = 1 = 2^0
    std::vector<double> v(g.total());
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) v[static_cast<size_t>(i) * 8 + j] = std::cos(g.coord(0, i));
    const Field f(g, std::move(v));
    const DyadicSymbolBank bank(g, CutoffProfile(2), BankMode::Homogeneous);
    const auto dec = lp_decompose(f, bank);

    const auto fhat = direct_dft(g, f.values());
    int nonzero_blocks = 0;
    for (int j = dec.j_min; j <= dec.j_max; ++j) {
        std::vector<Complex> prod(fhat.size());
        const auto& m = bank.multiplier(j);
        for (std::size_t i = 0; i < fhat.size(); ++i) prod[i] = m[i] * fhat[i];
        const auto expect = direct_idft_real(g, prod);
        double worst = 0.0, amp = 0.0;
        for (std::size_t i = 0; i < expect.size(); ++i) {
            worst = std::max(worst, std::abs(expect[i] - dec.block(j).value(i)));
            amp = std::max(amp, std::abs(expect[i]));
        }
        CHECK(worst <= 1e-10);
        if (amp > 1e-10) ++nonzero_blocks;
    }
    CHECK(nonzero_blocks >= 1);
    CHECK(nonzero_blocks <= 3);

    Field sum = Field::zeros(g);
    for (int j = dec.j_min; j <= dec.j_max; ++j) sum = field_add(sum, dec.block(j));
    sum = field_add(sum, dec.residual);
    for (std::size_t i = 0; i < g.total(); ++i)
        CHECK(sum.value(i) + dec.dc == doctest::Approx(f.value(i)).epsilon(1e-10));

    const Grid other = lab_grid(16, 2.0 * M_PI);
    CHECK_THROWS_AS(lp_decompose(Field::zeros(other), bank), StructuralError);
}

TEST_CASE("constant field: homogeneous blocks vanish, inhomogeneous keeps it at j=0") {
    const Grid g = lab_grid(32);
    const Field c(g, std::vector<double>(g.total(), 2.5));

    const DyadicSymbolBank homog(g, CutoffProfile(2), BankMode::Homogeneous);
    const auto dh = lp_decompose(c, homog);
    for (int j = dh.j_min; j <= dh.j_max; ++j) CHECK(norm_linf(dh.block(j)) <= 1e-13);
    CHECK(dh.dc == doctest::Approx(2.5).epsilon(1e-14));

    const DyadicSymbolBank inhomog(g, CutoffProfile(2), BankMode::Inhomogeneous);
    const auto di = lp_decompose(c, inhomog);
    for (std::size_t i = 0; i < g.total(); ++i)
        CHECK(di.block(0).value(i) == doctest::Approx(2.5).epsilon(1e-13));
}

TEST_CASE("band-limited mean-zero fields reconstruct to 1e-10") {
    const Grid g = lab_grid(64);
    const DyadicSymbolBank bank(g, CutoffProfile(2), BankMode::Homogeneous);
    std::mt19937_64 rng(17);
    std::normal_distribution<double> gauss;
    std::vector<Complex> spec(g.total(), Complex(0, 0));
    for (std::size_t i = 0; i < g.total(); ++i) {
        const double rho = g.freq_aniso_norm(i);
        if (rho >= std::pow(2.0, bank.j_min()) && rho <= std::pow(2.0, bank.j_max()))
            spec[i] = Complex(gauss(rng), gauss(rng));
    }
    // real part of the inverse enforces the Hermitian part; retransform
    Field f0 = Field::from_spectrum(g, spec);
    const Field f = mean_subtract(Field(g, f0.values()));
    const auto dec = lp_decompose(f, bank);
    CHECK(dec.residual_l2 <= 1e-12 * norm_lp(f, 2.0));
    Field sum = Field::zeros(g);
    for (int j = dec.j_min; j <= dec.j_max; ++j) sum = field_add(sum, dec.block(j));
    const double scale = norm_linf(f);
    for (std::size_t i = 0; i < g.total(); ++i)
        CHECK(std::abs(sum.value(i) - f.value(i)) <= 1e-10 * scale);
}

TEST_CASE("dilation covariance shifts block indices by one") {
    const Grid g = lab_grid(64);
    const DyadicSymbolBank bank(g, CutoffProfile(2), BankMode::Homogeneous);
    std::mt19937_64 rng(23);
    std::normal_distribution<double> gauss;
    std::vector<Complex> spec(g.total(), Complex(0, 0));
    for (std::size_t i = 0; i < g.total(); ++i) {
        const double rho = g.freq_aniso_norm(i);
        if (rho >= std::pow(2.0, bank.j_min() + 1) && rho <= std::pow(2.0, bank.j_max() - 1))
            spec[i] = Complex(gauss(rng), gauss(rng));
    }
    Field f0 = Field::from_spectrum(g, spec);
    const Field f = mean_subtract(Field(g, f0.values()));

    // F(z) = f(2^a z) lives on the box with sides L_i / 2^{a_i}, same samples
    std::vector<double> lo(2), hi(2);
    for (int ax = 0; ax < 2; ++ax) {
        const double s = std::pow(2.0, -g.aniso().weight(ax));
        lo[static_cast<size_t>(ax)] = g.box().lo[static_cast<size_t>(ax)] * s;
        hi[static_cast<size_t>(ax)] = g.box().hi[static_cast<size_t>(ax)] * s;
    }
    const Grid gd(g.dims(), Box(lo, hi), g.aniso());
    const Field fd(gd, f.values());
    const DyadicSymbolBank bank_d(gd, CutoffProfile(2), BankMode::Homogeneous);
    const auto dec = lp_decompose(f, bank);
    const auto dec_d = lp_decompose(fd, bank_d);
    CHECK(bank_d.j_min() == bank.j_min() + 1);
    CHECK(bank_d.j_max() == bank.j_max() + 1);

    const double scale = norm_linf(f) + 1e-300;
    for (int j = std::max(dec.j_min + 1, dec_d.j_min); j <= std::min(dec.j_max + 1, dec_d.j_max); ++j) {
        const Field& a = dec_d.block(j);
        const Field& b = dec.block(j - 1);
        for (std::size_t i = 0; i < g.total(); ++i)
            CHECK(std::abs(a.value(i) - b.value(i)) <= 1e-8 * scale);
    }
}

TEST_CASE("derivative kernels: scale factors, self-similarity, L1 invariance") {
    const Grid g = lab_grid(64);
    const DyadicSymbolBank bank(g, CutoffProfile(2), BankMode::Homogeneous);

    const auto kx = derivative_kernel_bank(bank, 0);
    CHECK(kx.scale_factor(0) == 1.0);  // j=0 spatial: d phi = Phi itself
    const auto kt = derivative_kernel_bank(bank, 1);
    CHECK(kt.scale_factor(1) == 4.0);  // time axis at j=1: 2^{2j}
    CHECK(kt.scale_factor(0) == 1.0);

    CHECK(kx.self_similarity_error <= 1e-8);
    CHECK(kt.self_similarity_error <= 1e-8);
    CHECK_THROWS_AS(derivative_kernel_bank(bank, 5), StructuralError);

    // change of variables makes |Phi_j|_{L1} independent of j; the comparison
    // grid dilates with the kernel so each is sampled at its own scale
    const Field K0 = materialize_kernel(g.aniso(), bank.profile(), 0, 0, 256, 16.0, true);
    const Field K1 = materialize_kernel(g.aniso(), bank.profile(), 1, 0, 256, 16.0, true);
    const Field Km1 = materialize_kernel(g.aniso(), bank.profile(), -1, 0, 256, 16.0, true);
    const double l10 = norm_lp(K0, 1.0), l11 = norm_lp(K1, 1.0), l1m = norm_lp(Km1, 1.0);
    CHECK(std::abs(l11 - l10) <= 1e-6 * l10);
    CHECK(std::abs(l1m - l10) <= 1e-6 * l10);
}

TEST_CASE("radial majorant: definition, monotonicity, tail control") {
    const Field K = materialize_kernel(Anisotropy::parabolic(1), CutoffProfile(2), 0, 0, 128, 16.0);
    const auto maj = radial_majorant(K);
    CHECK(maj.h0 == doctest::Approx(norm_linf(K)).epsilon(1e-14));
    CHECK(maj.h[0] == maj.h0);
    for (std::size_t k = 0; k + 1 < maj.h.size(); ++k) CHECK(maj.h[k] >= maj.h[k + 1] - 1e-300);
    CHECK(maj.sup_tail_weighted < HUGE_VAL);
    CHECK(maj.integral_rn_h > 0.0);
    CHECK(maj.integral_rn_h < HUGE_VAL);

    // brute-force double loop agreement on a 64^2 grid
    const Field K64 = materialize_kernel(Anisotropy::parabolic(1), CutoffProfile(2), 0, 0, 64, 16.0);
    const auto maj64 = radial_majorant(K64);
    const Grid& gk = K64.grid();
    for (std::size_t k = 0; k < maj64.r.size(); k += 17) {
        double brute = 0.0;
        for (int i = 0; i < gk.dim(0); ++i)
            for (int j = 0; j < gk.dim(1); ++j) {
                const double x = gk.coord(0, i), t = gk.coord(1, j);
                if (std::hypot(x, t) >= maj64.r[k])
                    brute = std::max(brute, std::abs(K64.value(static_cast<size_t>(i) * gk.dim(1) + j)));
            }
        CHECK(maj64.h[k] == doctest::Approx(brute).epsilon(1e-8));
    }
}
