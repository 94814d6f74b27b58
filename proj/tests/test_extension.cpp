#include <doctest.h>

#include <cmath>
#include <functional>

#include "plp/errors.hpp"
#include "plp/extension.hpp"
#include "plp/norms.hpp"

using namespace plp;

namespace {

Grid omega_grid(int n, double T = 1.0) {
    return Grid({n, n}, Box({0.0, 0.0}, {1.0, T}), Anisotropy::parabolic(1), 0.5);
}

Field sampled(const Grid& g, const std::function<double(double, double)>& fn) {
    std::vector<double> v(g.total());
    for (int i = 0; i < g.dim(0); ++i)
        for (int j = 0; j < g.dim(1); ++j)
            v[static_cast<size_t>(i) * g.dim(1) + j] = fn(g.coord(0, i), g.coord(1, j));
    return Field(g, std::move(v));
}

}  // namespace

TEST_CASE("reflection coefficients solve the moment system") {
    const auto k1 = extension_coefficients(1);
    CHECK(k1.cs.size() == 1);
    CHECK(k1.cs[0] == doctest::Approx(1.0).epsilon(1e-14));

    const auto k2 = extension_coefficients(2);
    CHECK(k2.cs[0] == doctest::Approx(-3.0).epsilon(1e-12));
    CHECK(k2.cs[1] == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(k2.lambdas[0] == 1.0);
    CHECK(k2.lambdas[1] == 0.5);

    for (int K = 1; K <= 8; ++K) {
        const auto c = extension_coefficients(K);
        // independent evaluation of every moment equation
        for (int k = 0; k < K; ++k) {
            double lhs = 0.0;
            for (int j = 0; j < K; ++j) lhs += c.cs[static_cast<size_t>(j)] * std::pow(-c.lambdas[static_cast<size_t>(j)], k);
            CHECK(lhs == doctest::Approx(1.0).epsilon(1e-10));
        }
        CHECK(c.residual <= 1e-10);
        CHECK(c.condition_estimate >= 1.0);
        // lambdas strictly decreasing
        for (int j = 1; j < K; ++j) CHECK(c.lambdas[static_cast<size_t>(j)] < c.lambdas[static_cast<size_t>(j - 1)]);
    }
    CHECK_THROWS_AS(extension_coefficients(0), ConfigError);
    CHECK_THROWS_AS(extension_coefficients(13), ConfigError);
}

TEST_CASE("extension reproduces polynomials through order 2m-1") {
    const Grid og = omega_grid(64);
    // m=2: spatial K=4 matches derivatives through order 3
    for (int k = 0; k <= 3; ++k) {
        const Field f = sampled(og, [&](double x, double) { return std::pow(x, k); });
        const auto res = extend_to_box(f, 2);
        const Grid& eg = res.extended.grid();
        double worst = 0.0;
        for (int i = 0; i < eg.dim(0); ++i) {
            const double x = eg.coord(0, i);
            if (x >= -1.0 && x < 2.0) {
                const double want = std::pow(x, k);
                for (int j = 0; j < eg.dim(1); ++j) {
                    const double got = res.extended.value(static_cast<size_t>(i) * eg.dim(1) + j);
                    worst = std::max(worst, std::abs(got - want));
                }
            }
        }
        CHECK(worst <= 1e-9);
    }

    // f == 1 extends to 1 for any m (k=0 moment condition)
    const Field one(og, std::vector<double>(og.total(), 1.0));
    const auto res1 = extend_to_box(one, 1);
    CHECK(norm_linf(res1.extended) == doctest::Approx(1.0).epsilon(1e-12));
    double lo = 2.0, hi = 0.0;
    for (double v : res1.extended.values()) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    CHECK(lo == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(hi == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("extension keeps the original samples and triples the box") {
    const Grid og = omega_grid(32);
    const Field f = sampled(og, [](double x, double t) { return std::sin(3.0 * x) + t * t; });
    const auto res = extend_to_box(f, 1);
    const Grid& eg = res.extended.grid();
    CHECK(eg.dim(0) == 96);
    CHECK(eg.dim(1) == 96);
    CHECK(eg.box().lo[0] == doctest::Approx(-1.0));
    CHECK(eg.box().hi[0] == doctest::Approx(2.0));
    CHECK(eg.box().lo[1] == doctest::Approx(-1.0));
    CHECK(eg.box().hi[1] == doctest::Approx(2.0));
    for (int i = 0; i < og.dim(0); ++i)
        for (int j = 0; j < og.dim(1); ++j) {
            const double orig = f.value(static_cast<size_t>(i) * og.dim(1) + j);
            const double ext =
                res.extended.value(static_cast<size_t>(i + 32) * static_cast<size_t>(eg.dim(1)) + (j + 32));
            CHECK(ext == doctest::Approx(orig).epsilon(1e-14));
        }
    // time axis used K = m = 1: even reflection, f~(x, -t) = f(x, t)
    const int jn = 31;  // t = -eg.coord reflection partner of t index 32+31... check mirror pair
    const double below = res.extended.value(static_cast<size_t>(40 + 32) * 96 + 31);
    const double above = res.extended.value(static_cast<size_t>(40 + 32) * 96 + 32);
    CHECK(below == doctest::Approx(above).epsilon(1e-9));
    (void)jn;
}

TEST_CASE("axis order independence") {
    const Grid og = omega_grid(48);
    const Field f = sampled(og, [](double x, double t) { return std::cos(2.0 * x + t) + x * t; });
    const int m = 1, degree = 2 * m + 1;
    const auto cs = extension_coefficients(2 * m);
    const auto ct = extension_coefficients(m);
    const Field xt = extend_one_axis(extend_one_axis(f, 0, cs, degree), 1, ct, degree);
    const Field tx = extend_one_axis(extend_one_axis(f, 1, ct, degree), 0, cs, degree);
    REQUIRE(xt.grid().same_layout(tx.grid()));
    const double scale = norm_linf(xt);
    for (std::size_t i = 0; i < xt.grid().total(); ++i)
        CHECK(std::abs(xt.value(i) - tx.value(i)) <= 1e-10 * scale);
}

TEST_CASE("plateau cutoff is 1 on Z1, 0 outside Z2, in [0,1]") {
    const Grid og = omega_grid(32);
    const Field f = sampled(og, [](double x, double t) { return x + t; });
    const auto res = extend_to_box(f, 1);
    const auto [z1, z2] = plateau_boxes(og.box());
    const Grid big = embedding_grid(res.extended.grid(), z2, 0.25);
    const Field psi = build_plateau_cutoff(z1, z2, big);

    for (std::size_t lin = 0; lin < big.total(); ++lin) {
        CHECK(psi.value(lin) >= 0.0);
        CHECK(psi.value(lin) <= 1.0);
    }
    // center of Omega_T
    std::vector<int> cidx(2);
    for (int ax = 0; ax < 2; ++ax)
        cidx[static_cast<size_t>(ax)] =
            static_cast<int>(std::round((0.5 - big.box().lo[static_cast<size_t>(ax)]) / big.spacing(ax) - 0.5));
    CHECK(psi.value(big.linear(cidx)) == 1.0);
    // corners of the embedding box lie outside Z2
    CHECK(psi.value(0) == 0.0);
    CHECK(psi.value(big.total() - 1) == 0.0);

    CHECK_THROWS_AS(build_plateau_cutoff(z2, z1, big), ConfigError);
}

TEST_CASE("embedding grid aligns lattices and pads beyond the support") {
    const Grid og = omega_grid(32);
    const Field f = sampled(og, [](double x, double t) { return std::sin(x) * std::cos(t); });
    const auto res = extend_to_box(f, 1);
    const auto [z1, z2] = plateau_boxes(og.box());
    const Grid big = embedding_grid(res.extended.grid(), z2, 0.25);
    for (int ax = 0; ax < 2; ++ax) {
        CHECK(big.spacing(ax) == doctest::Approx(og.spacing(ax)).epsilon(1e-12));
        CHECK(big.box().lo[static_cast<size_t>(ax)] <=
              z2.lo[static_cast<size_t>(ax)] - 0.25 * z2.length(ax) + 1e-9);
        CHECK(big.box().hi[static_cast<size_t>(ax)] >=
              z2.hi[static_cast<size_t>(ax)] + 0.25 * z2.length(ax) - 1e-9);
        CHECK(big.dim(ax) % 2 == 0);
    }
    const Field emb = embed_field(res.extended, big);
    // samples survive the embedding where the grids coincide
    const Grid& eg = res.extended.grid();
    const double x0 = eg.coord(0, 5), t0 = eg.coord(1, 7);
    const int bi = static_cast<int>(std::round((x0 - big.box().lo[0]) / big.spacing(0) - 0.5));
    const int bj = static_cast<int>(std::round((t0 - big.box().lo[1]) / big.spacing(1) - 0.5));
    CHECK(emb.value(static_cast<size_t>(bi) * big.dim(1) + bj) ==
          res.extended.value(static_cast<size_t>(5) * eg.dim(1) + 7));
}

TEST_CASE("localization and the antiderivative companion") {
    const Grid og = omega_grid(128);
    // a smooth bump well inside Omega_T
    const Field f = sampled(og, [](double x, double t) {
        const double dx = x - 0.5, dt = t - 0.5;
        return std::exp(-30.0 * (dx * dx + dt * dt));
    });
    const auto res = extend_to_box(f, 1);
    const auto [z1, z2] = plateau_boxes(og.box());
    const Grid big = embedding_grid(res.extended.grid(), z2, 0.25);
    const Field emb = embed_field(res.extended, big);
    const Field psi = build_plateau_cutoff(z1, z2, big);

    // psi == 1 everywhere makes the product the identity
    const Field ones(big, std::vector<double>(big.total(), 1.0));
    const auto loc1 = localize(emb, ones, 0);
    for (std::size_t i = 0; i < big.total(); ++i) CHECK(loc1.product.value(i) == emb.value(i));

    const auto loc0 = localize(Field::zeros(big), psi, 0);
    CHECK(norm_linf(loc0.product) == 0.0);
    CHECK(norm_linf(loc0.companion) == 0.0);

    const auto loc = localize(emb, psi, 0);
    CHECK(norm_linf(loc.product) <= norm_linf(emb) * (1.0 + 1e-12));
    CHECK(loc.companion_linf == doctest::Approx(norm_linf(loc.companion)));

    // cumulative piecewise-cubic quadrature oracle, compared up to a
    // slice constant
    const Grid& g = big;
    const int nx = g.dim(0), nt = g.dim(1);
    const double h = g.spacing(0);
    std::vector<double> corrected(g.total());
    for (int j = 0; j < nt; ++j) {
        double mean = 0.0;
        for (int i = 0; i < nx; ++i) mean += loc.product.value(static_cast<size_t>(i) * nt + j);
        mean /= nx;
        for (int i = 0; i < nx; ++i)
            corrected[static_cast<size_t>(i) * nt + j] = loc.product.value(static_cast<size_t>(i) * nt + j) - mean;
    }
    double worst = 0.0;
    for (int j = 0; j < nt; ++j) {
        // integral of the cubic through 4 consecutive samples over the middle cell
        std::vector<double> acc(static_cast<size_t>(nx), 0.0);
        double run = 0.0;
        for (int i = 0; i + 1 < nx; ++i) {
            const int w0 = std::clamp(i - 1, 0, nx - 4);
            const double y0 = corrected[static_cast<size_t>(w0) * nt + j];
            const double y1 = corrected[static_cast<size_t>(w0 + 1) * nt + j];
            const double y2 = corrected[static_cast<size_t>(w0 + 2) * nt + j];
            const double y3 = corrected[static_cast<size_t>(w0 + 3) * nt + j];
            const double u0 = i - w0, u1 = u0 + 1.0;  // integrate the Lagrange cubic on [u0, u1]
            auto I = [&](double u) {
                const double c0 = -(u - 1) * (u - 2) * (u - 3) / 6.0;
                (void)c0;
                // antiderivatives of the four Lagrange basis polynomials on nodes 0,1,2,3
                const double u2 = u * u, u3 = u2 * u, u4 = u3 * u;
                const double A0 = -(u4 / 4.0 - 2.0 * u3 + 11.0 * u2 / 2.0 - 6.0 * u) / 6.0;
                const double A1 = (u4 / 4.0 - 5.0 * u3 / 3.0 + 3.0 * u2) / 2.0;
                const double A2 = -(u4 / 4.0 - 4.0 * u3 / 3.0 + 3.0 * u2 / 2.0) / 2.0;
                const double A3 = (u4 / 4.0 - u3 + u2) / 6.0;
                return A0 * y0 + A1 * y1 + A2 * y2 + A3 * y3;
            };
            run += h * (I(u1) - I(u0));
            acc[static_cast<size_t>(i + 1)] = run;
        }
        // align both antiderivatives to slice mean zero
        double m_acc = 0.0, m_g = 0.0;
        for (int i = 0; i < nx; ++i) {
            m_acc += acc[static_cast<size_t>(i)];
            m_g += loc.companion.value(static_cast<size_t>(i) * nt + j);
        }
        m_acc /= nx;
        m_g /= nx;
        for (int i = 0; i < nx; ++i)
            worst = std::max(worst, std::abs((acc[static_cast<size_t>(i)] - m_acc) -
                                             (loc.companion.value(static_cast<size_t>(i) * nt + j) - m_g)));
    }
    CHECK(worst <= 1e-6);
}

TEST_CASE("extension rejects non-cell-centered grids") {
    const Grid periodic({32, 32}, Box::unit(2), Anisotropy::parabolic(1), 0.0);
    CHECK_THROWS_AS(extend_to_box(Field::zeros(periodic), 1), StructuralError);
}
