#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <random>

#include "plp/errors.hpp"
#include "plp/field.hpp"
#include "plp/norms.hpp"

using namespace plp;

namespace {

Grid small_grid(int n = 32, double L = 2.0 * M_PI) {
    return Grid({n, n}, Box::cube(2, 0.0, L), Anisotropy::parabolic(1));
}

Field random_field(const Grid& g, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    std::vector<double> v(g.total());
    for (double& x : v) x = gauss(rng);
    return Field(g, std::move(v));
}

Field sampled(const Grid& g, const std::function<double(double, double)>& fn) {
    std::vector<double> v(g.total());
    for (int i = 0; i < g.dim(0); ++i)
        for (int j = 0; j < g.dim(1); ++j)
            v[static_cast<size_t>(i) * g.dim(1) + j] = fn(g.coord(0, i), g.coord(1, j));
    return Field(g, std::move(v));
}

}  // namespace

TEST_CASE("constant field transforms to a pure DC spectrum") {
    const Grid g = small_grid();
    const double c = 3.25;
    const Field f(g, std::vector<double>(g.total(), c));
    const auto& spec = f.spectrum();
    CHECK(spec[0].real() == doctest::Approx(c * static_cast<double>(g.total())));
    double worst = 0.0;
    for (size_t k = 1; k < spec.size(); ++k) worst = std::max(worst, std::abs(spec[k]));
    CHECK(worst <= 1e-13 * std::abs(spec[0]));
}

TEST_CASE("single cosine has exactly two symmetric coefficients") {
    const Grid g = small_grid();
    const Field f = sampled(g, [&](double x, double) { return std::cos(2.0 * M_PI * x / g.box().length(0)); });
    const auto& spec = f.spectrum();
    int nonzero = 0;
    for (size_t k = 0; k < spec.size(); ++k)
        if (std::abs(spec[k]) > 1e-9 * static_cast<double>(g.total())) ++nonzero;
    CHECK(nonzero == 2);
}

TEST_CASE("Parseval and spectral round trip") {
    const Grid g = small_grid();
    const Field f = random_field(g, 1);
    const double phys = norm_lp(f, 2.0);
    double spec_energy = 0.0;
    for (const auto& c : f.spectrum()) spec_energy += std::norm(c);
    const double spectral = std::sqrt(spec_energy * g.cell_volume() / static_cast<double>(g.total()));
    CHECK(phys == doctest::Approx(spectral).epsilon(1e-10));

    const Field back = Field::from_spectrum(g, f.spectrum());
    for (size_t i = 0; i < g.total(); ++i)
        CHECK(back.value(i) == doctest::Approx(f.value(i)).epsilon(1e-12));
}

TEST_CASE("spectral derivatives against analytic oracles") {
    const Grid g = small_grid();
    const double k = 3.0, w = 2.0;
    const Field f = sampled(g, [&](double x, double t) { return std::sin(k * x) * std::sin(w * t); });

    const Field fx = axis_derivative(f, 0);
    const Field expected_x = sampled(g, [&](double x, double t) { return k * std::cos(k * x) * std::sin(w * t); });
    for (size_t i = 0; i < g.total(); ++i)
        CHECK(fx.value(i) == doctest::Approx(expected_x.value(i)).epsilon(1e-10).scale(k));

    // time derivative of a time-constant field vanishes
    const Field fc = sampled(g, [&](double x, double) { return std::sin(x); });
    const Field ft = axis_derivative(fc, 1);
    for (size_t i = 0; i < g.total(); ++i) CHECK(std::abs(ft.value(i)) <= 1e-12);

    // mixed derivative
    DerivativeOrder ord;
    ord.space = {1};
    ord.time = 1;
    const Field fxt = spectral_derivative(f, ord);
    const Field expected_xt =
        sampled(g, [&](double x, double t) { return k * w * std::cos(k * x) * std::cos(w * t); });
    for (size_t i = 0; i < g.total(); ++i)
        CHECK(fxt.value(i) == doctest::Approx(expected_xt.value(i)).epsilon(1e-9).scale(k * w));
}

TEST_CASE("derivative of a constant is zero and linearity holds") {
    const Grid g = small_grid();
    const Field c(g, std::vector<double>(g.total(), 7.0));
    const Field dc = axis_derivative(c, 0);
    for (size_t i = 0; i < g.total(); ++i) CHECK(std::abs(dc.value(i)) <= 1e-12);

    const Field f = random_field(g, 2), h = random_field(g, 3);
    const Field combo = field_add(f, h, 2.0, -3.0);
    const Field d_combo = axis_derivative(combo, 1);
    const Field d_sep = field_add(axis_derivative(f, 1), axis_derivative(h, 1), 2.0, -3.0);
    const double scale = norm_linf(d_sep) + 1.0;
    for (size_t i = 0; i < g.total(); ++i)
        CHECK(std::abs(d_combo.value(i) - d_sep.value(i)) <= 1e-12 * scale);
}

TEST_CASE("mean_subtract") {
    const Grid g = small_grid();
    const Field five(g, std::vector<double>(g.total(), 5.0));
    CHECK(norm_linf(mean_subtract(five)) <= 1e-13);

    const Field f = sampled(g, [](double x, double) { return 3.0 + std::cos(x); });
    const Field ms = mean_subtract(f);
    const Field expect = sampled(g, [](double x, double) { return std::cos(x); });
    for (size_t i = 0; i < g.total(); ++i)
        CHECK(ms.value(i) == doctest::Approx(expect.value(i)).epsilon(1e-12));

    const Field r = random_field(g, 4);
    const Field rms = mean_subtract(r);
    CHECK(std::abs(grid_mean(rms)) <= 1e-14 * std::max(1.0, norm_linf(r)));
    const double mean = grid_mean(r);
    for (size_t i = 0; i < g.total(); ++i)
        CHECK(rms.value(i) + mean == doctest::Approx(r.value(i)).epsilon(1e-12));
}

TEST_CASE("antiderivative inverts the spectral derivative") {
    const Grid g = small_grid();
    const double k = 2.0;
    const Field f = sampled(g, [&](double x, double) { return std::cos(k * x); });
    const Field F = antiderivative(f, 0);
    const Field expect = sampled(g, [&](double x, double) { return std::sin(k * x) / k; });
    for (size_t i = 0; i < g.total(); ++i)
        CHECK(F.value(i) == doctest::Approx(expect.value(i)).epsilon(1e-10));

    const Field zero = Field::zeros(g);
    CHECK(norm_linf(antiderivative(zero, 0)) == 0.0);

    // round trip on a slice-mean-free random field
    Field slice_free = axis_derivative(random_field(g, 6), 0);
    const Field rt = axis_derivative(antiderivative(slice_free, 0), 0);
    const double scale = norm_linf(slice_free);
    for (size_t i = 0; i < g.total(); ++i)
        CHECK(std::abs(rt.value(i) - slice_free.value(i)) <= 1e-9 * scale);

    // nonvanishing slice means are a data error naming the worst slice
    const Field bad(g, std::vector<double>(g.total(), 1.0));
    CHECK_THROWS_AS(antiderivative(bad, 0), DataError);
    try {
        antiderivative(bad, 0);
    } catch (const DataError& e) {
        CHECK(std::string(e.what()).find("slice") != std::string::npos);
    }
}

TEST_CASE("non-finite samples rejected") {
    const Grid g = small_grid(4, 1.0);
    std::vector<double> v(g.total(), 0.0);
    v[3] = std::nan("");
    CHECK_THROWS_AS(Field(g, std::move(v)), DataError);
}

TEST_CASE("binary round trip is bit exact; csv close") {
    const Grid g = small_grid(16);
    const Field f = random_field(g, 9);
    const auto dir = std::filesystem::temp_directory_path() / "plp_field_io";
    std::filesystem::create_directories(dir);

    const std::string bin = (dir / "f.bin").string();
    write_field(f, bin, "bin");
    const Field fb = read_field(bin);
    CHECK(fb.grid().same_layout(g));
    CHECK(std::memcmp(fb.values().data(), f.values().data(), g.total() * sizeof(double)) == 0);

    const std::string csv = (dir / "f.csv").string();
    write_field(f, csv, "csv");
    const Field fc = read_field(csv);
    for (size_t i = 0; i < g.total(); ++i)
        CHECK(fc.value(i) == doctest::Approx(f.value(i)).epsilon(1e-15));

    CHECK_THROWS_AS(read_field((dir / "missing.bin").string()), DataError);
    CHECK_THROWS_AS(write_field(f, bin, "xml"), ConfigError);
}

TEST_CASE("grid dyadic range and invariants") {
    CHECK_THROWS_AS(Grid({3, 4}, Box::unit(2), Anisotropy::parabolic(1)), ConfigError);
    CHECK_THROWS_AS(Grid({4, 5}, Box::unit(2), Anisotropy::parabolic(1)), ConfigError);

    // box (0, 4pi)^2 at 256^2: scales {-2, ..., 2}
    const Grid g({256, 256}, Box::cube(2, 0.0, 4.0 * M_PI), Anisotropy::parabolic(1));
    const auto [jlo, jhi] = g.dyadic_range();
    CHECK(jlo == -2);
    CHECK(jhi == 2);
}
