#include "plp/field.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "plp/errors.hpp"

namespace plp {

namespace {

// One cached FFTW plan pair (and its aligned buffers) per grid shape.
struct PlanEntry {
    fftw_complex* in = nullptr;
    fftw_complex* out = nullptr;
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
    std::size_t n = 0;

    ~PlanEntry() {
        if (fwd) fftw_destroy_plan(fwd);
        if (bwd) fftw_destroy_plan(bwd);
        if (in) fftw_free(in);
        if (out) fftw_free(out);
    }
};

PlanEntry& plans_for(const std::vector<int>& dims) {
    static std::map<std::vector<int>, std::unique_ptr<PlanEntry>> cache;
    auto it = cache.find(dims);
    if (it != cache.end()) return *it->second;

    auto entry = std::make_unique<PlanEntry>();
    std::size_t n = 1;
    for (int d : dims) n *= static_cast<std::size_t>(d);
    entry->n = n;
    entry->in = fftw_alloc_complex(n);
    entry->out = fftw_alloc_complex(n);
    entry->fwd = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), entry->in, entry->out,
                               FFTW_FORWARD, FFTW_ESTIMATE);
    entry->bwd = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), entry->in, entry->out,
                               FFTW_BACKWARD, FFTW_ESTIMATE);
    if (!entry->fwd || !entry->bwd) throw ConfigError("fftw plan creation failed");
    auto& ref = *entry;
    cache.emplace(dims, std::move(entry));
    return ref;
}

std::vector<Complex> dft_forward(const Grid& g, const std::vector<double>& values) {
    PlanEntry& p = plans_for(g.dims());
    for (std::size_t i = 0; i < p.n; ++i) {
        p.in[i][0] = values[i];
        p.in[i][1] = 0.0;
    }
    fftw_execute(p.fwd);
    std::vector<Complex> spec(p.n);
    for (std::size_t i = 0; i < p.n; ++i) spec[i] = Complex(p.out[i][0], p.out[i][1]);
    return spec;
}

std::vector<double> dft_inverse_real(const Grid& g, const std::vector<Complex>& spec) {
    PlanEntry& p = plans_for(g.dims());
    for (std::size_t i = 0; i < p.n; ++i) {
        p.in[i][0] = spec[i].real();
        p.in[i][1] = spec[i].imag();
    }
    fftw_execute(p.bwd);
    const double inv = 1.0 / static_cast<double>(p.n);
    std::vector<double> values(p.n);
    for (std::size_t i = 0; i < p.n; ++i) values[i] = p.out[i][0] * inv;
    return values;
}

void check_finite(const std::vector<double>& v) {
    for (double x : v)
        if (!std::isfinite(x)) throw DataError("field: non-finite sample");
}

// Iterate spectral indices along one axis given fixed other-axis indices.
template <typename F>
void for_each_mode(const Grid& g, F&& body) {
    const std::size_t n = g.total();
    std::vector<int> idx(static_cast<size_t>(g.axes()), 0);
    for (std::size_t lin = 0; lin < n; ++lin) {
        body(lin, idx);
        for (int ax = g.axes() - 1; ax >= 0; --ax) {
            if (++idx[static_cast<size_t>(ax)] < g.dim(ax)) break;
            idx[static_cast<size_t>(ax)] = 0;
        }
    }
}

}  // namespace

Field::Field(Grid grid, std::vector<double> values) : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != grid_.total()) throw StructuralError("field: value count does not match grid");
    check_finite(values_);
}

Field Field::zeros(const Grid& grid) { return Field(grid, std::vector<double>(grid.total(), 0.0)); }

Field Field::from_spectrum(const Grid& grid, const std::vector<Complex>& spectrum) {
    if (spectrum.size() != grid.total()) throw StructuralError("field: spectrum size does not match grid");
    Field f(grid, dft_inverse_real(grid, spectrum));
    f.spectrum_ = std::make_shared<const std::vector<Complex>>(spectrum);
    return f;
}

const std::vector<Complex>& Field::spectrum() const {
    if (!spectrum_) spectrum_ = std::make_shared<const std::vector<Complex>>(dft_forward(grid_, values_));
    return *spectrum_;
}

VectorField::VectorField(std::vector<Field> comps) : components(std::move(comps)) {
    if (components.empty()) throw StructuralError("vector field: no components");
    for (const Field& c : components)
        if (!c.grid().same_layout(components.front().grid()))
            throw StructuralError("vector field: components on different grids");
}

int DerivativeOrder::total() const {
    int t = time;
    for (int s : space) t += s;
    return t;
}

Field to_spectral(const Field& f) {
    f.spectrum();
    return f;
}

namespace {

void warn_if_not_bandlimited(const Field& f, int axis) {
    const Grid& g = f.grid();
    const auto& spec = f.spectrum();
    double top = 0.0, total = 0.0;
    for_each_mode(g, [&](std::size_t lin, const std::vector<int>& idx) {
        const double e = std::norm(spec[lin]);
        total += e;
        const int n = g.dim(axis);
        const int k = idx[static_cast<size_t>(axis)] < n / 2 ? idx[static_cast<size_t>(axis)]
                                                             : idx[static_cast<size_t>(axis)] - n;
        if (std::abs(k) >= n / 2 - 1) top += e;
    });
    if (total > 0.0 && top > 1e-6 * total)
        std::fprintf(stderr,
                     "plp: warning: derivative along axis %d of a field whose top frequency shell "
                     "carries %.2e of the spectral energy\n",
                     axis, top / total);
}

}  // namespace

Field spectral_derivative(const Field& f, const DerivativeOrder& ord) {
    const Grid& g = f.grid();
    const int d = g.axes();
    if (static_cast<int>(ord.space.size()) != d - 1)
        throw StructuralError("spectral_derivative: spatial order count must be n");
    if (ord.time < 0) throw ConfigError("spectral_derivative: negative order");
    for (int s : ord.space)
        if (s < 0) throw ConfigError("spectral_derivative: negative order");

    std::vector<int> orders(static_cast<size_t>(d));
    for (int ax = 0; ax < d - 1; ++ax) orders[static_cast<size_t>(ax)] = ord.space[static_cast<size_t>(ax)];
    orders[static_cast<size_t>(d - 1)] = ord.time;

    for (int ax = 0; ax < d; ++ax)
        if (orders[static_cast<size_t>(ax)] > 0) warn_if_not_bandlimited(f, ax);

    const int total_order = ord.total();
    if (total_order == 0) return f;

    // (i)^k cycle for the accumulated power of i.
    static const Complex icycle[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    const Complex phase = icycle[total_order % 4];

    const auto& spec = f.spectrum();
    std::vector<Complex> out(spec.size());
    for_each_mode(g, [&](std::size_t lin, const std::vector<int>& idx) {
        double mag = 1.0;
        bool dropped = false;
        for (int ax = 0; ax < d; ++ax) {
            const int o = orders[static_cast<size_t>(ax)];
            if (o == 0) continue;
            if (g.is_nyquist(ax, idx[static_cast<size_t>(ax)])) {
                dropped = true;
                break;
            }
            const double xi = g.freq(ax, idx[static_cast<size_t>(ax)]);
            for (int r = 0; r < o; ++r) mag *= xi;
        }
        out[lin] = dropped ? Complex(0.0, 0.0) : phase * mag * spec[lin];
    });
    return Field::from_spectrum(g, out);
}

Field axis_derivative(const Field& f, int axis, int order) {
    const int d = f.grid().axes();
    if (axis < 0 || axis >= d) throw StructuralError("axis_derivative: axis out of range");
    DerivativeOrder ord;
    ord.space.assign(static_cast<size_t>(d - 1), 0);
    if (axis == d - 1)
        ord.time = order;
    else
        ord.space[static_cast<size_t>(axis)] = order;
    return spectral_derivative(f, ord);
}

VectorField gradient(const Field& f) {
    std::vector<Field> comps;
    for (int ax = 0; ax < f.grid().axes(); ++ax) comps.push_back(axis_derivative(f, ax, 1));
    return VectorField(std::move(comps));
}

double grid_mean(const Field& f) {
    double s = 0.0;
    for (double v : f.values()) s += v;
    return s / static_cast<double>(f.grid().total());
}

Field mean_subtract(const Field& f) {
    const double m = grid_mean(f);
    std::vector<double> v(f.values());
    for (double& x : v) x -= m;
    return Field(f.grid(), std::move(v));
}

Field antiderivative(const Field& f, int axis) {
    const Grid& g = f.grid();
    const int d = g.axes();
    if (axis < 0 || axis >= d) throw StructuralError("antiderivative: axis out of range");

    // Slice means along `axis` must vanish or no periodic antiderivative exists.
    double fmax = 0.0;
    for (double v : f.values()) fmax = std::max(fmax, std::abs(v));
    const std::size_t stride = g.stride(axis);
    const int nax = g.dim(axis);
    const std::size_t nslices = g.total() / static_cast<std::size_t>(nax);
    double worst = 0.0;
    std::size_t worst_slice = 0;
    for (std::size_t s = 0; s < nslices; ++s) {
        // Linear index of the slice's first element: expand s over all axes but `axis`.
        std::size_t base = 0, rem = s;
        for (int ax = d - 1; ax >= 0; --ax) {
            if (ax == axis) continue;
            const std::size_t n = static_cast<std::size_t>(g.dim(ax));
            base += (rem % n) * g.stride(ax);
            rem /= n;
        }
        double mean = 0.0;
        for (int i = 0; i < nax; ++i) mean += f.value(base + static_cast<std::size_t>(i) * stride);
        mean /= nax;
        if (std::abs(mean) > worst) {
            worst = std::abs(mean);
            worst_slice = s;
        }
    }
    if (worst > 1e-10 * std::max(fmax, 1e-300)) {
        std::ostringstream os;
        os << "antiderivative: slice mean " << worst << " (relative " << worst / fmax
           << ") along axis " << axis << " at slice " << worst_slice << " exceeds tolerance";
        throw DataError(os.str());
    }

    const auto& spec = f.spectrum();
    std::vector<Complex> out(spec.size());
    for_each_mode(g, [&](std::size_t lin, const std::vector<int>& idx) {
        const int i = idx[static_cast<size_t>(axis)];
        if (i == 0 || g.is_nyquist(axis, i)) {
            out[lin] = Complex(0.0, 0.0);
        } else {
            const double xi = g.freq(axis, i);
            out[lin] = spec[lin] / Complex(0.0, xi);
        }
    });
    return Field::from_spectrum(g, out);
}

Field field_scale(const Field& f, double s) {
    std::vector<double> v(f.values());
    for (double& x : v) x *= s;
    return Field(f.grid(), std::move(v));
}

Field field_add(const Field& f, const Field& g, double cf, double cg) {
    if (!f.grid().same_layout(g.grid())) throw StructuralError("field_add: grid mismatch");
    std::vector<double> v(f.grid().total());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = cf * f.value(i) + cg * g.value(i);
    return Field(f.grid(), std::move(v));
}

Field field_product(const Field& f, const Field& g) {
    if (!f.grid().same_layout(g.grid())) throw StructuralError("field_product: grid mismatch");
    std::vector<double> v(f.grid().total());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f.value(i) * g.value(i);
    return Field(f.grid(), std::move(v));
}

// --- import/export ---------------------------------------------------------

void write_field(const Field& f, const std::string& path, const std::string& format) {
    if (format != "bin" && format != "csv") throw ConfigError("write_field: format must be bin or csv");
    const Grid& g = f.grid();
    nlohmann::json header;
    header["dims"] = g.dims();
    header["box_lo"] = g.box().lo;
    header["box_hi"] = g.box().hi;
    header["anisotropy"] = g.aniso().weights();
    header["sample_offset"] = g.sample_offset();
    header["format"] = format;
    {
        std::ofstream hs(path + ".json");
        if (!hs) throw DataError("write_field: cannot open " + path + ".json");
        hs << header.dump(2) << "\n";
    }
    if (format == "bin") {
        std::ofstream os(path, std::ios::binary);
        if (!os) throw DataError("write_field: cannot open " + path);
        os.write(reinterpret_cast<const char*>(f.values().data()),
                 static_cast<std::streamsize>(f.values().size() * sizeof(double)));
    } else {
        std::ofstream os(path);
        if (!os) throw DataError("write_field: cannot open " + path);
        os.precision(17);
        for (double v : f.values()) os << v << "\n";
    }
}

Field read_field(const std::string& path) {
    std::ifstream hs(path + ".json");
    if (!hs) throw DataError("read_field: missing header " + path + ".json");
    nlohmann::json header;
    hs >> header;
    Grid g(header.at("dims").get<std::vector<int>>(),
           Box(header.at("box_lo").get<std::vector<double>>(), header.at("box_hi").get<std::vector<double>>()),
           Anisotropy(header.at("anisotropy").get<std::vector<double>>()),
           header.value("sample_offset", 0.0));
    const std::string format = header.value("format", "bin");
    std::vector<double> values(g.total());
    if (format == "bin") {
        std::ifstream is(path, std::ios::binary);
        if (!is) throw DataError("read_field: cannot open " + path);
        is.read(reinterpret_cast<char*>(values.data()),
                static_cast<std::streamsize>(values.size() * sizeof(double)));
        if (static_cast<std::size_t>(is.gcount()) != values.size() * sizeof(double))
            throw DataError("read_field: truncated data in " + path);
    } else {
        std::ifstream is(path);
        if (!is) throw DataError("read_field: cannot open " + path);
        for (double& v : values)
            if (!(is >> v)) throw DataError("read_field: truncated data in " + path);
    }
    return Field(std::move(g), std::move(values));
}

}  // namespace plp
