#include "minklab/field.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <fftw3.h>

namespace minklab {

SymbolValue symbol_at(double eta_sq) {
    SymbolValue v;
    const double r2 = std::sqrt(eta_sq * eta_sq + 1.0);
    v.r = std::sqrt(r2);
    v.a1 = std::sqrt(0.5 * (r2 + eta_sq));
    v.a2 = 0.5 / v.a1;
    v.a = cplx(v.a1, -v.a2);
    return v;
}

SpectralSymbolTable build_symbol_table(const GridSpec& grid) {
    grid.validate();
    SpectralSymbolTable t;
    t.grid = grid;
    const std::size_t ny = grid.ny_total();
    t.eta_sq.resize(ny);
    t.jap_eta.resize(ny);
    t.r.resize(ny);
    t.a1.resize(ny);
    t.a2.resize(ny);
    t.a.resize(ny);
    for (std::size_t i = 0; i < ny; ++i) {
        const double e2 = grid.eta_sq(i);
        const SymbolValue v = symbol_at(e2);
        t.eta_sq[i] = e2;
        t.jap_eta[i] = std::sqrt(1.0 + e2);
        t.r[i] = v.r;
        t.a1[i] = v.a1;
        t.a2[i] = v.a2;
        t.a[i] = v.a;
    }
    return t;
}

namespace {

// n-dimensional DFT over the spatial axes of every time slice.
void fft_slices(const GridSpec& g, std::vector<cplx>& data, int sign) {
    const std::size_t ny = g.ny_total();
    std::vector<int> dims(g.n, g.N_y);
    fftw_plan plan = fftw_plan_many_dft(
        g.n, dims.data(), g.N_t, reinterpret_cast<fftw_complex*>(data.data()), nullptr, 1,
        static_cast<int>(ny), reinterpret_cast<fftw_complex*>(data.data()), nullptr, 1,
        static_cast<int>(ny), sign, FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
}

}  // namespace

SpaceTimeField fourier_y(const SpaceTimeField& f) {
    if (f.dual_y) throw std::invalid_argument("fourier_y: field already dual");
    SpaceTimeField out = f;
    out.dual_y = true;
    fft_slices(f.grid, out.values, FFTW_FORWARD);
    const GridSpec& g = f.grid;
    const std::size_t ny = g.ny_total();
    const double scale = std::pow(2.0 * M_PI, -0.5 * g.n) * std::pow(g.dy(), g.n);
    for (int it = 0; it < g.N_t; ++it)
        for (std::size_t iy = 0; iy < ny; ++iy)
            out.at(it, iy) *= scale * g.dual_parity(iy);
    return out;
}

SpaceTimeField inverse_fourier_y(const SpaceTimeField& f) {
    if (!f.dual_y) throw std::invalid_argument("inverse_fourier_y: field not dual");
    SpaceTimeField out = f;
    out.dual_y = false;
    const GridSpec& g = f.grid;
    const std::size_t ny = g.ny_total();
    const double scale = std::pow(2.0 * M_PI, -0.5 * g.n) * std::pow(g.deta(), g.n);
    for (int it = 0; it < g.N_t; ++it)
        for (std::size_t iy = 0; iy < ny; ++iy)
            out.at(it, iy) *= scale * g.dual_parity(iy);
    fft_slices(g, out.values, FFTW_BACKWARD);
    return out;
}

SpaceTimeField apply_multiplier(const SpaceTimeField& f, const std::vector<cplx>& symbol) {
    const GridSpec& g = f.grid;
    const std::size_t ny = g.ny_total();
    if (symbol.size() != ny)
        throw std::invalid_argument("apply_multiplier: symbol size mismatch");
    for (const cplx& s : symbol)
        if (!std::isfinite(s.real()) || !std::isfinite(s.imag()))
            throw std::invalid_argument("apply_multiplier: non-finite symbol value");
    SpaceTimeField fh = f.dual_y ? f : fourier_y(f);
    for (int it = 0; it < g.N_t; ++it)
        for (std::size_t iy = 0; iy < ny; ++iy)
            fh.at(it, iy) *= symbol[iy];
    return f.dual_y ? fh : inverse_fourier_y(fh);
}

std::vector<cplx> sym_jap_pow(const SpectralSymbolTable& t, double s) {
    std::vector<cplx> v(t.jap_eta.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::pow(t.jap_eta[i], s);
    return v;
}

std::vector<cplx> sym_inv_a(const SpectralSymbolTable& t) {
    std::vector<cplx> v(t.a.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = 1.0 / t.a[i];  // |a| >= 1
    return v;
}

std::vector<cplx> sym_exp_mita(const SpectralSymbolTable& t, double tau) {
    std::vector<cplx> v(t.a.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::exp(cplx(0.0, -tau) * t.a[i]);
    return v;
}

std::vector<cplx> sym_exp_ita1(const SpectralSymbolTable& t, double tau) {
    std::vector<cplx> v(t.a.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        v[i] = std::exp(cplx(0.0, tau * t.a1[i]));
    return v;
}

std::vector<cplx> sym_a2_pow(const SpectralSymbolTable& t, double s) {
    std::vector<cplx> v(t.a2.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::pow(t.a2[i], s);
    return v;
}

double l2_norm(const SpaceTimeField& f) {
    const GridSpec& g = f.grid;
    double s = 0.0;
    for (const cplx& v : f.values) s += std::norm(v);
    const double cell = f.dual_y ? std::pow(g.deta(), g.n) : std::pow(g.dy(), g.n);
    return std::sqrt(s * g.dt() * cell);
}

double weighted_t_norm(const SpaceTimeField& f, double w) {
    const GridSpec& g = f.grid;
    const std::size_t ny = g.ny_total();
    double s = 0.0;
    for (int it = 0; it < g.N_t; ++it) {
        const double wt = std::pow(1.0 + g.t(it) * g.t(it), w);  // <t>^{2w}
        double row = 0.0;
        for (std::size_t iy = 0; iy < ny; ++iy) row += std::norm(f.at(it, iy));
        s += wt * row;
    }
    const double cell = f.dual_y ? std::pow(g.deta(), g.n) : std::pow(g.dy(), g.n);
    return std::sqrt(s * g.dt() * cell);
}

NormReport norms(const SpaceTimeField& f, const SpectralSymbolTable& table, double k) {
    if (k < -2.0 || k > 2.0) throw std::invalid_argument("norms: k must be in [-2,2]");
    const GridSpec& g = f.grid;
    const std::size_t ny = g.ny_total();
    const SpaceTimeField fh = f.dual_y ? f : fourier_y(f);
    double l2 = 0.0, hk = 0.0, a2k = 0.0;
    for (int it = 0; it < g.N_t; ++it) {
        for (std::size_t iy = 0; iy < ny; ++iy) {
            const double m = std::norm(fh.at(it, iy));
            l2 += m;
            hk += std::pow(table.jap_eta[iy], 2.0 * k) * m;
            a2k += std::pow(table.a2[iy], -2.0 * k) * m;
        }
    }
    const double cell = g.dt() * std::pow(g.deta(), g.n);
    NormReport rep;
    rep.name = "norms";
    rep.values["L2"] = std::sqrt(l2 * cell);
    rep.values["Hk"] = std::sqrt(hk * cell);
    rep.values["A2k"] = std::sqrt(a2k * cell);
    rep.values["k"] = k;
    rep.values["ratio"] = (hk > 0.0) ? std::sqrt(a2k / hk) : 0.0;
    return rep;
}

bool time_interior_supported(const SpaceTimeField& f, double frac, double tol) {
    const GridSpec& g = f.grid;
    const std::size_t ny = g.ny_total();
    const int band = std::max(1, static_cast<int>(g.N_t * frac));
    for (int it = 0; it < g.N_t; ++it) {
        if (it >= band && it < g.N_t - band) continue;
        for (std::size_t iy = 0; iy < ny; ++iy)
            if (std::abs(f.at(it, iy)) > tol) return false;
    }
    return true;
}

double spacetime_sobolev_norm(const SpaceTimeField& f, double k) {
    if (f.dual_y)
        throw std::invalid_argument("spacetime_sobolev_norm: physical-space field required");
    if (!time_interior_supported(f))
        throw std::invalid_argument(
            "spacetime_sobolev_norm: field must vanish on the outer 10% time band");
    const GridSpec& g = f.grid;
    const std::size_t ny = g.ny_total();
    std::vector<cplx> data = f.values;

    // full (n+1)-dimensional DFT, time axis slowest
    std::vector<int> dims;
    dims.push_back(g.N_t);
    for (int i = 0; i < g.n; ++i) dims.push_back(g.N_y);
    fftw_plan plan = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(),
                                   reinterpret_cast<fftw_complex*>(data.data()),
                                   reinterpret_cast<fftw_complex*>(data.data()),
                                   FFTW_FORWARD, FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);

    const double Lt = 0.5 * (g.T1 - g.T0);
    const double dtau = M_PI / Lt;
    const double amp2 = std::pow(2.0 * M_PI, -(g.n + 1.0)) * std::pow(g.dt(), 2.0) *
                        std::pow(g.dy(), 2.0 * g.n);
    double s = 0.0;
    for (int it = 0; it < g.N_t; ++it) {
        const int kt = (it < g.N_t / 2) ? it : it - g.N_t;
        const double tau = dtau * kt;
        for (std::size_t iy = 0; iy < ny; ++iy) {
            const double w2 = 1.0 + tau * tau + g.eta_sq(iy);
            s += std::pow(w2, k) * std::norm(data[static_cast<std::size_t>(it) * ny + iy]);
        }
    }
    return std::sqrt(s * dtau * std::pow(g.deta(), g.n) * amp2);
}

void write_field_binary(const SpaceTimeField& f, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("write_field_binary: cannot open " + path);
    const int32_t header[3] = {f.grid.n, f.grid.N_y, f.grid.N_t};
    const double geom[3] = {f.grid.L, f.grid.T0, f.grid.T1};
    os.write(reinterpret_cast<const char*>(header), sizeof(header));
    os.write(reinterpret_cast<const char*>(geom), sizeof(geom));
    os.write(reinterpret_cast<const char*>(f.values.data()),
             static_cast<std::streamsize>(f.values.size() * sizeof(cplx)));
}

SpaceTimeField read_field_binary(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("read_field_binary: cannot open " + path);
    int32_t header[3];
    double geom[3];
    is.read(reinterpret_cast<char*>(header), sizeof(header));
    is.read(reinterpret_cast<char*>(geom), sizeof(geom));
    GridSpec g;
    g.n = header[0];
    g.N_y = header[1];
    g.N_t = header[2];
    g.L = geom[0];
    g.T0 = geom[1];
    g.T1 = geom[2];
    SpaceTimeField f(g);
    is.read(reinterpret_cast<char*>(f.values.data()),
            static_cast<std::streamsize>(f.values.size() * sizeof(cplx)));
    if (!is) throw std::runtime_error("read_field_binary: truncated file " + path);
    return f;
}

void write_field_csv(const SpaceTimeField& f, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_field_csv: cannot open " + path);
    os << "it,iy,re,im\n";
    char buf[80];
    const std::size_t ny = f.grid.ny_total();
    for (int it = 0; it < f.grid.N_t; ++it)
        for (std::size_t iy = 0; iy < ny; ++iy) {
            const cplx v = f.at(it, iy);
            std::snprintf(buf, sizeof(buf), "%d,%zu,%.17g,%.17g\n", it, iy, v.real(),
                          v.imag());
            os << buf;
        }
}

}  // namespace minklab
