#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace minklab {

using cplx = std::complex<double>;

// Uniform space-time grid: periodic box [-L, L)^n in y, uniform samples
// t_m = T0 + m*dt on [T0, T1), endpoint-exclusive on both axes.  Dual
// lattice in FFT index order, eta_k = pi*k/L with k in [-N_y/2, N_y/2).
struct GridSpec {
    int n = 1;
    double L = 16.0;
    int N_y = 256;       // points per axis, power of two
    double T0 = -8.0;
    double T1 = 8.0;
    int N_t = 1024;

    void validate() const {
        if (n < 1 || n > 3) throw std::invalid_argument("GridSpec: n must be in {1,2,3}");
        if (N_y < 2 || (N_y & (N_y - 1)) != 0)
            throw std::invalid_argument("GridSpec: N_y must be a power of two");
        if (!(T0 < T1)) throw std::invalid_argument("GridSpec: need T0 < T1");
        if (N_t < 8) throw std::invalid_argument("GridSpec: N_t too small");
    }

    double dt() const { return (T1 - T0) / N_t; }
    double dy() const { return 2.0 * L / N_y; }
    double deta() const { return M_PI / L; }
    double t(int m) const { return T0 + m * dt(); }
    double y(int j) const { return -L + j * dy(); }

    std::size_t ny_total() const {
        std::size_t s = 1;
        for (int i = 0; i < n; ++i) s *= static_cast<std::size_t>(N_y);
        return s;
    }

    // signed frequency integer for FFT index k on one axis
    int freq_index(int k) const { return (k < N_y / 2) ? k : k - N_y; }
    double eta_axis(int k) const { return M_PI * freq_index(k) / L; }

    // |eta|^2 at a flattened dual-lattice index
    double eta_sq(std::size_t flat) const {
        double s = 0.0;
        for (int ax = 0; ax < n; ++ax) {
            const int k = static_cast<int>(flat % N_y);
            flat /= N_y;
            const double e = eta_axis(k);
            s += e * e;
        }
        return s;
    }

    // parity (-1)^{sum of signed frequency indices} at a flattened dual index
    double dual_parity(std::size_t flat) const {
        int s = 0;
        for (int ax = 0; ax < n; ++ax) {
            s += static_cast<int>(flat % N_y);
            flat /= N_y;
        }
        return (s % 2 == 0) ? 1.0 : -1.0;
    }
};

// Branch-correct symbol a(eta) = a1 - i*a2 = sqrt(|eta|^2 - i) with
// Im a <= 0, evaluated on the dual lattice through the stable closed forms
//   r = (|eta|^4+1)^{1/4},  a1 = sqrt((r^2+|eta|^2)/2),  a2 = 1/(2*a1).
struct SpectralSymbolTable {
    GridSpec grid;
    std::vector<double> eta_sq;   // |eta|^2
    std::vector<double> jap_eta;  // <eta>
    std::vector<double> r;        // |a|
    std::vector<double> a1;
    std::vector<double> a2;
    std::vector<cplx> a;
};

SpectralSymbolTable build_symbol_table(const GridSpec& grid);

// Closed forms at a single |eta|^2; used by the table and by the
// semi-analytic kernel evaluations.
struct SymbolValue {
    double r, a1, a2;
    cplx a;
};
SymbolValue symbol_at(double eta_sq);

}  // namespace minklab
