#pragma once

#include <functional>
#include <string>
#include <vector>

#include "minklab/grid.hpp"
#include "minklab/report.hpp"

namespace minklab {

// Complex grid function on [T0,T1) x [-L,L)^n, row-major [time][space...],
// spatial axes fastest-varying.  `dual_y` marks a field whose spatial axes
// live on the dual lattice.
struct SpaceTimeField {
    GridSpec grid;
    std::vector<cplx> values;
    bool dual_y = false;

    explicit SpaceTimeField(const GridSpec& g, bool dual = false)
        : grid(g), values(static_cast<std::size_t>(g.N_t) * g.ny_total()), dual_y(dual) {
        grid.validate();
    }

    cplx& at(int it, std::size_t iy) { return values[static_cast<std::size_t>(it) * grid.ny_total() + iy]; }
    const cplx& at(int it, std::size_t iy) const {
        return values[static_cast<std::size_t>(it) * grid.ny_total() + iy];
    }
};

// Unitary discrete Fourier transform in y per time slice (Parseval exact in
// the discrete inner products dy^n <-> deta^n).
SpaceTimeField fourier_y(const SpaceTimeField& f);
SpaceTimeField inverse_fourier_y(const SpaceTimeField& f);

// Multiply in dual space by a per-dual-point symbol and transform back.
// The symbol vector has ny_total entries in dual lattice order.
SpaceTimeField apply_multiplier(const SpaceTimeField& f, const std::vector<cplx>& symbol);

// Symbol builders over a table's dual lattice.
std::vector<cplx> sym_jap_pow(const SpectralSymbolTable& t, double s);
std::vector<cplx> sym_inv_a(const SpectralSymbolTable& t);
std::vector<cplx> sym_exp_mita(const SpectralSymbolTable& t, double tau);   // e^{-i tau a}
std::vector<cplx> sym_exp_ita1(const SpectralSymbolTable& t, double tau);   // e^{i tau a1}
std::vector<cplx> sym_a2_pow(const SpectralSymbolTable& t, double s);

// Discrete L^2 over spacetime (quadrature weights dt * dy^n or dt * deta^n).
double l2_norm(const SpaceTimeField& f);

// Weighted norm || <t>^w f ||_{L^2}
double weighted_t_norm(const SpaceTimeField& f, double w);

// L^2, H^k_y (via <eta>^k), the A2-equivalent norm ||a2^{-k} fhat|| and
// their ratio.
NormReport norms(const SpaceTimeField& f, const SpectralSymbolTable& table, double k);

// True when the field magnitude stays below tol on the outer `frac` band of
// the time axis at each end.
bool time_interior_supported(const SpaceTimeField& f, double frac = 0.1, double tol = 1e-10);

// (n+1)-dimensional Sobolev norm with weight <(tau,eta)>^k; the time axis is
// periodized, so the field must be interior-supported in t (rejected
// otherwise).
double spacetime_sobolev_norm(const SpaceTimeField& f, double k);

// Flat binary serialization: int32 header {n, N_y, N_t} + float64 {L, T0, T1}
// + row-major re/im pairs.  CSV for small grids.
void write_field_binary(const SpaceTimeField& f, const std::string& path);
SpaceTimeField read_field_binary(const std::string& path);
void write_field_csv(const SpaceTimeField& f, const std::string& path);

}  // namespace minklab
