#pragma once

#include <complex>
#include <vector>

#include "minklab/grid.hpp"
#include "minklab/report.hpp"

namespace minklab {

// Counterexample family parameters.  chi is the built-in smooth bump on
// (1/4, 1) with plateau [1/2, 3/4] (exp(-1/s) mollifier construction).
struct CounterexampleParams {
    int n = 1;
    double eps = 0.25;     // Sobolev excess epsilon > 0
    double t_obs = 0.1;    // observation time in (0, 1/4)
};

// Smooth bump: 0 outside (1/4,1), 1 on [1/2,3/4], values in [0,1], C-infinity.
double chi_bump(double s);

// g(t,eta) = <eta>^{-(n+1)/2-eps} chi(t/<eta>) e^{i t a1(eta)}, radial in eta.
cplx source_g(const CounterexampleParams& p, double t, double eta_abs);

// b_t(t,eta) = (i/2) <eta>^{1-n/2} a^{-1}
//              int_{1/4}^1 e^{-(s - t/<eta>) <eta> a2} chi(s) ds
// for t in (0, 1/4); relative quadrature error <= 1e-9.
cplx kernel_bt(const CounterexampleParams& p, double t, double eta_abs);

// d/d|eta| of kernel_bt, by quadrature of the differentiated integrand.
cplx kernel_bt_deta(const CounterexampleParams& p, double t, double eta_abs);

// min/max of <eta>^{n/2} |b_t| over the sample grid; PASS iff min > 0 and
// max/min below the ceiling.
NormReport verify_bt_bounds(const CounterexampleParams& p,
                            const std::vector<double>& eta_list,
                            const std::vector<double>& t_list,
                            double ratio_ceiling = 50.0);

struct DivergenceRow {
    double Lambda;
    double D_half_eps;   // weight exponent 1/2 + eps (b_t already carries it)
    double D_half;       // reweighted by <eta>^{-2 eps}
    double D_half_2eps;  // reweighted by <eta>^{+2 eps}
};

struct DivergenceScan {
    std::vector<DivergenceRow> rows;
    double alpha = 0.0;        // fitted slope of D(Lambda,1/2+eps) vs log Lambda
    double alpha_drift = 0.0;  // relative spread of the last three dyad increments
};

// Cumulative radial integrals D(Lambda, s) = int_{|eta|<=Lambda} w(eta)
// |b_t(t_obs,eta)|^2 d eta over an ascending Lambda list.
DivergenceScan divergence_scan(const CounterexampleParams& p,
                               const std::vector<double>& lambda_list);

struct CrossValidation {
    double max_rel_error = 0.0;
    double t_used = 0.0;     // grid time actually compared (nearest to t_obs)
    int modes_compared = 0;
};

// End-to-end check: band-limited source (|eta| <= Lambda0) through the
// resolvent pipeline, e^{-i t A1} <D>^{1/2+eps} multipliers at t_obs, versus
// the semi-analytic kernel, mode by mode.
CrossValidation crossvalidate_with_resolvent(const CounterexampleParams& p,
                                             double Lambda0, const GridSpec& grid);

}  // namespace minklab
