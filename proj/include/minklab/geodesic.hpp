#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "minklab/metric.hpp"
#include "minklab/report.hpp"

namespace minklab {

struct PhaseState {
    Vec x;   // spacetime position
    Vec xi;  // momentum covector
};

enum class TerminalKind { Escaped, ReachedMaxTime, StepFailure };

// Witness of the convexity-based escape condition: once |y| > radius with
// (d/dt)|y|^2 >= 0 at a point where H_p^2(|x|^2) is positive, the orbit
// cannot return.
struct EscapeCertificate {
    double t_star = 0.0;
    double radius = 0.0;
    double radial_derivative = 0.0;  // (d/dt)|y|^2 at t_star
    double M_local = 0.0;            // H_p^2(|x|^2)/|xi|^2 at t_star
};

struct Trajectory {
    std::vector<double> times;       // affine parameter, monotone in run direction
    std::vector<PhaseState> states;
    std::vector<double> p_values;    // Hamiltonian along the orbit
    TerminalKind terminal = TerminalKind::ReachedMaxTime;
    std::optional<EscapeCertificate> certificate;
    double t_fail = 0.0;
    std::string fail_reason;
};

// Adaptive Dormand-Prince 5(4) integration of the Hamilton system
//   y' = d_xi p,  eta' = -d_x p
// up to t_end (negative t_end integrates backward).  Halts early with
// Escaped once the escape certificate fires (escape_radius > 0 enables the
// check), or with StepFailure when the step size underflows below
// 1e-13*|t_end|.  StepFailure is a terminal state, not an exception.
Trajectory integrate_hamilton(const MetricSpec& m, const PhaseState& s0, double t_end,
                              double tol, double escape_radius = 0.0);

// Solves p(x, (xi_t, xi_y)) = 0 for the time component; branch = +1/-1
// selects the root.
PhaseState null_lift(const MetricSpec& m, const Vec& x, const Vec& xi_y, int branch);

enum class TrappingVerdict { ForwardNonTrapped, Undetermined };

struct TrappingResult {
    TrappingVerdict verdict = TrappingVerdict::Undetermined;
    std::optional<EscapeCertificate> certificate;
};

TrappingResult classify_trapping(const MetricSpec& m, const Trajectory& traj, double R0);

// H_p^2(|x|^2), assembled from the analytic metric derivatives.
double hp2_radius_sq(const MetricSpec& m, const Vec& x, const Vec& xi);

// M_estimate = min of H_p^2(|x|^2) over samples {|x| in [R0, 10 R0], |xi|=1}.
// A non-positive estimate means R0 is too small for this metric.
NormReport escape_function_check(const MetricSpec& m, double R0, int n_samples,
                                 std::uint64_t seed = 7);

// (C1, C2) = min/max of |eta(t)| over the trajectory.
std::pair<double, double> momentum_envelope(const Trajectory& traj);

enum class CompletenessStatus { CompleteSoFar, Escaped, Suspect };

struct CompletenessReport {
    CompletenessStatus forward = CompletenessStatus::CompleteSoFar;
    CompletenessStatus backward = CompletenessStatus::CompleteSoFar;
    double c1_forward = 0.0, c2_forward = 0.0;
    double c1_backward = 0.0, c2_backward = 0.0;
};

CompletenessReport completeness_probe(const MetricSpec& m, const PhaseState& s0,
                                      double t_max, double tol, double R0 = 20.0);

// C_mu = int_0^inf (1+s^2)^{-(1+mu)/2} ds, relative error <= 1e-9.
double c_mu_constant(double mu);

}  // namespace minklab
