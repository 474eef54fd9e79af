#include "minklab/geodesic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <tuple>

#include <boost/math/quadrature/tanh_sinh.hpp>

namespace minklab {

namespace {

// Dormand-Prince 5(4) tableau
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// 4th-order embedded weights
constexpr double e1 = 5179.0 / 57600, e3 = 7571.0 / 16695, e4 = 393.0 / 640,
                 e5 = -92097.0 / 339200, e6 = 187.0 / 2100, e7 = 1.0 / 40;

}  // namespace

Trajectory integrate_hamilton(const MetricSpec& m, const PhaseState& s0, double t_end,
                              double tol, double escape_radius) {
    if (tol < 1e-12 || tol > 1e-3)
        throw std::invalid_argument("integrate_hamilton: tol must be in [1e-12, 1e-3]");
    if (t_end == 0.0)
        throw std::invalid_argument("integrate_hamilton: t_end must be nonzero");

    const int d = m.dim();
    const int nd = 2 * d;
    auto rhs = [&](const Vec& z) {
        Vec dz(nd);
        const PGrad g = grad_p(m, z.head(d), z.tail(d));
        dz.head(d) = g.dxi;
        dz.tail(d) = -g.dx;
        return dz;
    };

    Trajectory traj;
    const double dir = (t_end > 0) ? 1.0 : -1.0;
    const double h_min = 1e-13 * std::abs(t_end);

    Vec z(nd);
    z.head(d) = s0.x;
    z.tail(d) = s0.xi;
    double t = 0.0;

    auto record = [&](double tt, const Vec& zz) {
        PhaseState st{zz.head(d), zz.tail(d)};
        traj.p_values.push_back(hamiltonian(m, st.x, st.xi));
        traj.times.push_back(tt);
        traj.states.push_back(std::move(st));
    };
    record(t, z);

    auto escape_fires = [&](const Vec& zz) -> std::optional<EscapeCertificate> {
        if (escape_radius <= 0.0) return std::nullopt;
        const Vec x = zz.head(d);
        const Vec xi = zz.tail(d);
        const double r = x.norm();
        if (r <= escape_radius) return std::nullopt;
        // outgoing with respect to the run direction
        const double rdot = dir * 2.0 * x.dot(grad_p(m, x, xi).dxi);
        if (rdot < 0.0) return std::nullopt;
        EscapeCertificate cert;
        cert.radius = r;
        cert.radial_derivative = rdot;
        cert.M_local = hp2_radius_sq(m, x, xi) / xi.squaredNorm();
        return cert;
    };

    double h = dir * std::min(0.1, std::abs(t_end) * 0.01);
    Vec k1 = rhs(z);
    while (dir * (t_end - t) > 0.0) {
        if (dir * (t + h) > dir * t_end) h = t_end - t;
        const Vec k2 = rhs(z + h * (a21 * k1));
        const Vec k3 = rhs(z + h * (a31 * k1 + a32 * k2));
        const Vec k4 = rhs(z + h * (a41 * k1 + a42 * k2 + a43 * k3));
        const Vec k5 = rhs(z + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        const Vec k6 = rhs(z + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        const Vec z5 = z + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        const Vec k7 = rhs(z5);
        const Vec z4 = z + h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        const double scale = tol * (1.0 + z.cwiseAbs().maxCoeff());
        const double err = (z5 - z4).cwiseAbs().maxCoeff() / scale;

        if (err <= 1.0) {
            t += h;
            z = z5;
            k1 = k7;  // FSAL
            record(t, z);
            if (auto cert = escape_fires(z)) {
                cert->t_star = t;
                traj.certificate = cert;
                traj.terminal = TerminalKind::Escaped;
                return traj;
            }
        }
        const double fac = std::clamp(0.9 * std::pow(std::max(err, 1e-10), -0.2), 0.2, 5.0);
        h *= fac;
        if (std::abs(h) < h_min) {
            traj.terminal = TerminalKind::StepFailure;
            traj.t_fail = t;
            traj.fail_reason = "step size underflow";
            return traj;
        }
    }
    traj.terminal = TerminalKind::ReachedMaxTime;
    return traj;
}

PhaseState null_lift(const MetricSpec& m, const Vec& x, const Vec& xi_y, int branch) {
    if (xi_y.norm() == 0.0)
        throw std::invalid_argument("null_lift: xi_y must be nonzero");
    const int d = m.dim();
    const Mat g = m.dual_metric(x);
    // p = 1/2 (g00 s^2 + 2 s g0y.xi_y + xi_y^T gyy xi_y) = 0 for s = xi_t
    const double A = g(0, 0);
    double B = 0.0, C = 0.0;
    for (int k = 1; k < d; ++k) B += g(0, k) * xi_y[k - 1];
    for (int j = 1; j < d; ++j)
        for (int k = 1; k < d; ++k) C += g(j, k) * xi_y[j - 1] * xi_y[k - 1];
    const double disc = B * B - A * C;
    if (disc < 0.0)
        throw std::domain_error("null_lift: no real root (signature violated)");
    const double sq = std::sqrt(disc);
    // A < 0 for Lorentzian dual metrics; the two roots are (-B +- sq)/A
    const double root = (branch >= 0) ? (-B - sq) / A : (-B + sq) / A;
    Vec xi(d);
    xi[0] = root;
    xi.tail(d - 1) = xi_y;
    return PhaseState{x, xi};
}

TrappingResult classify_trapping(const MetricSpec& m, const Trajectory& traj, double R0) {
    TrappingResult res;
    if (traj.certificate && traj.certificate->radius > R0) {
        res.verdict = TrappingVerdict::ForwardNonTrapped;
        res.certificate = traj.certificate;
        return res;
    }
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
        const auto& st = traj.states[k];
        const double r = st.x.norm();
        if (r <= R0) continue;
        const double rdot = 2.0 * st.x.dot(grad_p(m, st.x, st.xi).dxi);
        if (rdot >= 0.0) {
            EscapeCertificate cert;
            cert.t_star = traj.times[k];
            cert.radius = r;
            cert.radial_derivative = rdot;
            cert.M_local = hp2_radius_sq(m, st.x, st.xi) / st.xi.squaredNorm();
            res.verdict = TrappingVerdict::ForwardNonTrapped;
            res.certificate = cert;
            return res;
        }
    }
    return res;
}

double hp2_radius_sq(const MetricSpec& m, const Vec& x, const Vec& xi) {
    const int d = m.dim();
    const Mat g = m.dual_metric(x);
    const Vec gxi = g * xi;
    const Vec gx = g * x;
    // q = H_p(|x|^2) = 2 x . (g xi)
    Vec dq_dx(d), dp_dx(d);
    for (int l = 0; l < d; ++l) {
        const Mat dg = m.dual_metric_dx(x, l);
        dq_dx[l] = 2.0 * gxi[l] + 2.0 * x.dot(dg * xi);
        dp_dx[l] = 0.5 * xi.dot(dg * xi);
    }
    // H_p q = d_xi p . d_x q - d_x p . d_xi q,  d_xi q = 2 g x
    return gxi.dot(dq_dx) - 2.0 * dp_dx.dot(gx);
}

NormReport escape_function_check(const MetricSpec& m, double R0, int n_samples,
                                 std::uint64_t seed) {
    if (R0 <= 1.0)
        throw std::invalid_argument("escape_function_check: R0 must be > 1");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const int d = m.dim();
    double m_est = std::numeric_limits<double>::infinity();
    for (int k = 0; k < n_samples; ++k) {
        Vec xdir(d), xi(d);
        for (int i = 0; i < d; ++i) xdir[i] = gauss(rng);
        for (int i = 0; i < d; ++i) xi[i] = gauss(rng);
        xdir.normalize();
        xi.normalize();
        const Vec x = (R0 + 9.0 * R0 * unif(rng)) * xdir;
        m_est = std::min(m_est, hp2_radius_sq(m, x, xi));
    }
    NormReport rep;
    rep.name = "escape_function_check";
    rep.values["M_estimate"] = m_est;
    rep.values["R0"] = R0;
    rep.values["n_samples"] = static_cast<double>(n_samples);
    rep.values["passed"] = (m_est > 0.0) ? 1.0 : 0.0;
    rep.meta["shape"] = m.shape;
    return rep;
}

std::pair<double, double> momentum_envelope(const Trajectory& traj) {
    if (traj.states.empty())
        throw std::invalid_argument("momentum_envelope: empty trajectory");
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (const auto& st : traj.states) {
        const double r = st.xi.norm();
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    return {lo, hi};
}

namespace {

CompletenessStatus one_direction(const MetricSpec& m, const PhaseState& s0, double t_end,
                                 double tol, double R0, double& c1, double& c2) {
    const Trajectory traj = integrate_hamilton(m, s0, t_end, tol, R0);
    std::tie(c1, c2) = momentum_envelope(traj);
    switch (traj.terminal) {
        case TerminalKind::Escaped:
            return CompletenessStatus::Escaped;
        case TerminalKind::ReachedMaxTime:
            return CompletenessStatus::CompleteSoFar;
        case TerminalKind::StepFailure:
        default:
            return CompletenessStatus::Suspect;
    }
}

}  // namespace

CompletenessReport completeness_probe(const MetricSpec& m, const PhaseState& s0,
                                      double t_max, double tol, double R0) {
    CompletenessReport rep;
    rep.forward = one_direction(m, s0, t_max, tol, R0, rep.c1_forward, rep.c2_forward);
    rep.backward = one_direction(m, s0, -t_max, tol, R0, rep.c1_backward, rep.c2_backward);
    return rep;
}

double c_mu_constant(double mu) {
    if (mu <= 0.0)
        throw std::invalid_argument("c_mu_constant: integral diverges for mu <= 0");
    boost::math::quadrature::tanh_sinh<double> integ;
    // head on [0,1]
    const double head = integ.integrate(
        [&](double s) { return std::pow(1.0 + s * s, -(1.0 + mu) / 2.0); }, 0.0, 1.0,
        1e-11);
    // tail via s -> 1/u, then u = v^{1/mu} to flatten the endpoint
    const double tail = integ.integrate(
        [&](double v) {
            const double u = std::pow(v, 1.0 / mu);
            return (1.0 / mu) * std::pow(u * u + 1.0, -(1.0 + mu) / 2.0);
        },
        0.0, 1.0, 1e-11);
    return head + tail;
}

}  // namespace minklab
