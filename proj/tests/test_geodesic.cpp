#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "minklab/geodesic.hpp"

using namespace minklab;

namespace {

PhaseState state(std::initializer_list<double> xs, std::initializer_list<double> xis) {
    PhaseState s;
    s.x = Vec(static_cast<int>(xs.size()));
    s.xi = Vec(static_cast<int>(xis.size()));
    int i = 0;
    for (double v : xs) s.x[i++] = v;
    i = 0;
    for (double v : xis) s.xi[i++] = v;
    return s;
}

// Nested finite-difference Poisson bracket oracle for H_p^2(|x|^2).
double hp2_fd(const MetricSpec& m, const Vec& x, const Vec& xi) {
    const double h = 1e-4;
    const int d = m.dim();
    auto hp_r2 = [&](const Vec& xx, const Vec& xxi) {
        // {p, |x|^2} = d_xi p . d_x |x|^2 = 2 x . g^{-1} xi
        double acc = 0.0;
        const Vec gxi = m.dual_metric(xx) * xxi;
        for (int i = 0; i < d; ++i) acc += 2.0 * xx[i] * gxi[i];
        return acc;
    };
    // {p, q} with q = hp_r2, by finite differences of q along the flow fields
    double acc = 0.0;
    const PGrad g = grad_p(m, x, xi);
    for (int i = 0; i < d; ++i) {
        Vec xp = x, xm = x;
        xp[i] += h;
        xm[i] -= h;
        acc += g.dxi[i] * (hp_r2(xp, xi) - hp_r2(xm, xi)) / (2.0 * h);
        Vec xip = xi, xim = xi;
        xip[i] += h;
        xim[i] -= h;
        acc -= g.dx[i] * (hp_r2(x, xip) - hp_r2(x, xim)) / (2.0 * h);
    }
    return acc;
}

}  // namespace

TEST_CASE("minkowski null geodesic is a straight line") {
    const MetricSpec m = minkowski(1);
    const PhaseState s0 = state({0, 0}, {1, 1});
    const Trajectory tr = integrate_hamilton(m, s0, 10.0, 1e-10);
    REQUIRE(tr.terminal == TerminalKind::ReachedMaxTime);
    double max_err = 0.0;
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
        const double t = tr.times[i];
        Vec exact(2);
        exact << -t, t;
        max_err = std::max(max_err, (tr.states[i].x - exact).cwiseAbs().maxCoeff());
        CHECK((tr.states[i].xi - s0.xi).cwiseAbs().maxCoeff() <= 1e-12);
    }
    CHECK(max_err <= 1e-10);
}

TEST_CASE("minkowski timelike geodesic conserves p = -1/2") {
    const MetricSpec m = minkowski(1);
    const Trajectory tr = integrate_hamilton(m, state({0, 0}, {1, 0}), 100.0, 1e-10);
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
        Vec exact(2);
        exact << -tr.times[i], 0.0;
        CHECK((tr.states[i].x - exact).cwiseAbs().maxCoeff() <= 1e-10);
        CHECK(std::abs(tr.p_values[i] + 0.5) <= 1e-10);
    }
}

TEST_CASE("perturbed null shot conserves p within 1e-8 over long horizons") {
    const MetricSpec m = perturbed_family(1, 1.0, 0.05, "radial_bump");
    Vec xi_y(1);
    xi_y << 1.0;
    const PhaseState s0 = null_lift(m, Vec::Zero(2), xi_y, +1);
    const Trajectory tr = integrate_hamilton(m, s0, 1000.0, 1e-10);
    REQUIRE(tr.terminal != TerminalKind::StepFailure);
    for (double pv : tr.p_values) CHECK(std::abs(pv) <= 1e-8);
    // halved-tolerance rerun agrees at the endpoint
    const Trajectory tr2 = integrate_hamilton(m, s0, 1000.0, 5e-11);
    CHECK((tr.states.back().x - tr2.states.back().x).norm() <=
          1e-6 * (1.0 + tr.states.back().x.norm()));
}

TEST_CASE("null lift closed forms") {
    const MetricSpec m1 = minkowski(1);
    Vec xi_y(1);
    xi_y << 1.0;
    const PhaseState s = null_lift(m1, Vec::Zero(2), xi_y, +1);
    CHECK(s.xi[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(s.xi[1] == 1.0);

    const MetricSpec m3 = minkowski(3);
    Vec xi3(3);
    xi3 << 3.0, 4.0, 0.0;
    const PhaseState s3 = null_lift(m3, Vec::Zero(4), xi3, -1);
    CHECK(s3.xi[0] == doctest::Approx(-5.0).epsilon(1e-14));

    const MetricSpec mp = perturbed_family(1, 1.0, 0.1, "offdiag_cosine");
    const PhaseState sp = null_lift(mp, Vec::Zero(2), xi_y, +1);
    CHECK(std::abs(hamiltonian(mp, sp.x, sp.xi)) <= 1e-12);
    // quadratic-formula oracle
    const Mat g = mp.dual_metric(Vec::Zero(2));
    const double A = g(0, 0), B = g(0, 1) * xi_y[0], C = g(1, 1) * xi_y[0] * xi_y[0];
    const double root = (-B - std::sqrt(B * B - A * C)) / A;
    CHECK(sp.xi[0] == doctest::Approx(root).epsilon(1e-12));
}

TEST_CASE("escape certificate fires for minkowski null shots by t = 2 R0") {
    const MetricSpec m = minkowski(1);
    const double R0 = 10.0;
    const double s = 1.0 / std::sqrt(2.0);
    const Trajectory tr =
        integrate_hamilton(m, state({0, 0}, {s, s}), 4.0 * R0, 1e-10, R0);
    REQUIRE(tr.terminal == TerminalKind::Escaped);
    REQUIRE(tr.certificate.has_value());
    CHECK(tr.certificate->t_star <= 2.0 * R0 + 1e-6);
    CHECK(tr.certificate->radius > R0);
    CHECK(tr.certificate->radial_derivative >= 0.0);
    CHECK(tr.certificate->M_local == doctest::Approx(2.0).epsilon(1e-10));

    const TrappingResult res = classify_trapping(m, tr, R0);
    CHECK(res.verdict == TrappingVerdict::ForwardNonTrapped);
}

TEST_CASE("orbit inside R0 stays undetermined") {
    const MetricSpec m = minkowski(1);
    const Trajectory tr = integrate_hamilton(m, state({0, 0}, {1, 1}), 0.5, 1e-10);
    CHECK(classify_trapping(m, tr, 10.0).verdict == TrappingVerdict::Undetermined);
}

TEST_CASE("H_p^2(|x|^2) analytic assembly matches nested FD bracket") {
    std::mt19937_64 rng(23);
    std::normal_distribution<double> gs(0.0, 5.0);
    for (const char* shape : {"radial_bump", "offdiag_cosine"}) {
        const MetricSpec m = perturbed_family(1, 1.0, 0.05, shape);
        for (int trial = 0; trial < 20; ++trial) {
            Vec x(2), xi(2);
            x << gs(rng), gs(rng);
            xi << gs(rng), gs(rng);
            const double ana = hp2_radius_sq(m, x, xi);
            const double fd = hp2_fd(m, x, xi);
            CHECK(std::abs(ana - fd) <= 1e-5 * (1.0 + std::abs(ana)));
        }
    }
}

TEST_CASE("escape-function estimate: exact flat value and perturbed window") {
    const NormReport flat = escape_function_check(minkowski(1), 5.0, 2000);
    CHECK(flat.at("M_estimate") == doctest::Approx(2.0).epsilon(1e-10));

    const MetricSpec mp = perturbed_family(1, 1.0, 0.05, "radial_bump");
    const double M = escape_function_check(mp, 20.0, 4000).at("M_estimate");
    CHECK(M > 1.5);
    CHECK(M < 2.5);

    const MetricSpec mz = perturbed_family(1, 1.0, 0.0, "radial_bump");
    CHECK(escape_function_check(mz, 20.0, 1000).at("M_estimate") ==
          doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("momentum envelope") {
    const MetricSpec m = minkowski(1);
    const Trajectory tr = integrate_hamilton(m, state({0, 0}, {1, 1}), 10.0, 1e-10);
    const auto [c1, c2] = momentum_envelope(tr);
    CHECK(c1 == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(c2 == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));

    const MetricSpec mp = perturbed_family(1, 1.0, 0.05, "radial_bump");
    Vec xi_y(1);
    xi_y << 1.0;
    const PhaseState s0 = null_lift(mp, Vec::Zero(2), xi_y, +1);
    const Trajectory tf = integrate_hamilton(mp, s0, 1000.0, 1e-10);
    const auto [p1, p2] = momentum_envelope(tf);
    CHECK(p2 / p1 <= 2.0);
    const Trajectory tf2 = integrate_hamilton(mp, s0, 2000.0, 1e-10);
    const auto [q1, q2] = momentum_envelope(tf2);
    CHECK(std::abs(q2 / q1 - p2 / p1) <= 0.01 * (p2 / p1));
    const Trajectory tb = integrate_hamilton(mp, s0, -1000.0, 1e-10);
    const auto [b1, b2] = momentum_envelope(tb);
    CHECK(b2 / b1 <= 2.0);
}

TEST_CASE("completeness probe statuses") {
    const MetricSpec m = minkowski(1);
    const CompletenessReport flat =
        completeness_probe(m, state({0, 0}, {1, 1}), 100.0, 1e-10, 10.0);
    CHECK(flat.forward == CompletenessStatus::Escaped);
    CHECK(flat.backward == CompletenessStatus::Escaped);

    const MetricSpec mp = perturbed_family(1, 1.0, 0.05, "radial_bump");
    const CompletenessReport slow =
        completeness_probe(mp, state({0, 0}, {1.0, 0.05}), 1e4, 1e-8, 20.0);
    CHECK(slow.forward != CompletenessStatus::Suspect);
    CHECK(slow.backward != CompletenessStatus::Suspect);
}

TEST_CASE("C_mu quadrature") {
    CHECK(c_mu_constant(1.0) == doctest::Approx(M_PI / 2.0).epsilon(1e-9));
    // closed form: C_mu = sqrt(pi) Gamma(mu/2) / (2 Gamma((1+mu)/2))
    auto closed = [](double mu) {
        return std::sqrt(M_PI) * std::tgamma(mu / 2.0) / (2.0 * std::tgamma((1.0 + mu) / 2.0));
    };
    for (const double mu : {0.5, 2.0, 7.0, 20.0})
        CHECK(c_mu_constant(mu) == doctest::Approx(closed(mu)).epsilon(1e-9));
    const double c_small = c_mu_constant(1e-3);
    CHECK(std::isfinite(c_small));
    CHECK(c_small > 100.0);
}
