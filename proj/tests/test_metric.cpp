#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "minklab/metric.hpp"

using namespace minklab;

TEST_CASE("minkowski dual metric is constant diag(-1,1,...)") {
    const MetricSpec m1 = minkowski(1);
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g(0.0, 50.0);
    for (int k = 0; k < 32; ++k) {
        Vec x(2);
        x << g(rng), g(rng);
        const Mat gm = m1.dual_metric(x);
        CHECK(gm(0, 0) == -1.0);
        CHECK(gm(0, 1) == 0.0);
        CHECK(gm(1, 0) == 0.0);
        CHECK(gm(1, 1) == 1.0);
    }
    const MetricSpec m3 = minkowski(3);
    const Mat g0 = m3.dual_metric(Vec::Zero(4));
    Eigen::SelfAdjointEigenSolver<Mat> es(g0);
    CHECK(es.eigenvalues()[0] == doctest::Approx(-1.0));
    for (int i = 1; i < 4; ++i) CHECK(es.eigenvalues()[i] == doctest::Approx(1.0));
}

TEST_CASE("minkowski decay bound holds with C=0 far out") {
    const MetricSpec m = minkowski(1);
    Vec x(2);
    x << 1e6, 1e6;
    const Mat diff = m.dual_metric(x) - m.minkowski_dual();
    CHECK(diff.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("eps_pert=0 perturbed family collapses to minkowski") {
    const MetricSpec m = perturbed_family(2, 1.0, 0.0, "radial_bump");
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g(0.0, 10.0);
    for (int k = 0; k < 16; ++k) {
        Vec x(3);
        x << g(rng), g(rng), g(rng);
        CHECK((m.dual_metric(x) - m.minkowski_dual()).norm() == 0.0);
        for (int l = 0; l < 3; ++l) CHECK(m.dual_metric_dx(x, l).norm() == 0.0);
    }
}

TEST_CASE("radial bump satisfies the first-order decay bound on samples") {
    const MetricSpec m = perturbed_family(1, 1.0, 0.1, "radial_bump");
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-200.0, 200.0);
    for (int k = 0; k < 10000; ++k) {
        Vec x(2);
        x << u(rng), u(rng);
        const double jap_x = std::sqrt(1.0 + x.squaredNorm());
        const Mat diff = m.dual_metric(x) - m.minkowski_dual();
        CHECK(diff.cwiseAbs().maxCoeff() * jap_x <= 0.1 + 1e-12);
    }
}

TEST_CASE("signature-violating perturbation is rejected") {
    CHECK_THROWS_AS(perturbed_family(1, 1.0, 5.0, "radial_bump"), std::invalid_argument);
}

TEST_CASE("hamiltonian values and dense-contraction oracle") {
    const MetricSpec m = minkowski(1);
    Vec x = Vec::Zero(2), xi(2);
    xi << 1.0, 1.0;
    CHECK(hamiltonian(m, x, xi) == 0.0);
    xi << 1.0, 0.0;
    CHECK(hamiltonian(m, x, xi) == -0.5);

    const MetricSpec mp = perturbed_family(1, 1.0, 0.1, "radial_bump");
    xi << 0.0, 1.0;
    const Mat g = mp.dual_metric(x);
    CHECK(hamiltonian(mp, x, xi) == doctest::Approx(0.5 * g(1, 1)).epsilon(1e-15));
    // brute-force contraction
    double acc = 0.0;
    for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) acc += 0.5 * g(j, k) * xi[j] * xi[k];
    CHECK(hamiltonian(mp, x, xi) == doctest::Approx(acc).epsilon(1e-15));
}

TEST_CASE("grad_p matches central finite differences") {
    const MetricSpec m = perturbed_family(2, 1.5, 0.1, "offdiag_cosine");
    std::mt19937_64 rng(5);
    std::normal_distribution<double> gs(0.0, 2.0);
    const double h = 1e-5;
    for (int trial = 0; trial < 25; ++trial) {
        Vec x(3), xi(3);
        for (int i = 0; i < 3; ++i) {
            x[i] = gs(rng);
            xi[i] = gs(rng);
        }
        const PGrad gr = grad_p(m, x, xi);
        const double scale = std::max(1.0, gr.dx.norm() + gr.dxi.norm());
        for (int l = 0; l < 3; ++l) {
            Vec xp = x, xm = x;
            xp[l] += h;
            xm[l] -= h;
            const double fd_x =
                (hamiltonian(m, xp, xi) - hamiltonian(m, xm, xi)) / (2.0 * h);
            CHECK(std::abs(gr.dx[l] - fd_x) <= 1e-6 * scale);
            Vec xip = xi, xim = xi;
            xip[l] += h;
            xim[l] -= h;
            const double fd_xi =
                (hamiltonian(m, x, xip) - hamiltonian(m, x, xim)) / (2.0 * h);
            CHECK(std::abs(gr.dxi[l] - fd_xi) <= 1e-6 * scale);
        }
    }
}

TEST_CASE("second metric derivatives match finite differences of the first") {
    const MetricSpec m = perturbed_family(1, 1.0, 0.1, "offdiag_cosine");
    std::mt19937_64 rng(9);
    std::normal_distribution<double> gs(0.0, 3.0);
    const double h = 1e-5;
    for (int trial = 0; trial < 10; ++trial) {
        Vec x(2);
        x << gs(rng), gs(rng);
        for (int l = 0; l < 2; ++l)
            for (int mm = 0; mm < 2; ++mm) {
                Vec xp = x, xm = x;
                xp[mm] += h;
                xm[mm] -= h;
                const Mat fd =
                    (m.dual_metric_dx(xp, l) - m.dual_metric_dx(xm, l)) / (2.0 * h);
                CHECK((m.dual_metric_dxx(x, l, mm) - fd).cwiseAbs().maxCoeff() <= 1e-6);
            }
    }
}

TEST_CASE("primal metric inverts the dual") {
    const MetricSpec m0 = minkowski(2);
    const Vec zero = Vec::Zero(3);
    CHECK((primal_metric(m0, zero) - m0.dual_metric(zero)).norm() == 0.0);

    const MetricSpec mp = perturbed_family(2, 1.0, 0.1, "radial_bump");
    const Mat prod = primal_metric(mp, zero) * mp.dual_metric(zero);
    CHECK((prod - Mat::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("causal classification") {
    const MetricSpec m = minkowski(1);
    const Vec zero = Vec::Zero(2);
    Vec v(2);
    v << 1.0, 1.0;
    CHECK(causal_type(m, zero, v) == CausalType::Null);
    v << 1.0, 0.0;
    CHECK(causal_type(m, zero, v) == CausalType::Timelike);
    v << 0.0, 1.0;
    CHECK(causal_type(m, zero, v) == CausalType::Spacelike);
}

TEST_CASE("symbol class constants vanish for minkowski and stay stable") {
    SampleSpec s;
    s.n_samples = 2000;
    const NormReport flat = symbol_class_check(minkowski(1), 2, s);
    CHECK(flat.at("C_alpha_0") == 0.0);
    CHECK(flat.at("C_alpha_1") == 0.0);
    CHECK(flat.at("C_alpha_2") == 0.0);
    CHECK(flat.at("decay_violation") == 0.0);

    const MetricSpec mp = perturbed_family(1, 1.0, 0.1, "radial_bump");
    SampleSpec s2 = s, s3 = s, s4 = s;
    s2.radius = 1e2;
    s3.radius = 1e3;
    s4.radius = 1e4;
    const double c2 = symbol_class_check(mp, 1, s2).at("C_alpha_1");
    const double c3 = symbol_class_check(mp, 1, s3).at("C_alpha_1");
    const double c4 = symbol_class_check(mp, 1, s4).at("C_alpha_1");
    CHECK(symbol_class_check(mp, 0, s3).at("C_alpha_0") ==
          doctest::Approx(0.1).epsilon(0.05));
    CHECK(std::abs(c3 - c2) <= 0.05 * c3);
    CHECK(std::abs(c4 - c3) <= 0.05 * c3);
    CHECK(symbol_class_check(mp, 2, s3).at("decay_violation") == 0.0);
}
