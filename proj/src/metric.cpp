#include "minklab/metric.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

namespace minklab {

namespace {

// decay factor w(x) = <x>^{-mu} and its first two derivatives
double decay_w(const Vec& x, double mu) { return std::pow(jap(x), -mu); }

double decay_w_dx(const Vec& x, double mu, int l) {
    return -mu * x[l] * std::pow(jap(x), -mu - 2.0);
}

double decay_w_dxx(const Vec& x, double mu, int l, int m) {
    const double j2 = 1.0 + x.squaredNorm();
    const double base = std::pow(jap(x), -mu - 4.0);
    const double kron = (l == m) ? 1.0 : 0.0;
    return -mu * base * (kron * j2 - (mu + 2.0) * x[l] * x[m]);
}

}  // namespace

Mat MetricSpec::minkowski_dual() const {
    Mat g0 = Mat::Identity(dim(), dim());
    g0(0, 0) = -1.0;
    return g0;
}

Mat MetricSpec::dual_metric(const Vec& x) const {
    Mat g = minkowski_dual();
    if (eps == 0.0 || shape == "minkowski") return g;
    const double w = eps * decay_w(x, mu);
    if (shape == "radial_bump") {
        for (int j = 0; j < dim(); ++j) g(j, j) += w;
    } else if (shape == "offdiag_cosine") {
        const double c = std::cos(x[0] + x[1]);
        g(0, 1) += w * c;
        g(1, 0) += w * c;
    } else {
        throw std::invalid_argument("unknown metric shape: " + shape);
    }
    return g;
}

Mat MetricSpec::dual_metric_dx(const Vec& x, int l) const {
    Mat d = Mat::Zero(dim(), dim());
    if (eps == 0.0 || shape == "minkowski") return d;
    const double wl = eps * decay_w_dx(x, mu, l);
    if (shape == "radial_bump") {
        for (int j = 0; j < dim(); ++j) d(j, j) = wl;
    } else if (shape == "offdiag_cosine") {
        const double w = eps * decay_w(x, mu);
        const double c = std::cos(x[0] + x[1]);
        const double s = std::sin(x[0] + x[1]);
        const double cl = (l <= 1) ? -s : 0.0;
        const double v = wl * c + w * cl;
        d(0, 1) = v;
        d(1, 0) = v;
    }
    return d;
}

Mat MetricSpec::dual_metric_dxx(const Vec& x, int l, int m) const {
    Mat d = Mat::Zero(dim(), dim());
    if (eps == 0.0 || shape == "minkowski") return d;
    const double wlm = eps * decay_w_dxx(x, mu, l, m);
    if (shape == "radial_bump") {
        for (int j = 0; j < dim(); ++j) d(j, j) = wlm;
    } else if (shape == "offdiag_cosine") {
        const double w = eps * decay_w(x, mu);
        const double wl = eps * decay_w_dx(x, mu, l);
        const double wm = eps * decay_w_dx(x, mu, m);
        const double c = std::cos(x[0] + x[1]);
        const double s = std::sin(x[0] + x[1]);
        const double cl = (l <= 1) ? -s : 0.0;
        const double cm = (m <= 1) ? -s : 0.0;
        const double clm = (l <= 1 && m <= 1) ? -c : 0.0;
        const double v = wlm * c + wl * cm + wm * cl + w * clm;
        d(0, 1) = v;
        d(1, 0) = v;
    }
    return d;
}

MetricSpec minkowski(int n) {
    if (n < 1) throw std::invalid_argument("minkowski: spatial dimension must be >= 1");
    MetricSpec m;
    m.n = n;
    m.mu = 1.0;
    m.eps = 0.0;
    m.shape = "minkowski";
    return m;
}

namespace {

bool lorentzian_signature(const Mat& g, int n) {
    Eigen::SelfAdjointEigenSolver<Mat> es(g);
    const auto& ev = es.eigenvalues();
    int neg = 0, pos = 0;
    for (int i = 0; i < ev.size(); ++i) {
        if (ev[i] < 0) ++neg;
        else if (ev[i] > 0) ++pos;
    }
    return neg == 1 && pos == n;
}

}  // namespace

MetricSpec perturbed_family(int n, double mu, double eps, const std::string& shape) {
    if (n < 1) throw std::invalid_argument("perturbed_family: n must be >= 1");
    if (mu <= 0) throw std::invalid_argument("perturbed_family: mu must be > 0");
    if (eps < 0) throw std::invalid_argument("perturbed_family: eps must be >= 0");
    MetricSpec m;
    m.n = n;
    m.mu = mu;
    m.eps = eps;
    m.shape = (eps == 0.0) ? "minkowski" : shape;
    if (m.shape == "minkowski") return m;

    // signature check: dense ball of radius 200 plus dyadic shells
    std::mt19937_64 rng(99);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    auto check_at = [&](const Vec& x) {
        if (!lorentzian_signature(m.dual_metric(x), n)) {
            std::ostringstream os;
            os << "perturbed_family: Lorentzian signature violated at x = [";
            for (int i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
            os << "]";
            throw std::invalid_argument(os.str());
        }
    };
    check_at(Vec::Zero(n + 1));
    for (int k = 0; k < 4000; ++k) {
        Vec dir(n + 1);
        for (int i = 0; i <= n; ++i) dir[i] = gauss(rng);
        dir.normalize();
        check_at(200.0 * unif(rng) * dir);
    }
    for (double r = 256.0; r <= 4096.0; r *= 2.0) {
        for (int k = 0; k < 200; ++k) {
            Vec dir(n + 1);
            for (int i = 0; i <= n; ++i) dir[i] = gauss(rng);
            dir.normalize();
            check_at(r * dir);
        }
    }
    return m;
}

double hamiltonian(const MetricSpec& m, const Vec& x, const Vec& xi) {
    return 0.5 * xi.dot(m.dual_metric(x) * xi);
}

PGrad grad_p(const MetricSpec& m, const Vec& x, const Vec& xi) {
    PGrad g;
    g.dxi = m.dual_metric(x) * xi;
    g.dx = Vec::Zero(m.dim());
    if (m.eps != 0.0 && m.shape != "minkowski") {
        for (int l = 0; l < m.dim(); ++l)
            g.dx[l] = 0.5 * xi.dot(m.dual_metric_dx(x, l) * xi);
    }
    return g;
}

Mat primal_metric(const MetricSpec& m, const Vec& x) {
    const Mat g = m.dual_metric(x);
    Eigen::FullPivLU<Mat> lu(g);
    if (!lu.isInvertible())
        throw std::domain_error("primal_metric: dual metric not invertible");
    return lu.inverse();
}

CausalType causal_type(const MetricSpec& m, const Vec& x, const Vec& v, double tol_null) {
    const double q = v.dot(primal_metric(m, x) * v);
    if (std::abs(q) <= tol_null * v.squaredNorm()) return CausalType::Null;
    return q < 0 ? CausalType::Timelike : CausalType::Spacelike;
}

NormReport symbol_class_check(const MetricSpec& m, int depth, const SampleSpec& spec) {
    if (depth < 0 || depth > 2)
        throw std::invalid_argument("symbol_class_check: depth must be in [0,2]");
    NormReport rep;
    rep.name = "symbol_class_check";
    rep.meta["shape"] = m.shape;
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const int d = m.dim();

    auto sup_on_shell = [&](double r_lo, double r_hi, int order) {
        double sup = 0.0;
        for (int k = 0; k < spec.n_samples; ++k) {
            Vec dir(d);
            for (int i = 0; i < d; ++i) dir[i] = gauss(rng);
            dir.normalize();
            const Vec x = (r_lo + (r_hi - r_lo) * unif(rng)) * dir;
            const double w = std::pow(jap(x), m.mu + order);
            double entry_max = 0.0;
            if (order == 0) {
                const Mat h = m.dual_metric(x) - m.minkowski_dual();
                entry_max = h.cwiseAbs().maxCoeff();
            } else if (order == 1) {
                for (int l = 0; l < d; ++l)
                    entry_max = std::max(entry_max, m.dual_metric_dx(x, l).cwiseAbs().maxCoeff());
            } else {
                for (int l = 0; l < d; ++l)
                    for (int mm = l; mm < d; ++mm)
                        entry_max = std::max(entry_max,
                                             m.dual_metric_dxx(x, l, mm).cwiseAbs().maxCoeff());
            }
            sup = std::max(sup, entry_max * w);
        }
        return sup;
    };

    std::vector<std::pair<double, double>> shells;
    shells.emplace_back(0.0, 10.0);
    for (double lo = 10.0; lo < spec.radius; lo *= 2.0)
        shells.emplace_back(lo, std::min(lo * 2.0, spec.radius));

    bool violation = false;
    for (int order = 0; order <= depth; ++order) {
        double overall = 0.0;
        double prev_shell = -1.0;
        for (const auto& [lo, hi] : shells) {
            const double s = sup_on_shell(lo, hi, order);
            overall = std::max(overall, s);
            if (lo >= 10.0) {
                if (prev_shell >= 0.0 && s > prev_shell * 1.05 && s > 1e-14)
                    violation = true;
                prev_shell = s;
            }
        }
        rep.values["C_alpha_" + std::to_string(order)] = overall;
    }
    rep.values["decay_violation"] = violation ? 1.0 : 0.0;
    return rep;
}

}  // namespace minklab
