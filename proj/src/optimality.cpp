#include "minklab/optimality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "minklab/field.hpp"
#include "minklab/resolvent.hpp"

namespace minklab {

namespace {

double mollifier_step(double s) {
    // 0 for s<=0, 1 for s>=1, smooth monotone in between
    if (s <= 0.0) return 0.0;
    if (s >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / s);
    const double b = std::exp(-1.0 / (1.0 - s));
    return a / (a + b);
}

constexpr double kSurface[4] = {0.0, 2.0, 2.0 * M_PI, 4.0 * M_PI};  // |S^{n-1}|

}  // namespace

double chi_bump(double s) {
    if (s <= 0.25 || s >= 1.0) return 0.0;
    if (s < 0.5) return mollifier_step(4.0 * s - 1.0);
    if (s <= 0.75) return 1.0;
    return mollifier_step(4.0 - 4.0 * s);
}

cplx source_g(const CounterexampleParams& p, double t, double eta_abs) {
    const double j = std::sqrt(1.0 + eta_abs * eta_abs);
    const double amp = std::pow(j, -(p.n + 1.0) / 2.0 - p.eps) * chi_bump(t / j);
    if (amp == 0.0) return 0.0;
    const SymbolValue sv = symbol_at(eta_abs * eta_abs);
    return amp * std::exp(cplx(0.0, t * sv.a1));
}

namespace {

double bt_integral(double t, double jap_eta, double a2) {
    // int_{1/4}^1 e^{-(s - t/<eta>) <eta> a2} chi(s) ds
    const double rate = jap_eta * a2;
    const double t0 = t / jap_eta;
    boost::math::quadrature::tanh_sinh<double> integ;
    return integ.integrate(
        [&](double s) { return std::exp(-(s - t0) * rate) * chi_bump(s); }, 0.25, 1.0,
        1e-10);
}

}  // namespace

cplx kernel_bt(const CounterexampleParams& p, double t, double eta_abs) {
    if (t <= 0.0 || t >= 0.25)
        throw std::invalid_argument("kernel_bt: t must lie in (0, 1/4)");
    const double j = std::sqrt(1.0 + eta_abs * eta_abs);
    const SymbolValue sv = symbol_at(eta_abs * eta_abs);
    const double I = bt_integral(t, j, sv.a2);
    return cplx(0.0, 0.5) * std::pow(j, 1.0 - p.n / 2.0) / sv.a * I;
}

cplx kernel_bt_deta(const CounterexampleParams& p, double t, double eta_abs) {
    if (t <= 0.0 || t >= 0.25)
        throw std::invalid_argument("kernel_bt_deta: t must lie in (0, 1/4)");
    const double e = eta_abs;
    const double j = std::sqrt(1.0 + e * e);
    const double jp = e / j;  // d<eta>/d|eta|
    const SymbolValue sv = symbol_at(e * e);
    // dr/d|eta| etc. from r^4 = |eta|^4 + 1, a1^2 = (r^2+|eta|^2)/2, a2 = 1/(2 a1)
    const double rp = e * e * e / (sv.r * sv.r * sv.r);
    const double a1p = (sv.r * rp + e) / (2.0 * sv.a1);
    const double a2p = -a1p / (2.0 * sv.a1 * sv.a1);
    const cplx ap(a1p, -a2p);

    const double rate = j * sv.a2;
    const double ratep = jp * sv.a2 + j * a2p;
    const double t0 = t / j;
    const double t0p = -t * jp / (j * j);

    boost::math::quadrature::tanh_sinh<double> integ;
    const double I = bt_integral(t, j, sv.a2);
    const double Ip = integ.integrate(
        [&](double s) {
            const double w = std::exp(-(s - t0) * rate);
            return w * chi_bump(s) * (-(s - t0) * ratep + t0p * rate);
        },
        0.25, 1.0, 1e-10);

    const double pw = 1.0 - p.n / 2.0;
    const cplx pref = cplx(0.0, 0.5) * std::pow(j, pw) / sv.a;
    const cplx prefp = cplx(0.0, 0.5) * (pw * std::pow(j, pw - 1.0) * jp / sv.a -
                                         std::pow(j, pw) * ap / (sv.a * sv.a));
    return prefp * I + pref * Ip;
}

NormReport verify_bt_bounds(const CounterexampleParams& p,
                            const std::vector<double>& eta_list,
                            const std::vector<double>& t_list, double ratio_ceiling) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (double t : t_list) {
        for (double e : eta_list) {
            const double j = std::sqrt(1.0 + e * e);
            const double v = std::pow(j, p.n / 2.0) * std::abs(kernel_bt(p, t, e));
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    NormReport rep;
    rep.name = "verify_bt_bounds";
    rep.values["c"] = lo;
    rep.values["C"] = hi;
    rep.values["ratio"] = (lo > 0.0) ? hi / lo : std::numeric_limits<double>::infinity();
    rep.values["n_eta"] = static_cast<double>(eta_list.size());
    rep.values["n_t"] = static_cast<double>(t_list.size());
    rep.values["passed"] = (lo > 0.0 && hi / lo <= ratio_ceiling) ? 1.0 : 0.0;
    return rep;
}

DivergenceScan divergence_scan(const CounterexampleParams& p,
                               const std::vector<double>& lambda_list) {
    if (lambda_list.empty())
        throw std::invalid_argument("divergence_scan: empty Lambda list");
    for (std::size_t i = 1; i < lambda_list.size(); ++i)
        if (lambda_list[i] <= lambda_list[i - 1])
            throw std::invalid_argument("divergence_scan: Lambda list must be ascending");

    const double surf = kSurface[p.n];
    boost::math::quadrature::gauss<double, 48> gq;

    auto integrand = [&](double rho, double reweight) {
        const double j2 = 1.0 + rho * rho;
        const double b2 = std::norm(kernel_bt(p, p.t_obs, rho));
        return surf * std::pow(rho, p.n - 1.0) * std::pow(j2, reweight) * b2;
    };

    DivergenceScan scan;
    double d_he = 0.0, d_h = 0.0, d_h2 = 0.0;
    double prev = 0.0;
    for (double lam : lambda_list) {
        // panel [prev, lam]; integrate in log rho away from 0
        auto panel = [&](double reweight) {
            if (prev <= 0.0 || lam / prev > 1.0001) {
                if (prev < 1e-8) {
                    return gq.integrate([&](double r) { return integrand(r, reweight); },
                                        prev, lam);
                }
                return gq.integrate(
                    [&](double x) {
                        const double r = std::exp(x);
                        return integrand(r, reweight) * r;
                    },
                    std::log(prev), std::log(lam));
            }
            return 0.0;
        };
        d_he += panel(0.0);
        d_h += panel(-p.eps);
        d_h2 += panel(p.eps);
        scan.rows.push_back({lam, d_he, d_h, d_h2});
        prev = lam;
    }

    // slope fit over the last three dyadic increments of D(.,1/2+eps)
    std::vector<double> alphas;
    for (std::size_t i = scan.rows.size(); i-- > 1 && alphas.size() < 3;) {
        const double ratio = scan.rows[i].Lambda / scan.rows[i - 1].Lambda;
        if (std::abs(ratio - 2.0) < 1e-9) {
            alphas.push_back((scan.rows[i].D_half_eps - scan.rows[i - 1].D_half_eps) /
                             std::log(2.0));
        }
    }
    if (!alphas.empty()) {
        double mean = 0.0, mn = alphas[0], mx = alphas[0];
        for (double a : alphas) {
            mean += a;
            mn = std::min(mn, a);
            mx = std::max(mx, a);
        }
        mean /= static_cast<double>(alphas.size());
        scan.alpha = mean;
        scan.alpha_drift = (mean != 0.0) ? (mx - mn) / std::abs(mean) : 0.0;
    }
    return scan;
}

CrossValidation crossvalidate_with_resolvent(const CounterexampleParams& p,
                                             double Lambda0, const GridSpec& grid) {
    grid.validate();
    if (grid.n != 1)
        throw std::invalid_argument("crossvalidate_with_resolvent: n = 1 required");
    const double eta_max = M_PI * (grid.N_y / 2) / grid.L;
    if (eta_max < Lambda0)
        throw std::invalid_argument(
            "crossvalidate_with_resolvent: grid too coarse for the band limit");

    // build the band-limited source directly on the dual lattice
    SpaceTimeField ghat(grid, true);
    const std::size_t ny = grid.ny_total();
    for (int it = 0; it < grid.N_t; ++it) {
        const double t = grid.t(it);
        for (std::size_t iy = 0; iy < ny; ++iy) {
            const double e = std::sqrt(grid.eta_sq(iy));
            ghat.at(it, iy) = (e <= Lambda0) ? source_g(p, t, e) : 0.0;
        }
    }
    const SpaceTimeField f = inverse_fourier_y(ghat);

    ResolventPlan plan(grid, 4, /*enforce=*/false);
    const SpaceTimeField u = apply_resolvent(plan, f);

    // nearest grid time to t_obs
    int it_obs = static_cast<int>(std::lround((p.t_obs - grid.T0) / grid.dt()));
    it_obs = std::clamp(it_obs, 0, grid.N_t - 1);
    const double t_used = grid.t(it_obs);

    const SpaceTimeField mult = apply_multiplier(
        apply_multiplier(u, sym_jap_pow(plan.table, 0.5 + p.eps)),
        sym_exp_ita1(plan.table, -t_used));
    const SpaceTimeField mhat = fourier_y(mult);

    CrossValidation cv;
    cv.t_used = t_used;
    CounterexampleParams q = p;
    for (std::size_t iy = 0; iy < ny; ++iy) {
        const double e = std::sqrt(grid.eta_sq(iy));
        if (e > Lambda0) continue;
        const cplx expected = kernel_bt(q, t_used, e);
        const cplx got = mhat.at(it_obs, iy);
        const double rel = std::abs(got - expected) / std::abs(expected);
        cv.max_rel_error = std::max(cv.max_rel_error, rel);
        ++cv.modes_compared;
    }
    return cv;
}

}  // namespace minklab
