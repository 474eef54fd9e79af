#include "minklab/runners.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <vector>

#include <json.hpp>

#include "minklab/geodesic.hpp"
#include "minklab/metric.hpp"
#include "minklab/optimality.hpp"
#include "minklab/resolvent.hpp"

namespace minklab {

namespace {

constexpr const char* kVersion = "0.1.0";

std::string fmt_g(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

class Stopwatch {
  public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
            .count();
    }

  private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void write_text(const std::string& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open output file: " + path);
    os << text;
}

void write_manifest(const ExperimentConfig& cfg, const std::string& out_dir,
                    std::uint64_t seed, double wall_seconds) {
    nlohmann::json j;
    char hash[32];
    std::snprintf(hash, sizeof(hash), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(cfg.raw_text)));
    j["config_hash"] = hash;
    j["version"] = kVersion;
    j["seed"] = seed;
    j["wall_seconds"] = wall_seconds;
    write_text(out_dir + "/manifest.json", j.dump(2) + "\n");
}

MetricSpec metric_from_config(const ExperimentConfig& cfg) {
    const std::string id = cfg.get_str("metric", "id", "minkowski");
    const int n = static_cast<int>(cfg.get_int("metric", "n", 1));
    if (id == "minkowski") return minkowski(n);
    const double mu = cfg.get_double("metric", "mu", 1.0);
    const double eps = cfg.get_double("metric", "eps_pert", 0.05);
    return perturbed_family(n, mu, eps, id);
}

const char* status_name(CompletenessStatus s) {
    switch (s) {
        case CompletenessStatus::Escaped: return "escaped";
        case CompletenessStatus::CompleteSoFar: return "complete_so_far";
        default: return "suspect";
    }
}

const char* causal_name(CausalType c) {
    switch (c) {
        case CausalType::Null: return "null";
        case CausalType::Timelike: return "timelike";
        default: return "spacelike";
    }
}

}  // namespace

int run_geodesic(const ExperimentConfig& cfg, const std::string& out_dir,
                 std::uint64_t seed) {
    Stopwatch sw;
    std::filesystem::create_directories(out_dir);
    const MetricSpec m = metric_from_config(cfg);
    const int ensemble = static_cast<int>(cfg.get_int("geodesic", "ensemble", 200));
    const double t_max = cfg.get_double("geodesic", "t_max", 500.0);
    const double tol = cfg.get_double("geodesic", "tol", 1e-10);
    const double R0 = cfg.get_double("geodesic", "R0", 20.0);
    const double null_fraction = cfg.get_double("geodesic", "null_fraction", 0.5);
    const int d = m.dim();

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    std::string csv = "shot,causal_type,forward_status,backward_status,C1,C2,t_exit";
    for (int i = 0; i < d; ++i) csv += ",x" + std::to_string(i);
    for (int i = 0; i < d; ++i) csv += ",xi" + std::to_string(i);
    csv += "\n";

    int suspects = 0, escaped = 0, certified = 0;
    for (int shot = 0; shot < ensemble; ++shot) {
        Vec x(d);
        for (int i = 0; i < d; ++i) x[i] = 2.0 * gauss(rng);
        PhaseState s0;
        if (unif(rng) < null_fraction) {
            Vec xi_y(d - 1);
            for (int i = 0; i < d - 1; ++i) xi_y[i] = gauss(rng);
            if (xi_y.norm() < 1e-12) xi_y[0] = 1.0;
            s0 = null_lift(m, x, xi_y, unif(rng) < 0.5 ? 1 : -1);
        } else {
            Vec xi(d);
            for (int i = 0; i < d; ++i) xi[i] = gauss(rng);
            xi.normalize();
            s0 = PhaseState{x, xi};
        }
        const CausalType ct = causal_type(m, s0.x, m.dual_metric(s0.x) * s0.xi);

        const Trajectory fwd = integrate_hamilton(m, s0, t_max, tol, R0);
        const Trajectory bwd = integrate_hamilton(m, s0, -t_max, tol, R0);
        const auto [c1f, c2f] = momentum_envelope(fwd);
        const auto [c1b, c2b] = momentum_envelope(bwd);
        const double c1 = std::min(c1f, c1b), c2 = std::max(c2f, c2b);

        auto status_of = [](const Trajectory& tr) {
            switch (tr.terminal) {
                case TerminalKind::Escaped: return CompletenessStatus::Escaped;
                case TerminalKind::ReachedMaxTime: return CompletenessStatus::CompleteSoFar;
                default: return CompletenessStatus::Suspect;
            }
        };
        const CompletenessStatus sf = status_of(fwd), sb = status_of(bwd);
        if (sf == CompletenessStatus::Suspect || sb == CompletenessStatus::Suspect)
            ++suspects;
        if (sf == CompletenessStatus::Escaped) ++escaped;

        const TrappingResult trap = classify_trapping(m, fwd, R0);
        double t_exit = std::numeric_limits<double>::quiet_NaN();
        if (trap.verdict == TrappingVerdict::ForwardNonTrapped) {
            ++certified;
            t_exit = trap.certificate->t_star;
        }

        csv += std::to_string(shot);
        csv += ",";
        csv += causal_name(ct);
        csv += ",";
        csv += status_name(sf);
        csv += ",";
        csv += status_name(sb);
        csv += "," + fmt_g(c1) + "," + fmt_g(c2) + "," + fmt_g(t_exit);
        for (int i = 0; i < d; ++i) csv += "," + fmt_g(s0.x[i]);
        for (int i = 0; i < d; ++i) csv += "," + fmt_g(s0.xi[i]);
        csv += "\n";
    }
    write_text(out_dir + "/shots.csv", csv);

    nlohmann::json j;
    j["name"] = "geodesic_ensemble";
    j["ensemble"] = ensemble;
    j["suspects"] = suspects;
    j["forward_escaped"] = escaped;
    j["certified_non_trapped"] = certified;
    j["metric"] = m.shape;
    write_text(out_dir + "/report.json", j.dump(2) + "\n");
    write_manifest(cfg, out_dir, seed, sw.seconds());
    return suspects == 0 ? 0 : 1;
}

int run_mourre(const ExperimentConfig& cfg, const std::string& out_dir,
               std::uint64_t seed) {
    Stopwatch sw;
    std::filesystem::create_directories(out_dir);
    const MetricSpec m = metric_from_config(cfg);
    const std::vector<double> ladder =
        cfg.get_list("mourre", "R0_ladder", {2.0, 5.0, 10.0, 20.0, 40.0});
    const int n_samples = static_cast<int>(cfg.get_int("mourre", "n_samples", 4000));

    nlohmann::json j;
    j["name"] = "mourre_escape_function";
    j["metric"] = m.shape;
    double best_R0 = -1.0, best_M = 0.0;
    nlohmann::json ladder_json = nlohmann::json::array();
    for (double r0 : ladder) {
        const NormReport rep = escape_function_check(m, r0, n_samples, seed);
        const double M = rep.at("M_estimate");
        ladder_json.push_back({{"R0", r0}, {"M_estimate", M}});
        if (best_R0 < 0.0 && M > 0.1) {
            best_R0 = r0;
            best_M = M;
        }
    }
    j["ladder"] = ladder_json;
    j["smallest_passing_R0"] = best_R0;
    j["M_at_smallest_passing"] = best_M;
    write_text(out_dir + "/mourre.json", j.dump(2) + "\n");
    write_manifest(cfg, out_dir, seed, sw.seconds());
    return best_R0 > 0.0 ? 0 : 1;
}

namespace {

SpaceTimeField tensor_gaussian(const GridSpec& g, double sigma_t, double sigma_y) {
    SpaceTimeField f(g);
    const std::size_t ny = g.ny_total();
    for (int it = 0; it < g.N_t; ++it) {
        const double t = g.t(it);
        const double wt = std::exp(-t * t / (2.0 * sigma_t * sigma_t));
        for (std::size_t iy = 0; iy < ny; ++iy) {
            std::size_t rem = iy;
            double r2 = 0.0;
            for (int ax = 0; ax < g.n; ++ax) {
                const double y = g.y(static_cast<int>(rem % g.N_y));
                rem /= g.N_y;
                r2 += y * y;
            }
            f.at(it, iy) = wt * std::exp(-r2 / (2.0 * sigma_y * sigma_y));
        }
    }
    return f;
}

}  // namespace

int run_resolvent(const ExperimentConfig& cfg, const std::string& out_dir,
                  std::uint64_t seed) {
    Stopwatch sw;
    std::filesystem::create_directories(out_dir);
    GridSpec g;
    g.n = static_cast<int>(cfg.get_int("grid", "n", 1));
    g.L = cfg.get_double("grid", "L", 16.0);
    g.N_y = static_cast<int>(cfg.get_int("grid", "N_y", 256));
    g.T0 = cfg.get_double("grid", "T0", -8.0);
    g.T1 = cfg.get_double("grid", "T1", 8.0);

    const std::vector<double> nt_ladder =
        cfg.get_list("resolvent", "nt_ladder", {512, 1024, 2048});
    const double residual_max = cfg.get_double("resolvent", "residual_max", 1e-6);
    const double norm_bound = cfg.get_double("resolvent", "norm_bound", 2.0);
    const int ensemble = static_cast<int>(cfg.get_int("resolvent", "ensemble", 16));
    const double eps = cfg.get_double("resolvent", "probe_eps", 0.4);
    const double variation_max = cfg.get_double("resolvent", "probe_variation_max", 0.25);
    const double sigma_t = cfg.get_double("resolvent", "sigma_t", 0.85);

    bool ok = true;

    // residual convergence ladder
    std::string csv = "N_t,residual\n";
    double final_residual = 0.0;
    for (double ntd : nt_ladder) {
        GridSpec gi = g;
        gi.N_t = static_cast<int>(ntd);
        ResolventPlan plan(gi);
        const double res = residual_check(plan, tensor_gaussian(gi, sigma_t, 1.0));
        csv += std::to_string(gi.N_t) + "," + fmt_g(res) + "\n";
        final_residual = res;
    }
    if (final_residual > residual_max) ok = false;
    write_text(out_dir + "/residual_ladder.csv", csv);

    // operator norm
    GridSpec gn = g;
    gn.N_t = static_cast<int>(nt_ladder.back());
    ResolventPlan plan(gn);
    const NormReport norm_rep = operator_norm_probe(plan, ensemble, seed);
    if (norm_rep.at("empirical_max_ratio") > norm_bound) ok = false;
    write_text(out_dir + "/operator_norm.json", norm_rep.to_json().dump(2) + "\n");

    // smoothing probes on resonant frequency-scaled packets
    const std::vector<double> japs = cfg.get_list("resolvent", "packet_japs", {1, 8, 64});
    const int probe_nt = static_cast<int>(cfg.get_int("resolvent", "probe_N_t", 0));
    const double h1_bound = cfg.get_double("resolvent", "probe_h1_bound", 5.0);
    std::string pcsv = "jap_eta_star,locsmoy,locsm2_dt,locsm2_dy\n";
    std::vector<double> r0s;
    bool h1_ok = true;
    for (double japv : japs) {
        const SpaceTimeField f = resonant_packet(japv, probe_nt);
        const ResolventPlan pplan(f.grid, 4, false);
        const double r0 = smoothing_probe_locsmoy(pplan, f, eps);
        const Locsm2Ratios r12 = smoothing_probe_locsm2(pplan, f, eps);
        r0s.push_back(r0);
        h1_ok = h1_ok && r12.dt_ratio > 0.0 && r12.dt_ratio <= h1_bound &&
                r12.dy_ratio > 0.0 && r12.dy_ratio <= h1_bound;
        pcsv += fmt_g(japv) + "," + fmt_g(r0) + "," + fmt_g(r12.dt_ratio) + "," +
                fmt_g(r12.dy_ratio) + "\n";
    }
    const auto [pmn, pmx] = std::minmax_element(r0s.begin(), r0s.end());
    if (*pmn <= 0.0 || (*pmx - *pmn) / *pmx > variation_max || !h1_ok) ok = false;
    write_text(out_dir + "/smoothing_probes.csv", pcsv);

    nlohmann::json j;
    j["name"] = "resolvent_suite";
    j["final_residual"] = final_residual;
    j["empirical_max_ratio"] = norm_rep.at("empirical_max_ratio");
    j["analytic_sup"] = norm_rep.at("analytic_sup");
    j["passed"] = ok;
    write_text(out_dir + "/report.json", j.dump(2) + "\n");
    write_manifest(cfg, out_dir, seed, sw.seconds());
    return ok ? 0 : 1;
}

int run_optimality(const ExperimentConfig& cfg, const std::string& out_dir,
                   std::uint64_t seed) {
    Stopwatch sw;
    std::filesystem::create_directories(out_dir);
    CounterexampleParams p;
    p.n = static_cast<int>(cfg.get_int("optimality", "n", 1));
    p.eps = cfg.get_double("optimality", "eps", 0.25);
    p.t_obs = cfg.get_double("optimality", "t_obs", 0.1);

    // kernel bounds over a log grid
    const int n_eta = static_cast<int>(cfg.get_int("optimality", "eta_points", 1000));
    const double eta_lo = 1.0, eta_hi = cfg.get_double("optimality", "eta_max", 1e6);
    std::vector<double> eta_list(n_eta);
    for (int i = 0; i < n_eta; ++i)
        eta_list[i] =
            eta_lo * std::pow(eta_hi / eta_lo, static_cast<double>(i) / (n_eta - 1));
    const std::vector<double> t_list =
        cfg.get_list("optimality", "t_list", {0.01, 0.1, 0.24});
    const double ceiling = cfg.get_double("optimality", "ratio_ceiling", 50.0);
    const NormReport bounds = verify_bt_bounds(p, eta_list, t_list, ceiling);
    nlohmann::json bj = bounds.to_json();
    bj["t_list"] = t_list;
    write_text(out_dir + "/bt_bounds.json", bj.dump(2) + "\n");

    // divergence dichotomy
    std::vector<double> lambdas = cfg.get_list("optimality", "lambda_list", {});
    if (lambdas.empty()) {
        for (double lam = 1.0; lam <= 1048576.0; lam *= 2.0) lambdas.push_back(lam);
        lambdas.push_back(1e4);
        lambdas.push_back(1e6);
        std::sort(lambdas.begin(), lambdas.end());
    }
    const DivergenceScan scan = divergence_scan(p, lambdas);
    std::string csv = "Lambda,D_half_eps,D_half,D_half_2eps\n";
    double d_1e4 = 0.0, d_1e6 = 0.0;
    for (const auto& row : scan.rows) {
        csv += fmt_g(row.Lambda) + "," + fmt_g(row.D_half_eps) + "," + fmt_g(row.D_half) +
               "," + fmt_g(row.D_half_2eps) + "\n";
        if (std::abs(row.Lambda - 1e4) < 0.5) d_1e4 = row.D_half;
        if (std::abs(row.Lambda - 1e6) < 0.5) d_1e6 = row.D_half;
    }
    write_text(out_dir + "/divergence.csv", csv);

    const bool diverges = scan.alpha > 0.0 && scan.alpha_drift <= 0.10;
    const bool converges = d_1e4 > 0.0 && (d_1e6 - d_1e4) <= 0.05 * d_1e4;
    bool ok = bounds.at("passed") == 1.0 && diverges && converges;

    nlohmann::json j;
    j["name"] = "optimality_dichotomy";
    j["alpha"] = scan.alpha;
    j["alpha_drift"] = scan.alpha_drift;
    j["D_half_1e4"] = d_1e4;
    j["D_half_1e6"] = d_1e6;
    j["diverges_at_half_plus_eps"] = diverges;
    j["converges_at_half"] = converges;

    if (cfg.get_int("optimality", "crossvalidate", 0) != 0) {
        GridSpec g;
        g.n = 1;
        g.L = cfg.get_double("cv_grid", "L", 32.0);
        g.N_y = static_cast<int>(cfg.get_int("cv_grid", "N_y", 1024));
        const double lambda0 = cfg.get_double("optimality", "lambda0", 48.0);
        g.T0 = cfg.get_double("cv_grid", "T0", -2.0);
        g.T1 = cfg.get_double("cv_grid", "T1", lambda0 + 2.0);
        g.N_t = static_cast<int>(cfg.get_int("cv_grid", "N_t", 16384));
        const CrossValidation cv = crossvalidate_with_resolvent(p, lambda0, g);
        const double cv_tol = cfg.get_double("optimality", "cv_tol", 1e-4);
        j["crossvalidation_max_rel_error"] = cv.max_rel_error;
        j["crossvalidation_modes"] = cv.modes_compared;
        if (cv.max_rel_error > cv_tol) ok = false;
    }

    j["passed"] = ok;
    write_text(out_dir + "/report.json", j.dump(2) + "\n");
    write_manifest(cfg, out_dir, seed, sw.seconds());
    return ok ? 0 : 1;
}

}  // namespace minklab
