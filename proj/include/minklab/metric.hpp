#pragma once

#include <string>

#include <Eigen/Dense>

#include "minklab/report.hpp"

namespace minklab {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

enum class CausalType { Null, Timelike, Spacelike };

inline double jap(double s) { return std::sqrt(1.0 + s * s); }
inline double jap(const Vec& x) { return std::sqrt(1.0 + x.squaredNorm()); }

// Dual Lorentzian metric x -> g^{-1}(x) on R^{n+1}.  The catalog is
// g^{-1}(x) = g0^{-1} + eps * <x>^{-mu} * B(x) with B a built-in smooth
// bounded symmetric shape, so all derivatives are analytic.
//
// Shapes:
//   "minkowski"      B = 0
//   "radial_bump"    B = identity (each diagonal entry gets the radial decay bump)
//   "offdiag_cosine" B_{12} = B_{21} = cos(x_1 + x_2), all other entries 0
struct MetricSpec {
    int n = 1;          // spatial dimension, spacetime dimension n+1
    double mu = 1.0;    // decay rate of the perturbation
    double eps = 0.0;   // perturbation amplitude
    std::string shape = "minkowski";

    int dim() const { return n + 1; }

    Mat minkowski_dual() const;

    Mat dual_metric(const Vec& x) const;
    // d/dx_l of the dual metric
    Mat dual_metric_dx(const Vec& x, int l) const;
    // d^2/dx_l dx_m of the dual metric
    Mat dual_metric_dxx(const Vec& x, int l, int m) const;
};

MetricSpec minkowski(int n);

// Instantiates the asymptotically Minkowski family.  Rejects parameter
// combinations whose signature fails to be Lorentzian on a dense sample of
// the ball of radius 200 plus dyadic shells (throws std::invalid_argument
// naming the offending point).
MetricSpec perturbed_family(int n, double mu, double eps, const std::string& shape);

// p(x,xi) = 1/2 xi^T g^{-1}(x) xi
double hamiltonian(const MetricSpec& m, const Vec& x, const Vec& xi);

struct PGrad {
    Vec dx;   // d_x p
    Vec dxi;  // d_xi p = g^{-1}(x) xi
};
PGrad grad_p(const MetricSpec& m, const Vec& x, const Vec& xi);

Mat primal_metric(const MetricSpec& m, const Vec& x);

CausalType causal_type(const MetricSpec& m, const Vec& x, const Vec& v,
                       double tol_null = 1e-9);

struct SampleSpec {
    double radius = 1e3;   // outermost sampled radius
    int n_samples = 10000; // points per shell batch
    std::uint64_t seed = 1234;
};

// Reports sup over samples of |d^alpha (g^{jk}-g0^{jk})(x)| * <x>^{mu+|alpha|}
// for |alpha| <= depth, per derivative depth, over dyadic shells out to
// sample radius.  Constants should be finite and stable as the radius grows.
NormReport symbol_class_check(const MetricSpec& m, int depth, const SampleSpec& spec);

}  // namespace minklab
