#pragma once

#include <vector>

#include "lipsmooth/cerf.hpp"
#include "lipsmooth/space.hpp"
#include "lipsmooth/vec.hpp"

namespace lipsmooth {

struct Interval {
    double lo;
    double hi;
};

// Index-n box pair: inner box A'_n (bump plateau) and outer box A_n (bump
// support), plus the upper-edge bound M used for the early coordinates.
struct BoxPair {
    int n = 0;
    std::vector<Interval> inner;
    std::vector<Interval> outer;
    double M = 0.0;
};

// A built sup-partition: anchor points, geometry parameters, per-index
// smoothing strengths, and the separating function whose Q feeds the bumps.
// Immutable after build_sup_partition; all evaluations are pure.
struct SupPartitionConfig {
    std::vector<Vec> points;
    double r = 1.0;
    double eps = 0.1;
    int quad_points = 24;
    SeparatingFunction sf = SeparatingFunction::euclidean(1);
    std::vector<BoxPair> boxes;
    Vec kappas;
};

// Per-coordinate Gaussian width sigma_j = 2^{j/2} / sqrt(2 kappa), j >= 1.
double sigma_j(double kappa, int j);

// Analytic lower bound for the smoothing strength at index n.
double kappa_floor(int n);

// Boxes for index n (1-based).  Inner: coordinates j < n get [3r, M+r], the
// last coordinate gets [-1, 3r].  Outer: r-expansion, except the first index
// keeps the left edge at -1 (its argument Q is nonnegative, so nothing is
// reachable below it).
BoxPair build_boxes(const SupPartitionConfig& cfg, int n);

// b_n(y) = (1+eps) * max(0, 1 - dist_inf(y, A'_n)/r).
double bump_b(const BoxPair& box, const Vec& y, double r, double eps);

// Gaussian smoothing of b_n evaluated by the exact layer-cake identity
//   nu(y) = (1+eps) * Integral_0^1 prod_j Mass_j([l_j - r v, u_j + r v]; y_j, sigma_j) dv,
// one 1D quadrature of a product of CDF differences.  `kappa` is explicit so
// the adaptive selection can probe candidates.
double nu_value(const BoxPair& box, double r, double eps, int quad_points, double kappa,
                const double* y);

// Same, using the built kappa for the box's index.
double smoothed_nu(const BoxPair& box, const SupPartitionConfig& cfg, const Vec& y);

// kappa_n = max(analytic floor, sigma-calibrated seed doubled until the probe
// grid satisfies max |b_n - nu_n| <= eps/2).  Throws after 64 doublings.
double select_kappa(const SupPartitionConfig& cfg, int n);

// Build everything: boxes for all indices, then kappas.
SupPartitionConfig build_sup_partition(std::vector<Vec> points, double r, double eps,
                                       const SeparatingFunction& sf, int quad_points = 24);

// phi_n(x) = nu_n(Q(x-x_1), ..., Q(x-x_n)).
double phi(const SupPartitionConfig& cfg, int n, const Vec& x);

// All phi_n at once (shares the Q evaluations).
Vec phi_all(const SupPartitionConfig& cfg, const Vec& x);

// First-hit data for the complex spot checks: n_x = least j with
// Q(x - x_j) < r, strip radius delta_x = (r/C) sqrt(2^{-n_x-4}) with C the
// strip Lipschitz bound, decay rate a_x = r^2 2^{-n_x-4}.
struct LocalStripEstimate {
    Vec x;
    int n_x = 0;
    double delta_x = 0.0;
    double a_x = 0.0;
};

// Throws std::domain_error when x is not r-covered by the points.
LocalStripEstimate local_strip_estimate(const SupPartitionConfig& cfg, const Vec& x);

// Complex continuation of phi_n through the analytic layer-cake form with
// per-coordinate complex interval masses.  The imaginary part must satisfy
// ||Im z|| <= min(est.delta_x, strip margin); outside the controlled property
// regimes the modulus can exceed double range, in which case the returned
// value is infinite.
CD phi_complex(const SupPartitionConfig& cfg, int n, const ComplexPoint& z,
               const LocalStripEstimate& est);

}  // namespace lipsmooth
