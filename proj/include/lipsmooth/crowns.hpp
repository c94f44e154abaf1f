#pragma once

#include <complex>
#include <vector>

#include "lipsmooth/approx.hpp"
#include "lipsmooth/box.hpp"
#include "lipsmooth/space.hpp"
#include "lipsmooth/vec.hpp"

namespace lipsmooth {

// Dyadic annular cover of the working box by Q-level crowns:
//   C_1 = {Q <= 4/eps},   C_n = {2^{n-1}/eps <= Q <= 2^{n+1}/eps}  (n >= 2),
// truncated at the largest crown that still meets the box.  Consecutive
// crowns overlap on a full dyadic band, so every point lies in one or two of
// them (boundary values excepted).
struct CrownCover {
    double eps = 0.0;
    SeparatingFunction sf;
    IntervalBox box;
    int n_max = 1;
    double q_max = 0.0;  // certified max of Q over the box

    double lower(int n) const;  // 0 for n = 1
    double upper(int n) const;
    bool contains(int n, const Vec& x) const;
    std::vector<int> crowns_of(const Vec& x) const;
    // Smallest crown containing x; nondecreasing in Q(x).
    int crown_index(const Vec& x) const;
};

CrownCover crown_cover(double eps, const SeparatingFunction& sf, const IntervalBox& box);

// Bounded 1-Lipschitz surrogate of f built from a finite sample of the crown:
//   clamp( min over samples of (f(y) + ||x - y||),  -M, +M ),
// with M the max of |f| over the samples.  Agrees with f on the samples.
ScalarFn bounded_extension(const ScalarFn& f, int crown, const CrownCover& cover,
                           const std::vector<Vec>& sample_set);

// One bump of the crown partition: a piecewise-affine hat with plateau value 1
// at the dyadic center, complementary ramps against its neighbours, plus its
// Gaussian smoothing of width sigma = 1/sqrt(2 kappa).
struct CrownBump {
    std::vector<double> slopes;  // hinge decomposition of the raw bump
    std::vector<double> knots;
    double lip = 0.0;           // exact max slope
    double kappa = 0.0;
    double sigma = 0.0;
    double value_budget = 0.0;  // required sup |theta - theta_bar|
    double deriv_budget = 0.0;  // required sup |theta' - theta_bar'| off the kinks
    double deriv_window = 0.0;  // half-window around kinks excluded from that bound
};

// The full partition: raw bumps sum to 1 on [0, inf) exactly, their Lipschitz
// constants sum below 3 eps, and the smoothed bumps stay within per-bump
// budgets tied to the component sup bounds so the assembly error stays <= 1.
struct CrownPartition {
    double eps = 0.0;
    double lip_q = 0.0;
    int n_crowns = 1;              // crowns meeting the box
    std::vector<CrownBump> bumps;  // n_crowns + 3 of them

    double theta_bar(int n, double t) const;  // n is 1-based
    double theta(int n, double t) const;
    CD theta_complex(int n, CD t) const;
    double sum_theta_bar(double t) const;
    double sum_theta(double t) const;
    double lip_sum() const;  // exact arithmetic sum of raw slopes
};

// bound_seq[n-1] is a sup bound for the n-th component; crowns past the box
// get zero bounds.  kappa_n is chosen to satisfy, for budget
// b_n = eps / (2^{n+3} (1 + bound_n)):
//   (1) e^{-kappa_n} <= b_n,
//   (2) sup |theta_n - theta_bar_n| <= b_n,
//   (3) |theta_n' - theta_bar_n'| <= b_n / lip(Q) at distance >= deriv_window
//       from the kinks (a piecewise-affine bump has no pointwise C^1 match
//       at the kinks themselves).
CrownPartition crown_partition(const CrownCover& cover, const std::vector<double>& bound_seq);

// g(x) = sum_n theta_n(Q(x)) g_n(x).  Requires one component per crown with
// claimed_sup_error <= 1 (the certification the error ledger rests on);
// refuses the assembly otherwise.  Claims: sup error 2, Lipschitz constant
// C + 4 eps lip(Q) with C the largest component claim.  Probes where the
// smoothed partition strays from 1 beyond the summed budgets are flagged out
// of the valid region.
Approximant assemble_unbounded(const ScalarFn& f, const std::vector<Approximant>& components,
                               const CrownPartition& part, const SeparatingFunction& sf,
                               const IntervalBox& box, const std::vector<Vec>& probes);

}  // namespace lipsmooth
