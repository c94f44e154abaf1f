#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "lipsmooth/box.hpp"
#include "lipsmooth/suppart.hpp"
#include "lipsmooth/vec.hpp"

namespace lipsmooth {

using ScalarFn = std::function<double(const Vec&)>;

// Probe-grid record of where the approximant's denominator guarantee held.
struct CoverageCertificate {
    IntervalBox box;
    std::vector<Vec> probes;
    std::vector<char> covered;  // denominator >= 1 at the probe
    double fraction = 0.0;
};

// Smooth approximant with its claimed bounds.  The claims are produced by the
// construction; the harness re-measures them and never assumes them.
struct Approximant {
    ScalarFn evaluator;
    double claimed_lip = 0.0;
    double claimed_sup_error = 0.0;
    CoverageCertificate valid_region;
};

// The loose certified Lipschitz factor of the core construction.
double core_lip_constant();  // 8020012

// Core bounded approximant for f with 1 <= f <= B and Lip(f) = 1/r:
//   g(x) = preiss_norm({f(x_j) phi_j(x)}) / preiss_norm({phi_j(x)}).
// Probes where the denominator drops below 1 are flagged out of the valid
// region.  Claims: sup error 8 on the covered region, Lip <= 8020012 lip(Q)/r.
Approximant approx_bounded_core(const ScalarFn& f, const SupPartitionConfig& cfg,
                                const IntervalBox& box, const std::vector<Vec>& probes);

// Unit-range wrapper: for f into [0,1] with Lip(f) <= 1 and eta >= 8/(B-1),
// apply the core to F(u) = 1 + (8/eta) f(eta u / 8) on the 8/eta-scaled box
// and read back g(x) = (G(8x/eta) - 1) eta/8, so |f-g| <= eta.
// `partition_points` controls the anchor count of the internally built
// partition (quasi-uniform dyadic cover of the scaled box).
Approximant approx_unit(const ScalarFn& f, double eta, const IntervalBox& box,
                        std::size_t partition_points, double range_bound = 1001.0);

// Final rescaling: given a procedure turning 1-Lipschitz functions into
// approximants with error 2 and Lipschitz constant C, produce from any
// L-Lipschitz f an approximant with |g-f| <= eps and Lip(g) <= (C/2) eps ...
// precisely: F(u) = (2/eps) f(eps u / 2L), g(x) = (eps/2) G(2Lx/eps), giving
// error eps * (inner error)/2 and Lipschitz claim (inner claim) * L.
Approximant rescale(const std::function<Approximant(const ScalarFn&)>& inner, const ScalarFn& f,
                    double L, double eps);

}  // namespace lipsmooth
