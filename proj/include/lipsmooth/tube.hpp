#pragma once

#include <array>
#include <vector>

#include "lipsmooth/approx.hpp"
#include "lipsmooth/vec.hpp"

namespace lipsmooth {

// Slab decomposition of a function 0 <= f <= N into 1-Lipschitz components
// f_n = clamp(f - n + 1, 0, 1); the sum of the components reconstructs f.
struct SlabDecomposition {
    int N = 0;
    std::vector<ScalarFn> components;
};
SlabDecomposition slab_decompose(const ScalarFn& f, int N);

// The corner path in R^{N+2}: beta(t) = (1,...,1, t-n+1, 0, ...) with
// n = ceil(t) (n = 1 at t = 0).  Throws for t outside [0, N].
Vec beta_path(double t, int N);

// dist_inf from y to the path image, together with the parameter of the
// nearest path point.
struct PathProjection {
    double t = 0.0;
    double dist = 0.0;
};
PathProjection project_to_path(const Vec& y);

// Inverse of beta on its image (the coordinate sum); rejects inputs farther
// than 1e-9 from the path with the distance in the diagnostic.
double beta_inverse(const Vec& y);

// The exact printed corner homeomorphism on [0,2] x [-r,r] and its inverse.
std::array<double, 2> corner_F(std::array<double, 2> p, double r);
std::array<double, 2> corner_F_inv(std::array<double, 2> p, double r);

// Piecewise-affine staircase: plateaus of value n on [n - 2 eps, n + 2 eps],
// slope 1/(1-4 eps) between, 0 for t <= 0; `alpha` is its Gaussian smoothing
// of width sigma (closed form through smoothed hinge functions).
struct Staircase {
    double eps = 0.0;
    double sigma = 0.0;
    double kappa() const { return 1.0 / (2.0 * sigma * sigma); }
};
double staircase_alpha_bar(const Staircase& st, double t);
double staircase_alpha(const Staircase& st, double t);
CD staircase_alpha_complex(const Staircase& st, CD z);

// Tube construction parameters derived from the target tolerance.
//  - eps_int = eps/8 drives the internal budgets;
//  - c: corner half-width (charts are the identity further than c before a
//    corner and the rotation (x,y) -> (1-y, x-1) further than c after it);
//  - r: tube radius; sigma_c / sigma_theta / stair.sigma: smoothing widths,
//    halved at construction until the closeness budgets hold;
//  - delta: certified complex strip width.
struct TubeMapConfig {
    double eps = 0.0;
    double eps_int = 0.0;
    double c = 0.0;
    double r = 0.0;
    double delta = 0.0;
    double sigma_c = 0.0;
    double sigma_theta = 0.0;
    int N = 0;
    Staircase stair;

    double kappa() const { return 1.0 / (2.0 * sigma_c * sigma_c); }
    static TubeMapConfig make(double eps, int N);
};

// Blend weight: Gaussian smoothing of the printed plateau bump (support
// (-1/2, 3/4), plateau [-1/4, 1/2], mirror-symmetric ramps).
double theta_bar(double t);
double tube_theta(const TubeMapConfig& cfg, double t);
CD tube_theta_complex(const TubeMapConfig& cfg, CD z);

// Smoothed narrowed corner chart (phi, psi) and its complex continuation.
std::array<double, 2> corner_smoothed(const TubeMapConfig& cfg, double x, double y);
std::array<CD, 2> corner_smoothed_complex(const TubeMapConfig& cfg, CD x, CD y);

// The glued tube map on truncated sequences of length N+2.  The public
// versions reject arguments outside the straight tube
// S = {x_1 in (-r, N + 1/4), |x_j| < r for j >= 2} (small tolerance).
Vec tube_G(const TubeMapConfig& cfg, const Vec& x);
CVec tube_G_complex(const TubeMapConfig& cfg, const CVec& z);

// Damped-Newton inversion with the nearest-path-segment initializer.
// `inside` reports tube membership: the residual converged and the solution
// lies in S.
struct TubeInversion {
    bool inside = false;
    Vec x;
    double residual = 0.0;
    int iterations = 0;
};
TubeInversion tube_G_inverse(const TubeMapConfig& cfg, const Vec& u);

// H = alpha(e_1^* G^{-1}(u)); throws std::domain_error outside the tube.
double tube_H(const TubeMapConfig& cfg, const Vec& u);

// Complex continuation of H by complex Newton seeded from the real inversion.
CD tube_H_complex(const TubeMapConfig& cfg, const CVec& u);

// Glued approximant g(x) = H(g_1(x), ..., g_N(x), 0, 0) from N component
// approximants (each expected within r/2 of the slab component it tracks).
// Probes whose component vector leaves the tube are flagged out of the valid
// region.  Claims: sup error eps, Lip <= (1+eps) max component claimed_lip.
Approximant glue_bounded(const std::vector<Approximant>& components, const TubeMapConfig& cfg,
                         const IntervalBox& box, const std::vector<Vec>& probes);

}  // namespace lipsmooth
