#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

#include "lipsmooth/approx.hpp"
#include "lipsmooth/box.hpp"
#include "lipsmooth/vec.hpp"

namespace lipsmooth {

// Samples of a scalar function on a uniform box grid: row-major storage with
// the last axis fastest.  The box widths must be integer multiples of h.
struct GridFunction {
    IntervalBox box;
    double h = 0.0;
    std::vector<std::size_t> shape;
    std::vector<double> values;

    std::size_t dim() const { return shape.size(); }
    std::size_t size() const { return values.size(); }
    std::size_t flat(const std::vector<std::size_t>& idx) const;
    Vec point(std::size_t flat_index) const;

    static GridFunction sample(const ScalarFn& f, const IntervalBox& box, double h);
};

// Multilinear interpolation of the grid values, clamped to the box.
double grid_interpolate(const GridFunction& g, const Vec& x);

// Max |g_i - g_j| / ||x_i - x_j|| over axis and diagonal neighbor pairs.
double grid_lip_quotient(const GridFunction& g);

// Signed range {min, max} of (g_{i-1} - 2 g_i + g_{i+1}) / h^2 along every axis.
std::array<double, 2> grid_curvature_range(const GridFunction& g);

struct LasryParams {
    double lambda = 0.0;
    double mu = 0.0;
    double lambda0 = 1.0;
};

// Exact discrete inf-convolution with the quadratic kernel:
//   g(x) = min over grid nodes u of f(u) + ||x - u||^2 / (2 lambda),
// computed axis-by-axis with the linear-time lower-envelope-of-parabolas scan
// (sentinel intersections at the ends, ties toward the smaller index).
GridFunction moreau_inf(const GridFunction& f, double lambda);

// Dual transform via negation: f^mu = -(-f)_mu.
GridFunction moreau_sup(const GridFunction& f, double mu);

// g_{lambda,mu} = (f_lambda)^mu.
GridFunction lasry_lions(const GridFunction& f, const LasryParams& p);

// lambda = min(lambda0, eps / (2 L^2)), mu = lambda / 2.  The standard
// envelope bound |f_lambda - f| <= lambda L^2 / 2 then gives a grid sup error
// of (lambda + mu) L^2 / 2 <= 3 eps / 8 <= eps / 2.
LasryParams lambda_schedule(double L, double eps, double lambda0 = 1.0);

// Optional analytic-smoothing stage applied to the C^{1,1} surrogate; receives
// the surrogate evaluator, its Lipschitz bound, and the working box.
using SmoothingHook = std::function<Approximant(const ScalarFn&, double, const IntervalBox&)>;

// End-to-end regularization of an L-Lipschitz f on the box: schedule, the two
// envelope transforms, and multilinear readback.  Claims |g - f| <= eps and
// Lip(g) <= L + eps; the certificate re-measures |g - f| on a node subsample.
// With a smoothing hook plugged in, the hook's approximant is returned with
// its error claim widened by the surrogate's eps.  Grids coarser than the
// curvature scale (h > mu/10) are rejected.
Approximant hilbert_pipeline(const ScalarFn& f, double L, double eps, const IntervalBox& box,
                             double h, const SmoothingHook& hook = nullptr);

}  // namespace lipsmooth
