#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace lipsmooth {

// Gauss-Legendre rule on [-1, 1]; nodes/weights computed once per order and
// cached.  Exact for polynomials of degree <= 2*order - 1.
struct GaussLegendre {
    std::vector<double> nodes;    // ascending in (-1, 1)
    std::vector<double> weights;  // positive, sum to 2

    static const GaussLegendre& get(std::size_t order);
};

// Integrate f over [a, b] with a single Gauss-Legendre rule of given order.
double gl_integrate(const std::function<double(double)>& f, double a, double b,
                    std::size_t order);

// Integrate f over [a, b] split at the given interior breakpoints (values
// outside (a, b) are ignored; near-duplicate breakpoints are merged).  Each
// resulting piece gets one rule of the given order.
double gl_integrate_pieces(const std::function<double(double)>& f, double a, double b,
                           std::vector<double> breakpoints, std::size_t order);

// Clean a breakpoint list for use on [a, b]: keep interior points only, sort,
// merge points closer than `merge_tol`, and bracket with a and b.  Returns the
// full ascending list of piece endpoints {a, ..., b}.
std::vector<double> piece_endpoints(double a, double b, std::vector<double> breakpoints,
                                    double merge_tol = 1e-14);

}  // namespace lipsmooth
