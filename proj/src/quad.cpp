#include "lipsmooth/quad.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace lipsmooth {

namespace {

GaussLegendre compute_rule(std::size_t n) {
    if (n == 0) throw std::invalid_argument("quadrature order must be positive");
    GaussLegendre r;
    r.nodes.resize(n);
    r.weights.resize(n);
    // Roots of P_n by Newton iteration from the Chebyshev-like initial guess.
    for (std::size_t i = 0; i < n; ++i) {
        double x = std::cos(3.14159265358979323846 * (static_cast<double>(i) + 0.75) /
                            (static_cast<double>(n) + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            // Evaluate P_n(x) and P_n'(x) by the three-term recurrence.
            double p0 = 1.0, p1 = x;
            for (std::size_t k = 2; k <= n; ++k) {
                double pk = ((2.0 * static_cast<double>(k) - 1.0) * x * p1 -
                             (static_cast<double>(k) - 1.0) * p0) /
                            static_cast<double>(k);
                p0 = p1;
                p1 = pk;
            }
            pp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        r.nodes[n - 1 - i] = x;  // store ascending
        r.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
    }
    return r;
}

}  // namespace

const GaussLegendre& GaussLegendre::get(std::size_t order) {
    static std::map<std::size_t, GaussLegendre> cache;
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, compute_rule(order)).first;
    return it->second;
}

double gl_integrate(const std::function<double(double)>& f, double a, double b,
                    std::size_t order) {
    const GaussLegendre& r = GaussLegendre::get(order);
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double s = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i)
        s += r.weights[i] * f(mid + half * r.nodes[i]);
    return s * half;
}

std::vector<double> piece_endpoints(double a, double b, std::vector<double> breakpoints,
                                    double merge_tol) {
    std::vector<double> pts;
    pts.push_back(a);
    std::sort(breakpoints.begin(), breakpoints.end());
    for (double t : breakpoints) {
        if (t <= a + merge_tol || t >= b - merge_tol) continue;
        if (t - pts.back() > merge_tol) pts.push_back(t);
    }
    pts.push_back(b);
    return pts;
}

double gl_integrate_pieces(const std::function<double(double)>& f, double a, double b,
                           std::vector<double> breakpoints, std::size_t order) {
    std::vector<double> pts = piece_endpoints(a, b, std::move(breakpoints));
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        s += gl_integrate(f, pts[i], pts[i + 1], order);
    return s;
}

}  // namespace lipsmooth
