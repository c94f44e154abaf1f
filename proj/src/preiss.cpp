#include "lipsmooth/preiss.hpp"

#include <cmath>
#include <stdexcept>

namespace lipsmooth {

namespace {

template <typename T>
T int_pow(T base, int e) {
    T r = static_cast<T>(1.0);
    while (e > 0) {
        if (e & 1) r *= base;
        base *= base;
        e >>= 1;
    }
    return r;
}

}  // namespace

double preiss_C(const Vec& x) {
    KahanSum s;
    for (std::size_t j = 0; j < x.size(); ++j) {
        double term = int_pow(x[j], 2 * static_cast<int>(j + 1));
        if (!std::isfinite(term))
            throw std::overflow_error("preiss_C: term overflow; rescale the input first");
        s.add(term);
    }
    return s.value();
}

CD preiss_C_complex(const CVec& z) {
    CD s{0.0, 0.0};
    for (std::size_t j = 0; j < z.size(); ++j) s += int_pow(z[j], 2 * static_cast<int>(j + 1));
    return s;
}

double preiss_norm(const Vec& x, const PreissSolveConfig& cfg) {
    double m = norm_inf(x);
    if (m == 0.0) return 0.0;

    // g(t) = C(x/t) - 1 is strictly decreasing for t > 0 with
    // g(||x||_inf) >= 0 (the max coordinate alone contributes >= 1) and
    // g(2||x||_inf) <= sum 4^{-j} - 1 < 0.
    auto g_and_slope = [&](double t, double& slope) {
        KahanSum s;
        double sl = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j) {
            int e = 2 * static_cast<int>(j + 1);
            double term = int_pow(x[j] / t, e);
            s.add(term);
            sl += e * term;
        }
        slope = -sl / t;
        return s.value() - 1.0;
    };

    double lo = m, hi = 2.0 * m;
    double t = m;  // g(lo) >= 0; if the max coordinate dominates, root is at lo
    for (int it = 0; it < cfg.max_iter; ++it) {
        double slope;
        double g = g_and_slope(t, slope);
        if (std::abs(g) <= cfg.abs_tol) return t;
        if (g > 0.0) {
            lo = t;
        } else {
            hi = t;
        }
        double t_newton = (slope != 0.0) ? t - g / slope : t;
        t = (t_newton > lo && t_newton < hi) ? t_newton : 0.5 * (lo + hi);
    }
    throw std::runtime_error("preiss_norm: solver did not converge");
}

CD preiss_norm_complex(const CVec& z, double mu0, const PreissSolveConfig& cfg) {
    if (!(mu0 > 0.0)) throw std::invalid_argument("preiss_norm_complex: mu0 must be positive");
    CD mu{mu0, 0.0};
    for (int it = 0; it < cfg.max_iter; ++it) {
        CD psi{-1.0, 0.0};
        CD dpsi{0.0, 0.0};
        for (std::size_t j = 0; j < z.size(); ++j) {
            int e = 2 * static_cast<int>(j + 1);
            CD term = int_pow(z[j] / mu, e);
            psi += term;
            dpsi += static_cast<double>(e) * term;
        }
        dpsi /= -mu;
        if (std::abs(psi) <= cfg.abs_tol) return mu;
        if (dpsi == CD{0.0, 0.0} || !std::isfinite(std::abs(psi)))
            throw std::runtime_error("preiss_norm_complex: degenerate Newton step");
        mu -= psi / dpsi;
        if (!std::isfinite(std::abs(mu)) || std::abs(mu) == 0.0)
            throw std::runtime_error("preiss_norm_complex: iterate left the domain");
    }
    throw std::runtime_error("preiss_norm_complex: Newton did not converge");
}

}  // namespace lipsmooth
