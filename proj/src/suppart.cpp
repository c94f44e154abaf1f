#include "lipsmooth/suppart.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "lipsmooth/quad.hpp"

namespace lipsmooth {

namespace {

// Product mass below this is reported as zero outright.
constexpr double kDeadProduct = 1e-18;
// A coordinate whose v=0 interval already holds all but <=1e-15 of its mass
// contributes a constant factor 1 for every v.
constexpr double kFlatOne = 1.0 - 1e-15;
// Breakpoints bracket each edge crossing at +-8.5 sigma.
constexpr double kEdgeWindow = 8.5;

double first_n_primes_entry(int j) {
    static const std::vector<int> primes = [] {
        std::vector<int> ps;
        for (int c = 2; static_cast<int>(ps.size()) < 256; ++c) {
            bool prime = true;
            for (int p : ps) {
                if (p * p > c) break;
                if (c % p == 0) {
                    prime = false;
                    break;
                }
            }
            if (prime) ps.push_back(c);
        }
        return ps;
    }();
    return static_cast<double>(primes.at(static_cast<size_t>(j)));
}

// Radical-inverse (Halton) coordinate of index i >= 1 in base b.
double halton(long long i, double base) {
    double f = 1.0, x = 0.0;
    while (i > 0) {
        f /= base;
        x += f * static_cast<double>(i % static_cast<long long>(base));
        i /= static_cast<long long>(base);
    }
    return x;
}

struct ActiveCoord {
    double lo;
    double hi;
    double sigma;
    double y;
};

// Classify coordinates of the layer-cake product at point y.  Returns false
// when the product is dead (some factor's v=1 upper bound makes the whole
// integral fall below kDeadProduct).  Active coordinates and their edge
// crossing v-values in (0,1) are appended to `act` and `cuts`.
bool classify_real(const BoxPair& box, double r, double kappa, const double* y,
                   std::vector<ActiveCoord>& act, std::vector<double>& cuts) {
    const int n = box.n;
    double log_prod_hi = 0.0;
    for (int j = 1; j <= n; ++j) {
        const double s = sigma_j(kappa, j);
        const double l = box.inner[static_cast<size_t>(j - 1)].lo;
        const double u = box.inner[static_cast<size_t>(j - 1)].hi;
        const double yj = y[j - 1];
        // Cheap comparisons first: margins of yj inside the v=0 and v=1
        // intervals, in units of sigma.
        const double m0 = std::min(yj - l, u - yj) / s;
        const double m1 = std::min(yj - (l - r), (u + r) - yj) / s;
        if (m1 < -kEdgeWindow) return false;  // dead even at full expansion
        if (m0 > kEdgeWindow) continue;       // flat 1 for every v
        const double d1 = norm_interval(l - r, u + r, yj, s);
        if (d1 < kFlatOne) {
            log_prod_hi += std::log(std::max(d1, 1e-300));
            if (log_prod_hi < std::log(kDeadProduct)) return false;
        }
        const double d0 = norm_interval(l, u, yj, s);
        if (d0 >= kFlatOne) continue;
        act.push_back({l, u, s, yj});
        const double w = kEdgeWindow * s;
        for (double v : {(yj - u - w) / r, (yj - u + w) / r, (l - yj - w) / r, (l - yj + w) / r}) {
            if (v > 0.0 && v < 1.0) cuts.push_back(v);
        }
    }
    return true;
}

struct CoordC {
    double lo;
    double hi;
    double sigma;
    CD w;
};

ScaledComplex complex_product(const std::vector<CoordC>& cs, double r, double v) {
    ScaledComplex p = ScaledComplex::one();
    for (const CoordC& c : cs) {
        p = p * cnorm_interval(c.lo - r * v, c.hi + r * v, c.w, c.sigma);
        if (p.is_zero()) return p;
    }
    return p;
}

ScaledComplex gl_sum_complex(const std::vector<CoordC>& cs, double r, double a, double b,
                             int order) {
    const GaussLegendre& rule = GaussLegendre::get(order);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    std::vector<ScaledComplex> terms;
    terms.reserve(rule.nodes.size());
    for (size_t k = 0; k < rule.nodes.size(); ++k) {
        ScaledComplex t = complex_product(cs, r, mid + half * rule.nodes[k]);
        terms.push_back(t * CD{half * rule.weights[k], 0.0});
    }
    ScaledComplex sum = ScaledComplex::zero();
    for (const ScaledComplex& t : terms) sum = sum + t;
    return sum;
}

// Adaptive GL16/GL32 on [a,b]; accepts when the two estimates agree to 1e-9
// relative or fall below e^-60 absolute (the properties under test live at
// scale >= e^-40).
ScaledComplex adaptive_complex(const std::vector<CoordC>& cs, double r, double a, double b,
                               int depth) {
    ScaledComplex coarse = gl_sum_complex(cs, r, a, b, 16);
    ScaledComplex fine = gl_sum_complex(cs, r, a, b, 32);
    ScaledComplex diff = fine + coarse * CD{-1.0, 0.0};
    const double dl = diff.is_zero() ? -1e300 : diff.abs_log();
    const double fl = fine.is_zero() ? -1e300 : fine.abs_log();
    if (dl <= fl - 20.7 || dl <= -60.0 || depth >= 12) return fine;
    const double m = 0.5 * (a + b);
    return adaptive_complex(cs, r, a, m, depth + 1) + adaptive_complex(cs, r, m, b, depth + 1);
}

}  // namespace

double sigma_j(double kappa, int j) { return std::exp2(0.5 * j) / std::sqrt(2.0 * kappa); }

double kappa_floor(int n) {
    // (2 * sqrt(2)^n * (n!)^2)^(1/n), evaluated in logs so large n is exact.
    const double ln = (std::log(2.0) + 0.5 * n * std::log(2.0) + 2.0 * std::lgamma(n + 1.0)) / n;
    return std::exp(ln);
}

BoxPair build_boxes(const SupPartitionConfig& cfg, int n) {
    BoxPair box;
    box.n = n;
    const double r = cfg.r;
    const Vec& xn = cfg.points[static_cast<size_t>(n - 1)];
    double far = 0.0;
    for (int j = 1; j < n; ++j) {
        far = std::max(far, dist2(xn, cfg.points[static_cast<size_t>(j - 1)]));
    }
    box.M = cfg.sf.lip() * (8.0 * r + far);
    box.inner.resize(static_cast<size_t>(n));
    box.outer.resize(static_cast<size_t>(n));
    for (int j = 1; j < n; ++j) {
        box.inner[static_cast<size_t>(j - 1)] = {3.0 * r, box.M + r};
        box.outer[static_cast<size_t>(j - 1)] = {2.0 * r, box.M + 2.0 * r};
    }
    box.inner[static_cast<size_t>(n - 1)] = {-1.0, 3.0 * r};
    box.outer[static_cast<size_t>(n - 1)] = {n == 1 ? -1.0 : -1.0 - r, 4.0 * r};
    return box;
}

double bump_b(const BoxPair& box, const Vec& y, double r, double eps) {
    double d = 0.0;
    for (size_t j = 0; j < box.inner.size(); ++j) {
        const Interval& iv = box.inner[j];
        d = std::max(d, std::max(iv.lo - y[j], y[j] - iv.hi));
    }
    return (1.0 + eps) * std::max(0.0, 1.0 - std::max(d, 0.0) / r);
}

double nu_value(const BoxPair& box, double r, double eps, int quad_points, double kappa,
                const double* y) {
    std::vector<ActiveCoord> act;
    std::vector<double> cuts;
    if (!classify_real(box, r, kappa, y, act, cuts)) return 0.0;
    if (act.empty()) return 1.0 + eps;
    auto integrand = [&](double v) {
        double p = 1.0;
        for (const ActiveCoord& c : act) {
            p *= norm_interval(c.lo - r * v, c.hi + r * v, c.y, c.sigma);
            if (p < kDeadProduct) return 0.0;
        }
        return p;
    };
    return (1.0 + eps) * gl_integrate_pieces(integrand, 0.0, 1.0, cuts, quad_points);
}

double smoothed_nu(const BoxPair& box, const SupPartitionConfig& cfg, const Vec& y) {
    return nu_value(box, cfg.r, cfg.eps, cfg.quad_points, cfg.kappas[static_cast<size_t>(box.n - 1)],
                    y.data());
}

double select_kappa(const SupPartitionConfig& cfg, int n) {
    const BoxPair& box = cfg.boxes[static_cast<size_t>(n - 1)];
    const double seed =
        std::max(kappa_floor(n), 32.0 * std::exp2(n) / ((cfg.eps * cfg.r) * (cfg.eps * cfg.r)));
    // Quasi-random probe grid over the outer box expanded by 2r.
    const int kProbes = 200;
    std::vector<Vec> probes(kProbes, Vec(static_cast<size_t>(n)));
    for (int i = 0; i < kProbes; ++i) {
        for (int j = 0; j < n; ++j) {
            const Interval& iv = box.outer[static_cast<size_t>(j)];
            const double lo = iv.lo - 2.0 * cfg.r, hi = iv.hi + 2.0 * cfg.r;
            probes[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                lo + halton(i + 1, first_n_primes_entry(j)) * (hi - lo);
        }
    }
    double kappa = seed;
    for (int iter = 0; iter < 64; ++iter) {
        double worst = 0.0;
        for (const Vec& y : probes) {
            const double b = bump_b(box, y, cfg.r, cfg.eps);
            const double nu = nu_value(box, cfg.r, cfg.eps, cfg.quad_points, kappa, y.data());
            worst = std::max(worst, std::abs(b - nu));
        }
        if (worst <= 0.5 * cfg.eps) return kappa;
        kappa *= 2.0;
    }
    throw std::runtime_error("select_kappa: probe deviation still above eps/2 after 64 doublings");
}

SupPartitionConfig build_sup_partition(std::vector<Vec> points, double r, double eps,
                                       const SeparatingFunction& sf, int quad_points) {
    if (points.empty()) throw std::invalid_argument("build_sup_partition: no points");
    SupPartitionConfig cfg;
    cfg.points = std::move(points);
    cfg.r = r;
    cfg.eps = eps;
    cfg.quad_points = quad_points;
    cfg.sf = sf;
    const int N = static_cast<int>(cfg.points.size());
    cfg.boxes.reserve(static_cast<size_t>(N));
    for (int n = 1; n <= N; ++n) cfg.boxes.push_back(build_boxes(cfg, n));
    cfg.kappas.reserve(static_cast<size_t>(N));
    for (int n = 1; n <= N; ++n) cfg.kappas.push_back(select_kappa(cfg, n));
    return cfg;
}

double phi(const SupPartitionConfig& cfg, int n, const Vec& x) {
    Vec y(static_cast<size_t>(n));
    for (int j = 1; j <= n; ++j) {
        y[static_cast<size_t>(j - 1)] = cfg.sf.Q(x - cfg.points[static_cast<size_t>(j - 1)]);
    }
    return nu_value(cfg.boxes[static_cast<size_t>(n - 1)], cfg.r, cfg.eps, cfg.quad_points,
                    cfg.kappas[static_cast<size_t>(n - 1)], y.data());
}

Vec phi_all(const SupPartitionConfig& cfg, const Vec& x) {
    const int N = static_cast<int>(cfg.points.size());
    Vec y(static_cast<size_t>(N));
    for (int j = 1; j <= N; ++j) {
        y[static_cast<size_t>(j - 1)] = cfg.sf.Q(x - cfg.points[static_cast<size_t>(j - 1)]);
    }
    Vec out(static_cast<size_t>(N));
    for (int n = 1; n <= N; ++n) {
        out[static_cast<size_t>(n - 1)] =
            nu_value(cfg.boxes[static_cast<size_t>(n - 1)], cfg.r, cfg.eps, cfg.quad_points,
                     cfg.kappas[static_cast<size_t>(n - 1)], y.data());
    }
    return out;
}

LocalStripEstimate local_strip_estimate(const SupPartitionConfig& cfg, const Vec& x) {
    const int N = static_cast<int>(cfg.points.size());
    for (int j = 1; j <= N; ++j) {
        if (cfg.sf.Q(x - cfg.points[static_cast<size_t>(j - 1)]) < cfg.r) {
            LocalStripEstimate est;
            est.x = x;
            est.n_x = j;
            const double scale = std::exp2(-0.5 * (j + 4));  // sqrt(2^{-j-4})
            est.delta_x = cfg.r * scale / cfg.sf.lip_strip();
            est.a_x = cfg.r * cfg.r * scale * scale;
            return est;
        }
    }
    throw std::domain_error("local_strip_estimate: point not covered at radius r");
}

CD phi_complex(const SupPartitionConfig& cfg, int n, const ComplexPoint& z,
               const LocalStripEstimate& est) {
    const double imn = norm2(z.y);
    const double allowed = std::min(est.delta_x, cfg.sf.strip_margin());
    if (imn > allowed * (1.0 + 1e-12)) {
        throw std::domain_error("phi_complex: imaginary part outside the certified strip");
    }
    const BoxPair& box = cfg.boxes[static_cast<size_t>(n - 1)];
    const double kappa = cfg.kappas[static_cast<size_t>(n - 1)];
    std::vector<CoordC> cs;
    std::vector<double> cuts;
    for (int j = 1; j <= n; ++j) {
        const double s = sigma_j(kappa, j);
        const Interval& iv = box.inner[static_cast<size_t>(j - 1)];
        const CD w = cfg.sf.Q_complex({z.x - cfg.points[static_cast<size_t>(j - 1)], z.y});
        const double tau = std::abs(w.imag()) / s;
        const double guard = std::sqrt(tau * tau + 95.0);
        const double m0 = std::min(w.real() - iv.lo, iv.hi - w.real()) / s;
        if (m0 > guard) continue;  // factor is 1 to within e^-47 for every v
        cs.push_back({iv.lo, iv.hi, s, w});
        const double win = kEdgeWindow * s;
        const double re = w.real();
        for (double v : {(re - iv.hi - win) / cfg.r, (re - iv.hi + win) / cfg.r,
                         (iv.lo - re - win) / cfg.r, (iv.lo - re + win) / cfg.r}) {
            if (v > 0.0 && v < 1.0) cuts.push_back(v);
        }
    }
    if (cs.empty()) return CD{1.0 + cfg.eps, 0.0};
    const std::vector<double> ends = piece_endpoints(0.0, 1.0, cuts);
    ScaledComplex total = ScaledComplex::zero();
    for (size_t p = 0; p + 1 < ends.size(); ++p) {
        total = total + adaptive_complex(cs, cfg.r, ends[p], ends[p + 1], 0);
    }
    return (total * CD{1.0 + cfg.eps, 0.0}).value();
}

}  // namespace lipsmooth
