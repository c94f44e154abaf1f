#include "lipsmooth/space.hpp"

#include <cmath>
#include <stdexcept>

namespace lipsmooth {

namespace {

void check_finite(const Vec& x) {
    for (double v : x)
        if (!std::isfinite(v)) throw std::invalid_argument("non-finite coordinate");
}

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

double complexification_norm(const ComplexPoint& z) {
    double a = dot(z.x, z.x), b = dot(z.y, z.y), c = dot(z.x, z.y);
    double mean = 0.5 * (a + b), half = 0.5 * (a - b);
    return std::sqrt(mean + std::sqrt(half * half + c * c));
}

SeparatingPolynomial SeparatingPolynomial::euclidean(int n) {
    if (n < 1) throw std::invalid_argument("degree must be >= 1");
    SeparatingPolynomial p;
    p.n = n;
    p.K = 1.0;
    p.norm_A = 1.0;
    p.q = [n](const Vec& x) {
        check_finite(x);
        return int_pow(dot(x, x), n);
    };
    p.q_cx = [n](const CVec& z) {
        CD s{0.0, 0.0};
        for (const CD& v : z) s += v * v;
        return int_pow(s, n);
    };
    return p;
}

double strip_alpha(int n) {
    // d/dt [(1/2 + t^{2n})/(1+t)^{2n}] has the sign of t^{2n-1} - 1/2, so the
    // unique interior minimum sits at t* = 2^{-1/(2n-1)}.
    double t = std::pow(2.0, -1.0 / (2.0 * n - 1.0));
    return (0.5 + int_pow(t, 2 * n)) / int_pow(1.0 + t, 2 * n);
}

SeparatingFunction SeparatingFunction::make(SeparatingPolynomial poly) {
    SeparatingFunction sf;
    sf.poly_ = std::move(poly);
    int n = sf.poly_.n;
    sf.alpha_ = strip_alpha(n);
    sf.delta_q_ = 0.5 * std::min(1.0, sf.alpha_ / sf.poly_.norm_A);
    sf.lip_q_ = std::pow(sf.poly_.K, 1.0 / (2.0 * n));

    // Lipschitz bound of the continuation on the strip ||y|| < delta, from
    //   |DQ~(z)| <= sqrt(2) |z|_h^{2n-1} / |1+q~(z)|^{(2n-1)/2n},
    //   |z|_h^2 <= t^2 + delta^2,   |1+q~| >= 1 + t^{2n} - ||A||[(t+d)^{2n} - t^{2n}],
    // maximized over t = ||x|| by a dense log scan plus the t -> infinity
    // limit sqrt(2); a 0.1% pad covers the scan discretization.
    double d = sf.delta_q_;
    double na = sf.poly_.norm_A;
    auto bound_at = [&](double t) {
        double h = 1.0 + int_pow(t, 2 * n) - na * (int_pow(t + d, 2 * n) - int_pow(t, 2 * n));
        h = std::max(h, 0.5);
        double num = std::sqrt(2.0) * std::pow(t * t + d * d, (2.0 * n - 1.0) / 2.0);
        return num / std::pow(h, (2.0 * n - 1.0) / (2.0 * n));
    };
    double sup = std::sqrt(2.0);
    for (int i = 0; i <= 4000; ++i) {
        double t = (i == 0) ? 0.0 : std::pow(10.0, -3.0 + 11.0 * (i - 1) / 3999.0);
        sup = std::max(sup, bound_at(t));
    }
    sf.lip_strip_ = 1.001 * sup;
    return sf;
}

SeparatingFunction SeparatingFunction::euclidean(int n) {
    return make(SeparatingPolynomial::euclidean(n));
}

double SeparatingFunction::Q(const Vec& x) const {
    double q = poly_.q(x);
    // (1+q)^{1/2n} - 1, accurate for small q as well
    return std::expm1(std::log1p(q) / (2.0 * poly_.n));
}

CD SeparatingFunction::Q_complex(const ComplexPoint& z) const {
    check_finite(z.x);
    check_finite(z.y);
    if (norm2(z.y) >= delta_q_)
        throw std::domain_error("point outside the analyticity strip ||y|| < delta_Q");
    CVec w(z.x.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = CD{z.x[i], z.y[i]};
    CD oq = CD{1.0, 0.0} + poly_.q_cx(w);
    // Precondition keeps Re(1+q~) >= 1/2, so the principal log is smooth here.
    return std::exp(std::log(oq) / (2.0 * poly_.n)) - CD{1.0, 0.0};
}

std::vector<Vec> point_sequence(const SpaceConfig& cfg, std::size_t N) {
    if (N < 1) throw std::invalid_argument("point_sequence: N must be >= 1");
    std::size_t d = cfg.dimension;
    if (cfg.box.dim() != d) throw std::invalid_argument("point_sequence: box/dimension mismatch");

    constexpr int kMaxLevel = 20;
    // total points available through kMaxLevel (saturating)
    long double avail = 0.0L;
    for (int lvl = 0; lvl <= kMaxLevel; ++lvl) {
        avail += std::pow(2.0L, static_cast<long double>(lvl) * d);
        if (avail > 1e18L) break;
    }
    if (static_cast<long double>(N) > avail)
        throw std::invalid_argument("point_sequence: N exceeds maximum refinement");

    std::vector<Vec> pts;
    pts.reserve(N);
    for (int lvl = 0; lvl <= kMaxLevel && pts.size() < N; ++lvl) {
        std::size_t cells = std::size_t{1} << lvl;  // per axis
        std::vector<std::size_t> k(d, 0);
        while (pts.size() < N) {
            Vec c(d);
            for (std::size_t i = 0; i < d; ++i) {
                double w = cfg.box.hi[i] - cfg.box.lo[i];
                c[i] = cfg.box.lo[i] + (static_cast<double>(k[i]) + 0.5) * w /
                                           static_cast<double>(cells);
            }
            pts.push_back(std::move(c));
            // advance row-major counter, last coordinate fastest
            std::size_t i = d;
            while (i > 0) {
                --i;
                if (++k[i] < cells) break;
                k[i] = 0;
                if (i == 0) goto next_level;
            }
        }
    next_level:;
    }
    return pts;
}

double coverage_radius(const SpaceConfig& cfg, const SeparatingFunction& sf, std::size_t N) {
    std::size_t d = cfg.dimension;
    // deepest refinement level fully contained in the first N points
    int deepest = 0;
    long double cum = 0.0L;
    for (int lvl = 0;; ++lvl) {
        cum += std::pow(2.0L, static_cast<long double>(lvl) * d);
        if (cum <= static_cast<long double>(N)) {
            deepest = lvl;
        } else {
            break;
        }
    }
    double s = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        double half = (cfg.box.hi[i] - cfg.box.lo[i]) / std::pow(2.0, deepest + 1);
        s += half * half;
    }
    return sf.lip() * std::sqrt(s);
}

bool q_body_contains(const SeparatingFunction& sf, const Vec& center, double r, const Vec& x) {
    if (!(r > 0.0)) throw std::invalid_argument("q_body_contains: r must be positive");
    return sf.Q(x - center) < r;
}

}  // namespace lipsmooth
