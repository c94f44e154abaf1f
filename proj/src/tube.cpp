#include "lipsmooth/tube.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>

#include "lipsmooth/cerf.hpp"
#include "lipsmooth/hinge.hpp"

namespace lipsmooth {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Truncated moments of x + sigma Z over (a, b): m0 = P(in), m1 = E[. 1_in].
struct Moments {
    double m0 = 0.0;
    double m1 = 0.0;
};
Moments moments(double a, double b, double x, double sigma) {
    const double ah = std::isinf(a) ? -kInf : (a - x) / sigma;
    const double bh = std::isinf(b) ? kInf : (b - x) / sigma;
    const double Fa = std::isinf(a) ? 0.0 : Phi(ah);
    const double Fb = std::isinf(b) ? 1.0 : Phi(bh);
    const double fa = std::isinf(a) ? 0.0 : phi_pdf(ah);
    const double fb = std::isinf(b) ? 0.0 : phi_pdf(bh);
    Moments m;
    m.m0 = Fb - Fa;
    m.m1 = x * m.m0 + sigma * (fa - fb);
    return m;
}
struct MomentsC {
    CD m0{0.0, 0.0};
    CD m1{0.0, 0.0};
};
MomentsC moments_cx(double a, double b, CD x, double sigma) {
    const CD Fa = std::isinf(a) ? CD(0.0) : Phi_clipped((a - x) / sigma);
    const CD Fb = std::isinf(b) ? CD(1.0) : Phi_clipped((b - x) / sigma);
    const CD fa = std::isinf(a) ? CD(0.0) : phi_pdf_clipped((a - x) / sigma);
    const CD fb = std::isinf(b) ? CD(0.0) : phi_pdf_clipped((b - x) / sigma);
    MomentsC m;
    m.m0 = Fb - Fa;
    m.m1 = x * m.m0 + sigma * (fa - fb);
    return m;
}

// One bilinear piece k0 + kx x + ky y + kxy x y active on lo < x < lo+...
struct BilinearPiece {
    double lo, hi;
    double k0, kx, ky, kxy;
};
using PieceList = std::vector<BilinearPiece>;

double eval_exact(const PieceList& ps, double x, double y) {
    for (const auto& p : ps)
        if (x >= p.lo && x <= p.hi) return p.k0 + p.kx * x + p.ky * y + p.kxy * x * y;
    return 0.0;
}
double eval_smoothed(const PieceList& ps, double x, double y, double sigma) {
    double s = 0.0;
    for (const auto& p : ps) {
        const Moments m = moments(p.lo, p.hi, x, sigma);
        s += p.k0 * m.m0 + p.kx * m.m1 + y * (p.ky * m.m0 + p.kxy * m.m1);
    }
    return s;
}
CD eval_smoothed_cx(const PieceList& ps, CD x, CD y, double sigma) {
    CD s{0.0, 0.0};
    for (const auto& p : ps) {
        const MomentsC m = moments_cx(p.lo, p.hi, x, sigma);
        s += p.k0 * m.m0 + p.kx * m.m1 + y * (p.ky * m.m0 + p.kxy * m.m1);
    }
    return s;
}

// Narrowed corner chart with half-width c: identity up to 1-c, the printed
// corner shear compressed into [1-c, 1+c], the rotation (x,y) -> (1-y, x-1)
// beyond.  Continuous, piecewise bilinear in x.
PieceList corner_phi_pieces(double c) {
    return {{-kInf, 1.0 - c, 0.0, 1.0, 0.0, 0.0},
            {1.0 - c, 1.0, 0.0, 1.0, (1.0 - c) / c, -1.0 / c},
            {1.0, kInf, 1.0, 0.0, -1.0, 0.0}};
}
PieceList corner_psi_pieces(double c) {
    return {{-kInf, 1.0, 0.0, 0.0, 1.0, 0.0},
            {1.0, 1.0 + c, -1.0, 1.0, (1.0 + c) / c, -1.0 / c},
            {1.0 + c, kInf, -1.0, 1.0, 0.0, 0.0}};
}

std::array<double, 2> corner_exact(double c, double x, double y) {
    return {eval_exact(corner_phi_pieces(c), x, y), eval_exact(corner_psi_pieces(c), x, y)};
}

// theta_bar as a hinge combination (see theta_bar below).
const double kThetaOff[4] = {0.5, 0.25, -0.5, -0.75};
const double kThetaSgn[4] = {4.0, -4.0, -4.0, 4.0};

double theta_smooth(double t, double sigma) {
    double s = 0.0;
    for (int k = 0; k < 4; ++k) s += kThetaSgn[k] * smoothed_hinge(t + kThetaOff[k], sigma);
    return s;
}
CD theta_smooth_cx(CD z, double sigma) {
    CD s{0.0, 0.0};
    for (int k = 0; k < 4; ++k) s += kThetaSgn[k] * smoothed_hinge_complex(z + kThetaOff[k], sigma);
    return s;
}

bool in_S(const TubeMapConfig& cfg, const Vec& x, double tol) {
    if (x.size() != static_cast<std::size_t>(cfg.N + 2)) return false;
    if (!(x[0] > -cfg.r - tol) || !(x[0] < cfg.N + 0.25 + tol)) return false;
    for (std::size_t j = 1; j < x.size(); ++j)
        if (!(std::abs(x[j]) < cfg.r + tol)) return false;
    return true;
}

// Chart with corner at x_1 = m, accumulated with the given weight.
template <class Scalar, class XVec>
void add_chart(const TubeMapConfig& cfg, int m, const XVec& x, Scalar w, std::vector<Scalar>& out) {
    const Scalar s = x[0] - static_cast<double>(m - 1);
    const Scalar y = x[m];
    Scalar phi, psi;
    if constexpr (std::is_same_v<Scalar, double>) {
        phi = eval_smoothed(corner_phi_pieces(cfg.c), s, y, cfg.sigma_c);
        psi = eval_smoothed(corner_psi_pieces(cfg.c), s, y, cfg.sigma_c);
    } else {
        phi = eval_smoothed_cx(corner_phi_pieces(cfg.c), s, y, cfg.sigma_c);
        psi = eval_smoothed_cx(corner_psi_pieces(cfg.c), s, y, cfg.sigma_c);
    }
    for (int i = 0; i + 1 <= m - 1; ++i) out[i] += w * (1.0 - x[i + 1]);
    out[m - 1] += w * phi;
    out[m] += w * psi;
    for (std::size_t k = m + 1; k < out.size(); ++k) out[k] += w * x[k];
}

Vec raw_G(const TubeMapConfig& cfg, const Vec& x) {
    Vec out(x.size(), 0.0);
    for (int m = 1; m <= cfg.N; ++m) {
        double w = theta_smooth(x[0] - m, cfg.sigma_theta);
        if (m == 1) w += theta_smooth(x[0], cfg.sigma_theta);
        if (std::abs(w) < 1e-300) continue;
        add_chart(cfg, m, x, w, out);
    }
    return out;
}
CVec raw_G_cx(const TubeMapConfig& cfg, const CVec& z) {
    CVec out(z.size(), CD(0.0));
    for (int m = 1; m <= cfg.N; ++m) {
        CD w = theta_smooth_cx(z[0] - static_cast<double>(m), cfg.sigma_theta);
        if (m == 1) w += theta_smooth_cx(z[0], cfg.sigma_theta);
        if (std::abs(w) < 1e-300) continue;
        add_chart(cfg, m, z, w, out);
    }
    return out;
}

// In-place Gaussian elimination with partial pivoting.
template <class T>
bool solve_linear(std::vector<std::vector<T>>& A, std::vector<T>& b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t i = col + 1; i < n; ++i)
            if (std::abs(A[i][col]) > std::abs(A[piv][col])) piv = i;
        if (std::abs(A[piv][col]) < 1e-14) return false;
        std::swap(A[piv], A[col]);
        std::swap(b[piv], b[col]);
        for (std::size_t i = col + 1; i < n; ++i) {
            const T f = A[i][col] / A[col][col];
            for (std::size_t j = col; j < n; ++j) A[i][j] -= f * A[col][j];
            b[i] -= f * b[col];
        }
    }
    for (std::size_t i = n; i-- > 0;) {
        T s = b[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= A[i][j] * b[j];
        b[i] = s / A[i][i];
    }
    return true;
}

// Affine initial guess from the nearest path segment (exact inverse wherever
// the active chart is in its identity regime).
// Affine inverse of the flat regime of segment m0; exact away from the
// corners, where m0 == N covers the straight overhang past the last corner.
Vec affine_preimage(const Vec& u, int m0) {
    Vec x(u.size(), 0.0);
    x[0] = m0 + u[m0];
    for (int i = 1; i <= m0; ++i) x[i] = 1.0 - u[i - 1];
    for (std::size_t k = m0 + 1; k < u.size(); ++k) x[k] = u[k];
    return x;
}

// Segment choice by projection is ambiguous near the last corner, so seed
// Newton with whichever affine candidate already has the smallest residual.
Vec newton_init(const TubeMapConfig& cfg, const Vec& u) {
    Vec best;
    double best_res = kInf;
    for (int m0 = 0; m0 <= cfg.N; ++m0) {
        Vec cand = affine_preimage(u, m0);
        const double res = norm_inf(raw_G(cfg, cand) - u);
        if (res < best_res) {
            best_res = res;
            best = std::move(cand);
        }
    }
    return best;
}

double fd_step(const TubeMapConfig& cfg) { return std::min(1e-6, cfg.r * 1e-2); }

}  // namespace

SlabDecomposition slab_decompose(const ScalarFn& f, int N) {
    if (N < 1) throw std::invalid_argument("slab_decompose: N must be positive");
    SlabDecomposition d;
    d.N = N;
    for (int n = 1; n <= N; ++n)
        d.components.push_back(
            [f, n](const Vec& x) { return std::clamp(f(x) - (n - 1), 0.0, 1.0); });
    return d;
}

Vec beta_path(double t, int N) {
    if (!(t >= 0.0) || !(t <= N))
        throw std::domain_error("beta_path: parameter " + std::to_string(t) +
                                " outside [0, " + std::to_string(N) + "]");
    const int n = std::max(1, static_cast<int>(std::ceil(t)));
    Vec out(N + 2, 0.0);
    for (int j = 0; j <= n - 2; ++j) out[j] = 1.0;
    out[n - 1] = t - n + 1;
    return out;
}

PathProjection project_to_path(const Vec& y) {
    if (y.size() < 3) throw std::invalid_argument("project_to_path: need at least 3 coordinates");
    const int N = static_cast<int>(y.size()) - 2;
    std::vector<double> sufmax(y.size() + 1, 0.0);
    for (int k = static_cast<int>(y.size()) - 1; k >= 0; --k)
        sufmax[k] = std::max(sufmax[k + 1], std::abs(y[k]));
    PathProjection best{0.0, kInf};
    double premax = 0.0;
    for (int m = 0; m < N; ++m) {
        const double s = std::clamp(y[m], 0.0, 1.0);
        const double d = std::max({premax, std::abs(y[m] - s), sufmax[m + 1]});
        if (d < best.dist) best = {m + s, d};
        premax = std::max(premax, std::abs(y[m] - 1.0));
    }
    return best;
}

double beta_inverse(const Vec& y) {
    const PathProjection pr = project_to_path(y);
    if (pr.dist > 1e-9)
        throw std::domain_error("beta_inverse: point is not on the corner path (dist_inf = " +
                                std::to_string(pr.dist) + ")");
    double s = 0.0;
    for (double v : y) s += v;
    return s;
}

std::array<double, 2> corner_F(std::array<double, 2> p, double r) {
    const double x = p[0], y = p[1];
    if (!(x >= 0.0 && x <= 2.0 && std::abs(y) <= r))
        throw std::domain_error("corner_F: point outside [0,2] x [-r,r]");
    if (x <= 1.0) return {x - y * x, y};
    return {1.0 - y, x - 1.0 + y * (2.0 - x)};
}

std::array<double, 2> corner_F_inv(std::array<double, 2> p, double r) {
    const double u = p[0], v = p[1];
    std::array<double, 2> q;
    if (u + v <= 1.0)
        q = {u / (1.0 - v), v};
    else
        q = {(2.0 * u + v - 1.0) / u, 1.0 - u};
    const double tol = 1e-9;
    if (!(q[0] >= -tol && q[0] <= 2.0 + tol && std::abs(q[1]) <= r + tol))
        throw std::domain_error("corner_F_inv: point outside the corner image");
    return q;
}

double staircase_alpha_bar(const Staircase& st, double t) {
    if (t <= 0.0) return 0.0;
    const double slope = 1.0 / (1.0 - 4.0 * st.eps);
    double s = 0.0;
    const int nmax = static_cast<int>(std::ceil(t)) + 1;
    for (int n = 0; n <= nmax; ++n) {
        const double a = std::max(0.0, t - n - 2.0 * st.eps);
        const double b = std::max(0.0, t - n - 1.0 + 2.0 * st.eps);
        s += slope * (a - b);
    }
    return s;
}

double staircase_alpha(const Staircase& st, double t) {
    const double slope = 1.0 / (1.0 - 4.0 * st.eps);
    double s = 0.0;
    const int nmax = std::max(0, static_cast<int>(std::ceil(t))) + 2;
    for (int n = 0; n <= nmax; ++n)
        s += slope * (smoothed_hinge(t - n - 2.0 * st.eps, st.sigma) - smoothed_hinge(t - n - 1.0 + 2.0 * st.eps, st.sigma));
    return s;
}

CD staircase_alpha_complex(const Staircase& st, CD z) {
    const double slope = 1.0 / (1.0 - 4.0 * st.eps);
    CD s{0.0, 0.0};
    const int nmax = std::max(0, static_cast<int>(std::ceil(z.real()))) + 2;
    for (int n = 0; n <= nmax; ++n)
        s += slope * (smoothed_hinge_complex(z - (n + 2.0 * st.eps), st.sigma) - smoothed_hinge_complex(z - (n + 1.0 - 2.0 * st.eps), st.sigma));
    return s;
}

double theta_bar(double t) {
    double s = 0.0;
    for (int k = 0; k < 4; ++k) s += kThetaSgn[k] * std::max(0.0, t + kThetaOff[k]);
    return s;
}

double tube_theta(const TubeMapConfig& cfg, double t) { return theta_smooth(t, cfg.sigma_theta); }
CD tube_theta_complex(const TubeMapConfig& cfg, CD z) { return theta_smooth_cx(z, cfg.sigma_theta); }

std::array<double, 2> corner_smoothed(const TubeMapConfig& cfg, double x, double y) {
    return {eval_smoothed(corner_phi_pieces(cfg.c), x, y, cfg.sigma_c),
            eval_smoothed(corner_psi_pieces(cfg.c), x, y, cfg.sigma_c)};
}
std::array<CD, 2> corner_smoothed_complex(const TubeMapConfig& cfg, CD x, CD y) {
    return {eval_smoothed_cx(corner_phi_pieces(cfg.c), x, y, cfg.sigma_c),
            eval_smoothed_cx(corner_psi_pieces(cfg.c), x, y, cfg.sigma_c)};
}

TubeMapConfig TubeMapConfig::make(double eps, int N) {
    if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("tube: eps must be in (0,1]");
    if (N < 1) throw std::invalid_argument("tube: N must be positive");
    TubeMapConfig cfg;
    cfg.eps = eps;
    cfg.eps_int = eps / 8.0;
    cfg.c = 0.15 * eps;
    cfg.r = 0.9 * std::min({eps / 64.0, 0.06 * eps * eps, cfg.c / 4.0});
    cfg.sigma_c = cfg.r / 8.0;
    cfg.sigma_theta = 1.0 / 32.0;
    cfg.N = N;
    cfg.stair = Staircase{cfg.eps_int, cfg.eps_int / 7.0};

    // Halve each smoothing width until its closeness budget holds: the blend
    // weights within eps_int/(2(N+2)) of the exact plateau bumps (summed over
    // shifts), the corner chart and the staircase within eps_int/2.
    const double theta_budget = cfg.eps_int / (2.0 * (N + 2));
    bool ok = false;
    for (int round = 0; round < 16 && !ok; ++round) {
        std::vector<double> grid;
        for (double t = -0.6; t <= N + 0.8; t += 0.0025) grid.push_back(t);
        for (int n = 0; n <= N; ++n)
            for (double off : {-0.5, -0.25, 0.5, 0.75}) grid.push_back(n + off);
        double worst = 0.0;
        for (double t : grid) {
            double s = 0.0;
            for (int n = 0; n <= N; ++n)
                s += std::abs(theta_smooth(t - n, cfg.sigma_theta) - theta_bar(t - n));
            worst = std::max(worst, s);
        }
        if (worst <= theta_budget)
            ok = true;
        else
            cfg.sigma_theta *= 0.5;
    }
    if (!ok) throw std::runtime_error("tube: blend smoothing width selection failed");

    ok = false;
    for (int round = 0; round < 16 && !ok; ++round) {
        double worst = 0.0;
        for (int i = 0; i <= 160; ++i) {
            const double x = 1.0 - 2.0 * cfg.c + 4.0 * cfg.c * i / 160.0;
            for (int j = 0; j <= 16; ++j) {
                const double y = -cfg.r + 2.0 * cfg.r * j / 16.0;
                const auto sm = corner_smoothed(cfg, x, y);
                const auto ex = corner_exact(cfg.c, x, y);
                worst = std::max({worst, std::abs(sm[0] - ex[0]), std::abs(sm[1] - ex[1])});
            }
        }
        if (worst <= cfg.eps_int / 2.0)
            ok = true;
        else
            cfg.sigma_c *= 0.5;
    }
    if (!ok) throw std::runtime_error("tube: corner smoothing width selection failed");

    ok = false;
    for (int round = 0; round < 16 && !ok; ++round) {
        std::vector<double> grid;
        for (double t = -0.5; t <= N + 1.5; t += 0.0025) grid.push_back(t);
        for (int n = 0; n <= N + 1; ++n) {
            grid.push_back(n + 2.0 * cfg.eps_int);
            grid.push_back(n + 1.0 - 2.0 * cfg.eps_int);
        }
        double worst = 0.0;
        for (double t : grid)
            worst = std::max(worst, std::abs(staircase_alpha(cfg.stair, t) -
                                             staircase_alpha_bar(cfg.stair, t)));
        if (worst <= cfg.eps_int / 2.0)
            ok = true;
        else
            cfg.stair.sigma *= 0.5;
    }
    if (!ok) throw std::runtime_error("tube: staircase smoothing width selection failed");

    const double sigma_min = std::min({cfg.sigma_c, cfg.sigma_theta, cfg.stair.sigma});
    cfg.delta = std::min(eps / 65.0, 0.9 * sigma_min * std::sqrt(2.0 * std::log1p(cfg.eps_int)));
    return cfg;
}

Vec tube_G(const TubeMapConfig& cfg, const Vec& x) {
    if (!in_S(cfg, x, 1e-9))
        throw std::domain_error("tube_G: point outside the straight tube domain");
    return raw_G(cfg, x);
}

CVec tube_G_complex(const TubeMapConfig& cfg, const CVec& z) {
    Vec re(z.size());
    double imn = 0.0;
    for (std::size_t j = 0; j < z.size(); ++j) {
        re[j] = z[j].real();
        imn = std::max(imn, std::abs(z[j].imag()));
    }
    if (!in_S(cfg, re, 1e-9) || imn > cfg.delta * (1.0 + 1e-9))
        throw std::domain_error("tube_G_complex: point outside the certified complex strip");
    return raw_G_cx(cfg, z);
}

TubeInversion tube_G_inverse(const TubeMapConfig& cfg, const Vec& u) {
    if (u.size() != static_cast<std::size_t>(cfg.N + 2))
        throw std::invalid_argument("tube_G_inverse: wrong dimension");
    TubeInversion inv;
    inv.x = newton_init(cfg, u);
    const double h = fd_step(cfg);
    const std::size_t d = u.size();
    double res = norm_inf(raw_G(cfg, inv.x) - u);
    for (inv.iterations = 0; inv.iterations < 60 && res > 1e-13; ++inv.iterations) {
        std::vector<std::vector<double>> J(d, std::vector<double>(d, 0.0));
        for (std::size_t j = 0; j < d; ++j) {
            Vec xp = inv.x, xm = inv.x;
            xp[j] += h;
            xm[j] -= h;
            const Vec gp = raw_G(cfg, xp), gm = raw_G(cfg, xm);
            for (std::size_t i = 0; i < d; ++i) J[i][j] = (gp[i] - gm[i]) / (2.0 * h);
        }
        Vec step = u - raw_G(cfg, inv.x);
        if (!solve_linear(J, step)) break;
        double tau = 1.0;
        bool accepted = false;
        while (tau > 1e-6) {
            const Vec xn = inv.x + tau * step;
            const double rn = norm_inf(raw_G(cfg, xn) - u);
            if (rn <= res * (1.0 - 0.25 * tau)) {
                inv.x = xn;
                res = rn;
                accepted = true;
                break;
            }
            tau *= 0.5;
        }
        if (!accepted) break;
        if (norm_inf(inv.x) > cfg.N + 10.0) break;
    }
    inv.residual = res;
    inv.inside = res <= 1e-10 && in_S(cfg, inv.x, 1e-6 * cfg.r);
    return inv;
}

double tube_H(const TubeMapConfig& cfg, const Vec& u) {
    const TubeInversion inv = tube_G_inverse(cfg, u);
    if (!inv.inside)
        throw std::domain_error("tube_H: point outside the tube (inversion residual = " +
                                std::to_string(inv.residual) + ", path distance = " +
                                std::to_string(project_to_path(u).dist) + ")");
    return staircase_alpha(cfg.stair, inv.x[0]);
}

CD tube_H_complex(const TubeMapConfig& cfg, const CVec& u) {
    Vec re(u.size());
    for (std::size_t j = 0; j < u.size(); ++j) re[j] = u[j].real();
    const TubeInversion base = tube_G_inverse(cfg, re);
    if (!base.inside)
        throw std::domain_error("tube_H_complex: real part outside the tube");
    const std::size_t d = u.size();
    CVec z(d);
    for (std::size_t j = 0; j < d; ++j) z[j] = CD(base.x[j], 0.0);
    const double h = fd_step(cfg);
    auto residual = [&](const CVec& zz) {
        CVec F = raw_G_cx(cfg, zz);
        double rn = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            F[i] -= u[i];
            rn = std::max(rn, std::abs(F[i]));
        }
        return std::pair<CVec, double>(std::move(F), rn);
    };
    double res = residual(z).second;
    for (int it = 0; it < 60 && res > 1e-13; ++it) {
        std::vector<std::vector<CD>> J(d, std::vector<CD>(d, CD(0.0)));
        for (std::size_t j = 0; j < d; ++j) {
            CVec zp = z, zm = z;
            zp[j] += h;
            zm[j] -= h;
            const CVec gp = raw_G_cx(cfg, zp), gm = raw_G_cx(cfg, zm);
            for (std::size_t i = 0; i < d; ++i) J[i][j] = (gp[i] - gm[i]) / (2.0 * h);
        }
        std::vector<CD> step(d);
        {
            const CVec F = residual(z).first;
            for (std::size_t i = 0; i < d; ++i) step[i] = -F[i];
        }
        if (!solve_linear(J, step)) break;
        double tau = 1.0;
        bool accepted = false;
        while (tau > 1e-6) {
            CVec zn = z;
            for (std::size_t i = 0; i < d; ++i) zn[i] += tau * step[i];
            const double rn = residual(zn).second;
            if (rn <= res * (1.0 - 0.25 * tau)) {
                z = std::move(zn);
                res = rn;
                accepted = true;
                break;
            }
            tau *= 0.5;
        }
        if (!accepted) break;
    }
    if (res > 1e-9)
        throw std::domain_error("tube_H_complex: complex inversion did not converge");
    return staircase_alpha_complex(cfg.stair, z[0]);
}

Approximant glue_bounded(const std::vector<Approximant>& components, const TubeMapConfig& cfg,
                         const IntervalBox& box, const std::vector<Vec>& probes) {
    if (static_cast<int>(components.size()) != cfg.N)
        throw std::invalid_argument("glue_bounded: expected exactly N components");
    auto comps = std::make_shared<std::vector<ScalarFn>>();
    double component_lip = 0.0;
    for (const Approximant& c : components) {
        comps->push_back(c.evaluator);
        component_lip = std::max(component_lip, c.claimed_lip);
    }
    auto lift = [comps, cfg](const Vec& x) {
        Vec u(cfg.N + 2, 0.0);
        for (int i = 0; i < cfg.N; ++i) u[i] = (*comps)[i](x);
        return u;
    };
    Approximant a;
    a.evaluator = [lift, cfg](const Vec& x) { return tube_H(cfg, lift(x)); };
    a.claimed_sup_error = cfg.eps;
    a.claimed_lip = (1.0 + cfg.eps) * component_lip;
    a.valid_region.box = box;
    a.valid_region.probes = probes;
    a.valid_region.covered.resize(probes.size(), 0);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < probes.size(); ++i) {
        const TubeInversion inv = tube_G_inverse(cfg, lift(probes[i]));
        a.valid_region.covered[i] = inv.inside ? 1 : 0;
        hits += inv.inside;
    }
    a.valid_region.fraction = probes.empty() ? 0.0 : static_cast<double>(hits) / probes.size();
    return a;
}

}  // namespace lipsmooth
