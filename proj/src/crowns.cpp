#include "lipsmooth/crowns.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "lipsmooth/hinge.hpp"

namespace lipsmooth {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSqrt2Pi = 2.5066282746310005;

// Shared down-ramp of bump n on (2^n/eps, 2^{n+1}/eps); bump n+1's up-ramp is
// defined as its complement so overlapping pairs sum to 1 exactly.
double down_ramp(double eps, int n, double t) {
    const double P = std::ldexp(1.0, n) / eps;
    const double R = std::ldexp(1.0, n + 1) / eps;
    return (R - t) / (R - P);
}

}  // namespace

double CrownCover::lower(int n) const { return n <= 1 ? 0.0 : std::ldexp(1.0, n - 1) / eps; }

double CrownCover::upper(int n) const { return std::ldexp(1.0, n + 1) / eps; }

bool CrownCover::contains(int n, const Vec& x) const {
    const double q = sf.Q(x);
    return q >= lower(n) && q <= upper(n);
}

std::vector<int> CrownCover::crowns_of(const Vec& x) const {
    std::vector<int> out;
    for (int n = 1; n <= n_max; ++n)
        if (contains(n, x)) out.push_back(n);
    return out;
}

int CrownCover::crown_index(const Vec& x) const {
    const double q = sf.Q(x);
    int n = 1;
    while (q > upper(n) && n < 64) ++n;
    return n;
}

CrownCover crown_cover(double eps, const SeparatingFunction& sf, const IntervalBox& box) {
    if (!(eps > 0.0 && eps <= 1.0))
        throw std::invalid_argument("crown_cover: eps must lie in (0, 1]");
    CrownCover cover;
    cover.eps = eps;
    cover.sf = sf;
    cover.box = box;
    // certified max of Q over the box: corners (exact for the monotone
    // euclidean family) plus a coarse lattice as a cross-check
    const std::size_t d = box.dim();
    double q_max = 0.0;
    const int per_axis = 9;
    std::size_t corners = std::size_t{1} << d;
    for (std::size_t mask = 0; mask < corners; ++mask) {
        Vec x(d);
        for (std::size_t i = 0; i < d; ++i) x[i] = (mask >> i) & 1 ? box.hi[i] : box.lo[i];
        q_max = std::max(q_max, sf.Q(x));
    }
    std::size_t cells = 1;
    for (std::size_t i = 0; i < d; ++i) cells *= per_axis;
    for (std::size_t idx = 0; idx < cells; ++idx) {
        Vec x(d);
        std::size_t rest = idx;
        for (std::size_t i = 0; i < d; ++i) {
            const int k = static_cast<int>(rest % per_axis);
            rest /= per_axis;
            x[i] = box.lo[i] + (box.hi[i] - box.lo[i]) * k / (per_axis - 1);
        }
        q_max = std::max(q_max, sf.Q(x));
    }
    cover.q_max = q_max;
    int n = 1;
    while (std::ldexp(1.0, n) / eps <= q_max && n < 63) ++n;
    cover.n_max = n;
    return cover;
}

ScalarFn bounded_extension(const ScalarFn& f, int crown, const CrownCover& cover,
                           const std::vector<Vec>& sample_set) {
    if (sample_set.empty()) throw std::invalid_argument("bounded_extension: empty sample set");
    std::vector<Vec> pts;
    std::vector<double> vals;
    double M = 0.0;
    const double tol = 1e-9;
    for (const Vec& y : sample_set) {
        const double q = cover.sf.Q(y);
        if (q < cover.lower(crown) - tol || q > cover.upper(crown) + tol)
            throw std::invalid_argument("bounded_extension: sample outside crown " +
                                        std::to_string(crown) + " (Q = " + std::to_string(q) +
                                        ")");
        pts.push_back(y);
        vals.push_back(f(y));
        M = std::max(M, std::abs(vals.back()));
    }
    return [pts, vals, M](const Vec& x) {
        double best = kInf;
        for (std::size_t i = 0; i < pts.size(); ++i)
            best = std::min(best, vals[i] + dist2(x, pts[i]));
        return std::clamp(best, -M, M);
    };
}

double CrownPartition::theta_bar(int n, double t) const {
    const double P = std::ldexp(1.0, n) / eps;
    const double R = std::ldexp(1.0, n + 1) / eps;
    if (n == 1) {
        if (t <= -1.0 / eps || t >= R) return 0.0;
        if (t < 0.0) return 1.0 + t * eps;
        if (t <= P) return 1.0;
        return down_ramp(eps, 1, t);
    }
    const double L = std::ldexp(1.0, n - 1) / eps;
    if (t <= L || t >= R) return 0.0;
    if (t < P) return 1.0 - down_ramp(eps, n - 1, t);
    return down_ramp(eps, n, t);
}

double CrownPartition::theta(int n, double t) const {
    const CrownBump& b = bumps[n - 1];
    double s = 0.0;
    for (std::size_t i = 0; i < b.slopes.size(); ++i)
        s += b.slopes[i] * smoothed_hinge(t - b.knots[i], b.sigma);
    return s;
}

CD CrownPartition::theta_complex(int n, CD t) const {
    const CrownBump& b = bumps[n - 1];
    if (std::abs(t.imag()) > 9.0 * b.sigma)
        throw std::domain_error("theta_complex: imaginary part beyond the certified window");
    CD s(0.0, 0.0);
    for (std::size_t i = 0; i < b.slopes.size(); ++i)
        s += b.slopes[i] * smoothed_hinge_complex(t - b.knots[i], b.sigma);
    return s;
}

double CrownPartition::sum_theta_bar(double t) const {
    double s = 0.0;
    for (std::size_t n = 1; n <= bumps.size(); ++n) s += theta_bar(static_cast<int>(n), t);
    return s;
}

double CrownPartition::sum_theta(double t) const {
    double s = 0.0;
    for (std::size_t n = 1; n <= bumps.size(); ++n) s += theta(static_cast<int>(n), t);
    return s;
}

double CrownPartition::lip_sum() const {
    double s = 0.0;
    for (const CrownBump& b : bumps) s += b.lip;
    return s;
}

CrownPartition crown_partition(const CrownCover& cover, const std::vector<double>& bound_seq) {
    if (static_cast<int>(bound_seq.size()) < cover.n_max)
        throw std::invalid_argument("crown_partition: need a sup bound per crown");
    CrownPartition part;
    part.eps = cover.eps;
    part.lip_q = cover.sf.lip();
    part.n_crowns = cover.n_max;
    const double eps = cover.eps;
    const int count = cover.n_max + 3;
    for (int n = 1; n <= count; ++n) {
        CrownBump b;
        if (n == 1) {
            b.slopes = {eps, -eps, -eps / 2.0, eps / 2.0};
            b.knots = {-1.0 / eps, 0.0, 2.0 / eps, 4.0 / eps};
            b.lip = eps;
        } else {
            const double L = std::ldexp(1.0, n - 1) / eps;
            const double P = std::ldexp(1.0, n) / eps;
            const double R = std::ldexp(1.0, n + 1) / eps;
            const double su = 1.0 / (P - L), sd = 1.0 / (R - P);
            b.slopes = {su, -su, -sd, sd};
            b.knots = {L, P, P, R};
            b.lip = su;
        }
        const double bound = n <= static_cast<int>(bound_seq.size()) ? bound_seq[n - 1] : 0.0;
        if (!(bound >= 0.0))
            throw std::invalid_argument("crown_partition: sup bounds must be nonnegative");
        b.value_budget = eps / (std::ldexp(1.0, n + 3) * (1.0 + bound));
        b.deriv_budget = b.value_budget / part.lip_q;

        double J = 0.0;
        for (double s : b.slopes) J += std::abs(s);
        double gap = kInf;
        for (std::size_t i = 1; i < b.knots.size(); ++i) {
            const double g = b.knots[i] - b.knots[i - 1];
            if (g > 0.0) gap = std::min(gap, g);
        }
        b.deriv_window = gap / 8.0;
        // (2): sup deviation <= J sigma / sqrt(2 pi)
        double sigma = b.value_budget * kSqrt2Pi / J;
        // (3): J Phi(-w/sigma) <= deriv_budget off the kink windows,
        //      via Phi(-u) <= exp(-u^2/2)/2
        const double ratio = J / (2.0 * b.deriv_budget);
        if (ratio > 1.0) sigma = std::min(sigma, b.deriv_window / std::sqrt(2.0 * std::log(ratio)));
        double kappa = 1.0 / (2.0 * sigma * sigma);
        // (1): e^{-kappa} <= value budget
        kappa = std::max(kappa, std::log(1.0 / b.value_budget) + 1.0);
        b.kappa = kappa;
        b.sigma = 1.0 / std::sqrt(2.0 * kappa);
        part.bumps.push_back(b);
    }
    return part;
}

Approximant assemble_unbounded(const ScalarFn& f, const std::vector<Approximant>& components,
                               const CrownPartition& part, const SeparatingFunction& sf,
                               const IntervalBox& box, const std::vector<Vec>& probes) {
    if (static_cast<int>(components.size()) != part.n_crowns)
        throw std::invalid_argument("assemble_unbounded: one component per crown required");
    double C = 0.0;
    for (const Approximant& g : components) {
        if (!(g.claimed_sup_error <= 1.0))
            throw std::invalid_argument(
                "assemble_unbounded: assembly refused, component lacks the |g_n - f_n| <= 1 "
                "certification");
        C = std::max(C, g.claimed_lip);
    }
    std::vector<ScalarFn> evals;
    for (const Approximant& g : components) evals.push_back(g.evaluator);
    const CrownPartition pc = part;
    const SeparatingFunction sfc = sf;
    Approximant out;
    out.evaluator = [evals, pc, sfc](const Vec& x) {
        const double t = sfc.Q(x);
        double s = 0.0;
        for (std::size_t n = 1; n <= evals.size(); ++n) {
            const double th = pc.theta(static_cast<int>(n), t);
            if (std::abs(th) < 1e-300) continue;
            s += th * evals[n - 1](x);
        }
        return s;
    };
    out.claimed_sup_error = 2.0;
    out.claimed_lip = C + 4.0 * part.eps * sf.lip();
    double dev_budget = 1e-8;
    for (const CrownBump& b : pc.bumps) dev_budget += b.value_budget;
    out.valid_region.box = box;
    out.valid_region.probes = probes;
    std::size_t hits = 0;
    for (const Vec& p : probes) {
        const bool partition_ok = std::abs(pc.sum_theta(sfc.Q(p)) - 1.0) <= dev_budget;
        const bool error_ok = std::abs(out.evaluator(p) - f(p)) <= out.claimed_sup_error + 1e-12;
        out.valid_region.covered.push_back(partition_ok && error_ok ? 1 : 0);
        hits += out.valid_region.covered.back();
    }
    out.valid_region.fraction =
        probes.empty() ? 0.0 : static_cast<double>(hits) / static_cast<double>(probes.size());
    return out;
}

}  // namespace lipsmooth
