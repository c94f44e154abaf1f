#include "lipsmooth/lasry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace lipsmooth {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Lower envelope of the parabolas i -> fvals[i] + w (j - i)^2 evaluated at
// every integer j.  Linear time; sentinel intersections at +-inf; at an exact
// boundary the smaller parabola index wins.
void lower_envelope(const std::vector<double>& fvals, double w, std::vector<double>& out,
                    std::vector<int>& hull, std::vector<double>& cuts) {
    const int n = static_cast<int>(fvals.size());
    out.resize(n);
    if (n == 1) {
        out[0] = fvals[0];
        return;
    }
    hull.assign(1, 0);
    cuts.assign(2, 0.0);
    cuts[0] = -kInf;
    cuts[1] = kInf;
    int k = 0;
    for (int q = 1; q < n; ++q) {
        double s = 0.0;
        while (true) {
            const int p = hull[k];
            s = ((fvals[q] + w * q * q) - (fvals[p] + w * p * p)) /
                (2.0 * w * (q - p));
            if (k > 0 && s <= cuts[k]) {
                --k;
                hull.pop_back();
                cuts.pop_back();
            } else {
                break;
            }
        }
        ++k;
        hull.push_back(q);
        cuts.back() = s;
        cuts.push_back(kInf);
    }
    k = 0;
    for (int j = 0; j < n; ++j) {
        while (cuts[k + 1] < j) ++k;
        const int p = hull[k];
        out[j] = fvals[p] + w * (j - p) * (j - p);
    }
}

void check_params(const LasryParams& p) {
    if (!(p.mu > 0.0 && p.mu < p.lambda && p.lambda <= p.lambda0))
        throw std::invalid_argument("lasry_lions: parameters must satisfy 0 < mu < lambda <= lambda0");
}

}  // namespace

std::size_t GridFunction::flat(const std::vector<std::size_t>& idx) const {
    std::size_t f = 0;
    for (std::size_t a = 0; a < shape.size(); ++a) f = f * shape[a] + idx[a];
    return f;
}

Vec GridFunction::point(std::size_t flat_index) const {
    const std::size_t d = shape.size();
    Vec x(d);
    for (std::size_t a = d; a-- > 0;) {
        x[a] = box.lo[a] + h * static_cast<double>(flat_index % shape[a]);
        flat_index /= shape[a];
    }
    return x;
}

GridFunction GridFunction::sample(const ScalarFn& f, const IntervalBox& box, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("GridFunction: spacing must be positive");
    GridFunction g;
    g.box = box;
    g.h = h;
    std::size_t total = 1;
    for (std::size_t a = 0; a < box.dim(); ++a) {
        const double w = box.hi[a] - box.lo[a];
        const double n = w / h;
        if (std::abs(n - std::round(n)) > 1e-9 * std::max(1.0, n))
            throw std::invalid_argument("GridFunction: box width is not a multiple of h");
        g.shape.push_back(static_cast<std::size_t>(std::llround(n)) + 1);
        total *= g.shape.back();
    }
    g.values.resize(total);
    for (std::size_t i = 0; i < total; ++i) g.values[i] = f(g.point(i));
    return g;
}

double grid_interpolate(const GridFunction& g, const Vec& x) {
    const std::size_t d = g.dim();
    std::vector<std::size_t> base(d);
    std::vector<double> frac(d);
    for (std::size_t a = 0; a < d; ++a) {
        const double u =
            std::clamp((x[a] - g.box.lo[a]) / g.h, 0.0, static_cast<double>(g.shape[a] - 1));
        const double fl = std::floor(u);
        base[a] = std::min(static_cast<std::size_t>(fl), g.shape[a] - 2);
        frac[a] = u - static_cast<double>(base[a]);
    }
    // gather the 2^d cell corners, then lerp them down one axis at a time;
    // a + t*(b - a) reproduces constants exactly
    std::vector<double> vals(std::size_t{1} << d);
    std::vector<std::size_t> idx(d);
    for (std::size_t corner = 0; corner < vals.size(); ++corner) {
        for (std::size_t a = 0; a < d; ++a) idx[a] = base[a] + ((corner >> a) & 1);
        vals[corner] = g.values[g.flat(idx)];
    }
    for (std::size_t a = d; a-- > 0;) {
        const std::size_t half = std::size_t{1} << a;
        for (std::size_t k = 0; k < half; ++k)
            vals[k] += frac[a] * (vals[k + half] - vals[k]);
    }
    return vals[0];
}

double grid_lip_quotient(const GridFunction& g) {
    const std::size_t d = g.dim();
    double worst = 0.0;
    // axis strides in flat index space
    std::vector<std::size_t> stride(d, 1);
    for (std::size_t a = d - 1; a-- > 0;) stride[a] = stride[a + 1] * g.shape[a + 1];
    std::vector<std::size_t> idx(d, 0);
    const double diag = g.h * std::sqrt(2.0);
    for (std::size_t i = 0; i < g.size(); ++i) {
        for (std::size_t a = 0; a < d; ++a) {
            if (idx[a] + 1 < g.shape[a]) {
                worst = std::max(worst, std::abs(g.values[i + stride[a]] - g.values[i]) / g.h);
                for (std::size_t b = a + 1; b < d; ++b) {
                    if (idx[b] + 1 < g.shape[b])
                        worst = std::max(
                            worst,
                            std::abs(g.values[i + stride[a] + stride[b]] - g.values[i]) / diag);
                    if (idx[b] >= 1)
                        worst = std::max(
                            worst,
                            std::abs(g.values[i + stride[a] - stride[b]] - g.values[i]) / diag);
                }
            }
        }
        for (std::size_t a = d; a-- > 0;) {
            if (++idx[a] < g.shape[a]) break;
            idx[a] = 0;
        }
    }
    return worst;
}

std::array<double, 2> grid_curvature_range(const GridFunction& g) {
    const std::size_t d = g.dim();
    std::vector<std::size_t> stride(d, 1);
    for (std::size_t a = d - 1; a-- > 0;) stride[a] = stride[a + 1] * g.shape[a + 1];
    std::array<double, 2> range{kInf, -kInf};
    std::vector<std::size_t> idx(d, 0);
    const double h2 = g.h * g.h;
    for (std::size_t i = 0; i < g.size(); ++i) {
        for (std::size_t a = 0; a < d; ++a) {
            if (idx[a] >= 1 && idx[a] + 1 < g.shape[a]) {
                const double dd =
                    (g.values[i - stride[a]] - 2.0 * g.values[i] + g.values[i + stride[a]]) / h2;
                range[0] = std::min(range[0], dd);
                range[1] = std::max(range[1], dd);
            }
        }
        for (std::size_t a = d; a-- > 0;) {
            if (++idx[a] < g.shape[a]) break;
            idx[a] = 0;
        }
    }
    return range;
}

GridFunction moreau_inf(const GridFunction& f, double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("moreau_inf: lambda must be positive");
    GridFunction g = f;
    const std::size_t d = g.dim();
    const double w = g.h * g.h / (2.0 * lambda);
    std::vector<double> line, out;
    std::vector<int> hull;
    std::vector<double> cuts;
    std::vector<std::size_t> stride(d, 1);
    for (std::size_t a = d - 1; a-- > 0;) stride[a] = stride[a + 1] * g.shape[a + 1];
    for (std::size_t axis = 0; axis < d; ++axis) {
        const std::size_t n = g.shape[axis], st = stride[axis];
        const std::size_t lines = g.size() / n;
        line.resize(n);
        for (std::size_t l = 0; l < lines; ++l) {
            // flat index of the line's first element: expand l skipping `axis`
            std::size_t rest = l, start = 0;
            for (std::size_t a = d; a-- > 0;) {
                if (a == axis) continue;
                const std::size_t q = rest % g.shape[a];
                rest /= g.shape[a];
                start += q * stride[a];
            }
            for (std::size_t j = 0; j < n; ++j) line[j] = g.values[start + j * st];
            lower_envelope(line, w, out, hull, cuts);
            for (std::size_t j = 0; j < n; ++j) g.values[start + j * st] = out[j];
        }
    }
    return g;
}

GridFunction moreau_sup(const GridFunction& f, double mu) {
    if (!(mu > 0.0)) throw std::invalid_argument("moreau_sup: mu must be positive");
    GridFunction neg = f;
    for (double& v : neg.values) v = -v;
    GridFunction g = moreau_inf(neg, mu);
    for (double& v : g.values) v = -v;
    return g;
}

GridFunction lasry_lions(const GridFunction& f, const LasryParams& p) {
    check_params(p);
    return moreau_sup(moreau_inf(f, p.lambda), p.mu);
}

LasryParams lambda_schedule(double L, double eps, double lambda0) {
    if (!(L > 0.0 && eps > 0.0 && lambda0 > 0.0))
        throw std::invalid_argument("lambda_schedule: L, eps, lambda0 must be positive");
    LasryParams p;
    p.lambda0 = lambda0;
    p.lambda = std::min(lambda0, eps / (2.0 * L * L));
    p.mu = p.lambda / 2.0;
    return p;
}

Approximant hilbert_pipeline(const ScalarFn& f, double L, double eps, const IntervalBox& box,
                             double h, const SmoothingHook& hook) {
    const LasryParams p = lambda_schedule(L, eps);
    if (h > p.mu / 10.0)
        throw std::domain_error("hilbert_pipeline: grid too coarse for the curvature scale (h = " +
                                std::to_string(h) + " > mu/10 = " + std::to_string(p.mu / 10.0) +
                                ")");
    const GridFunction fg = GridFunction::sample(f, box, h);
    const GridFunction gg = lasry_lions(fg, p);
    ScalarFn surrogate = [gg](const Vec& x) { return grid_interpolate(gg, x); };

    Approximant out;
    if (hook) {
        out = hook(surrogate, L, box);
        out.claimed_sup_error += eps;
        return out;
    }
    out.evaluator = surrogate;
    out.claimed_lip = L + eps;
    out.claimed_sup_error = eps;
    out.valid_region.box = box;
    // node subsample certificate: |g - f| <= eps re-measured on <= 2048 nodes
    const std::size_t stride_n = std::max<std::size_t>(1, gg.size() / 2048);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < gg.size(); i += stride_n) {
        out.valid_region.probes.push_back(gg.point(i));
        const bool ok = std::abs(gg.values[i] - fg.values[i]) <= eps;
        out.valid_region.covered.push_back(ok ? 1 : 0);
        hits += ok;
    }
    out.valid_region.fraction = out.valid_region.probes.empty()
                                    ? 0.0
                                    : static_cast<double>(hits) /
                                          static_cast<double>(out.valid_region.probes.size());
    return out;
}

}  // namespace lipsmooth
