#include "lipsmooth/registry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "lipsmooth/rng.hpp"

namespace lipsmooth {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t sub_seed(std::uint64_t master, std::uint64_t k) {
    return splitmix64(master ^ splitmix64(k));
}

// f is convex for every default entry whose max over the box we need, so
// corner enumeration gives sound range bounds for d <= 3.
std::vector<Vec> box_corners(const IntervalBox& box) {
    const std::size_t d = box.dim();
    std::vector<Vec> out;
    for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
        Vec c(d);
        for (std::size_t a = 0; a < d; ++a) c[a] = ((mask >> a) & 1) ? box.hi[a] : box.lo[a];
        out.push_back(std::move(c));
    }
    return out;
}

Vec anchor_at(const IntervalBox& box, double frac) {
    Vec p(box.dim());
    for (std::size_t a = 0; a < p.size(); ++a)
        p[a] = box.lo[a] + frac * (box.hi[a] - box.lo[a]);
    return p;
}

double max_corner_dist(const IntervalBox& box, const Vec& p) {
    double m = 0.0;
    for (const Vec& c : box_corners(box)) m = std::max(m, dist2(c, p));
    return m;
}

}  // namespace

void verify_registry_entry(const RegistryFunction& fn, const IntervalBox& box,
                           std::uint64_t seed) {
    Rng rng(seed);
    const std::size_t d = box.dim();
    double step = kInf;
    for (std::size_t a = 0; a < d; ++a) step = std::min(step, box.hi[a] - box.lo[a]);
    step *= 1e-4;
    double worst = 0.0;
    for (int i = 0; i < 600; ++i) {
        const Vec x = rng.point_in(box);
        const Vec y = rng.point_in(box);
        const double dd = dist2(x, y);
        if (dd > 1e-12) worst = std::max(worst, std::abs(fn.evaluator(x) - fn.evaluator(y)) / dd);
    }
    for (int i = 0; i < 200; ++i) {
        const Vec x = rng.point_in(box);
        for (std::size_t a = 0; a < d; ++a) {
            Vec y = x;
            y[a] = std::clamp(x[a] + step, box.lo[a], box.hi[a]);
            const double dd = std::abs(y[a] - x[a]);
            if (dd > 1e-12)
                worst = std::max(worst, std::abs(fn.evaluator(x) - fn.evaluator(y)) / dd);
        }
    }
    if (worst > fn.exact_lip * (1.0 + 1e-9))
        throw std::logic_error("registry_lip_honest: sampled quotient " + std::to_string(worst) +
                               " exceeds exact_lip of '" + fn.name + "'");
}

std::vector<RegistryFunction> default_registry(const IntervalBox& box, std::uint64_t seed) {
    const std::size_t d = box.dim();
    std::vector<RegistryFunction> reg;

    {
        const Vec p = anchor_at(box, 0.65);
        reg.push_back({"dist_point", [p](const Vec& x) { return dist2(x, p); }, 1.0, 0.0,
                       max_corner_dist(box, p), "distance to an interior anchor point"});
    }
    {
        const std::vector<Vec> ps = {anchor_at(box, 0.2), anchor_at(box, 0.5),
                                     anchor_at(box, 0.85)};
        double hi = kInf;
        for (const Vec& p : ps) hi = std::min(hi, max_corner_dist(box, p));
        reg.push_back({"dist_set",
                       [ps](const Vec& x) {
                           double m = kInf;
                           for (const Vec& p : ps) m = std::min(m, dist2(x, p));
                           return m;
                       },
                       1.0, 0.0, hi, "distance to a three-point set"});
    }
    {
        double lo = -kInf, hi = -kInf;
        for (std::size_t a = 0; a < d; ++a) {
            lo = std::max(lo, box.lo[a]);
            hi = std::max(hi, box.hi[a]);
        }
        reg.push_back({"coord_max",
                       [](const Vec& x) { return *std::max_element(x.begin(), x.end()); }, 1.0,
                       lo, hi, "largest coordinate"});
    }
    {
        Vec nearest(d);
        for (std::size_t a = 0; a < d; ++a) nearest[a] = std::clamp(0.0, box.lo[a], box.hi[a]);
        reg.push_back({"norm", [](const Vec& x) { return norm2(x); }, 1.0, norm2(nearest),
                       max_corner_dist(box, Vec(d, 0.0)), "Euclidean norm"});
    }
    reg.push_back({"sawtooth",
                   [](const Vec& x) {
                       const double t = x[0] - std::floor(x[0]);
                       return std::min(t, 1.0 - t);
                   },
                   1.0, 0.0, 0.5, "unit-slope 1-periodic sawtooth of the first coordinate"});
    {
        Rng rng = (Rng::stream(seed, 17));
        std::vector<Vec> slopes;
        Vec offsets;
        double lip = 0.0, lo = -kInf, hi = -kInf;
        for (int k = 0; k < 6; ++k) {
            Vec a(d);
            for (std::size_t j = 0; j < d; ++j) a[j] = rng.uniform(-1.0, 1.0);
            const double b = rng.uniform(-1.0, 1.0);
            lip = std::max(lip, norm2(a));
            // min/max of an affine piece over the box sit at corners
            double plo = kInf, phi = -kInf;
            for (const Vec& c : box_corners(box)) {
                const double v = dot(a, c) + b;
                plo = std::min(plo, v);
                phi = std::max(phi, v);
            }
            lo = std::max(lo, plo);  // max_k min_x <= min_x max_k
            hi = std::max(hi, phi);
            slopes.push_back(std::move(a));
            offsets.push_back(b);
        }
        reg.push_back({"pwaffine",
                       [slopes, offsets](const Vec& x) {
                           double m = -kInf;
                           for (std::size_t k = 0; k < slopes.size(); ++k)
                               m = std::max(m, dot(slopes[k], x) + offsets[k]);
                           return m;
                       },
                       lip, lo, hi, "seeded max of six affine pieces"});
    }

    for (std::size_t i = 0; i < reg.size(); ++i)
        verify_registry_entry(reg[i], box, sub_seed(seed, 100 + i));
    return reg;
}

const RegistryFunction& registry_lookup(const std::vector<RegistryFunction>& reg,
                                        const std::string& name) {
    for (const RegistryFunction& fn : reg)
        if (fn.name == name) return fn;
    std::string known;
    for (const RegistryFunction& fn : reg) known += (known.empty() ? "" : ", ") + fn.name;
    throw std::invalid_argument("registry_name_known: '" + name + "' is not one of {" + known +
                                "}");
}

}  // namespace lipsmooth
