#include "lipsmooth/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "lipsmooth/rng.hpp"

namespace lipsmooth {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Lattice with n_a = round(width/h) + 1 nodes per axis (at least 2), visited
// in odometer order; calls visit(point) at every node.
template <typename Visit>
void for_lattice(const IntervalBox& region, double grid_h, Visit&& visit) {
    const std::size_t d = region.dim();
    std::vector<std::size_t> n(d), idx(d, 0);
    std::vector<double> step(d);
    std::size_t total = 1;
    for (std::size_t a = 0; a < d; ++a) {
        const double width = region.hi[a] - region.lo[a];
        n[a] = std::max<std::size_t>(2, static_cast<std::size_t>(std::llround(width / grid_h)) + 1);
        step[a] = width / static_cast<double>(n[a] - 1);
        total *= n[a];
    }
    Vec x(d);
    for (std::size_t i = 0; i < total; ++i) {
        for (std::size_t a = 0; a < d; ++a)
            x[a] = region.lo[a] + static_cast<double>(idx[a]) * step[a];
        visit(x);
        for (std::size_t a = d; a-- > 0;) {
            if (++idx[a] < n[a]) break;
            idx[a] = 0;
        }
    }
}

}  // namespace

double empirical_lipschitz(const ScalarFn& g, const IntervalBox& region, int samples,
                           std::uint64_t seed) {
    if (samples < 2) throw std::invalid_argument("samples_at_least_two: empirical_lipschitz");
    const std::size_t d = region.dim();
    Rng rng(seed);
    double worst = 0.0;
    auto quotient = [&](const Vec& x, const Vec& y) {
        const double dd = dist2(x, y);
        if (dd > 1e-12) worst = std::max(worst, std::abs(g(x) - g(y)) / dd);
    };

    double min_width = kInf;
    for (std::size_t a = 0; a < d; ++a) min_width = std::min(min_width, region.hi[a] - region.lo[a]);

    auto step_toward = [&](const Vec& x, const Vec& u) {
        const double nn = norm2(u);
        if (nn < 1e-12) return;
        Vec y = x;
        for (std::size_t a = 0; a < d; ++a)
            y[a] = std::clamp(x[a] + 1e-3 * min_width * u[a] / nn, region.lo[a], region.hi[a]);
        quotient(x, y);
    };

    for (int i = 0; i < samples / 2; ++i) quotient(rng.point_in(region), rng.point_in(region));
    for (int i = 0; i < samples / 4; ++i) {
        const Vec x = rng.point_in(region);
        Vec u(d);
        for (std::size_t a = 0; a < d; ++a) u[a] = rng.normal();
        step_toward(x, u);
    }
    // steepest-direction pairs: step along the finite-difference gradient,
    // which recovers the constant of smooth g (and exactly of affine g)
    const double fd = 1e-5 * min_width;
    for (int i = 0; i < samples / 4; ++i) {
        const Vec x = rng.point_in(region);
        Vec grad(d);
        for (std::size_t a = 0; a < d; ++a) {
            Vec up = x, dn = x;
            up[a] = std::clamp(x[a] + fd, region.lo[a], region.hi[a]);
            dn[a] = std::clamp(x[a] - fd, region.lo[a], region.hi[a]);
            const double dd = up[a] - dn[a];
            grad[a] = dd > 1e-12 ? (g(up) - g(dn)) / dd : 0.0;
        }
        step_toward(x, grad);
    }

    // axis-neighbor quotients on a lattice of about `samples` nodes
    const std::size_t per_axis = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::floor(std::pow(static_cast<double>(samples), 1.0 / d))), 2,
        101);
    const double lattice_h = min_width / static_cast<double>(per_axis - 1);
    std::vector<Vec> nodes;
    for_lattice(region, lattice_h, [&](const Vec& x) { nodes.push_back(x); });
    for (const Vec& x : nodes)
        for (std::size_t a = 0; a < d; ++a) {
            Vec y = x;
            y[a] = std::min(x[a] + lattice_h, region.hi[a]);
            quotient(x, y);
        }
    return worst;
}

double sup_error(const ScalarFn& f, const ScalarFn& g, const IntervalBox& region, double grid_h) {
    if (!(grid_h > 0.0)) throw std::invalid_argument("grid_h_positive: sup_error");
    double worst = 0.0;
    for_lattice(region, grid_h,
                [&](const Vec& x) { worst = std::max(worst, std::abs(f(x) - g(x))); });
    return worst;
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void write_metrics_csv(const std::string& path, const std::vector<MetricRow>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "stage,metric,value,bound,pass\n";
    for (const MetricRow& r : rows)
        out << r.stage << ',' << r.metric << ',' << format_double(r.value) << ','
            << format_double(r.bound) << ',' << (r.pass ? "true" : "false") << '\n';
}

}  // namespace lipsmooth
