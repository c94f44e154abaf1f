#include "lipsmooth/lasry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "lipsmooth/rng.hpp"
#include "lipsmooth/tube.hpp"

using namespace lipsmooth;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

const GridFunction& abs_grid() {
    static const GridFunction g = GridFunction::sample(
        [](const Vec& x) { return std::abs(x[0]); }, IntervalBox::cube(1, -2.0, 2.0), 1e-3);
    return g;
}

std::size_t node_of(const GridFunction& g, double x) {
    return static_cast<std::size_t>(std::llround((x - g.box.lo[0]) / g.h));
}

GridFunction brute_inf(const GridFunction& f, double lambda) {
    GridFunction g = f;
    const double w = f.h * f.h / (2.0 * lambda);
    for (std::size_t j = 0; j < f.size(); ++j) {
        double best = f.values[0] + w * static_cast<double>(j) * static_cast<double>(j);
        for (std::size_t i = 1; i < f.size(); ++i) {
            const double d = static_cast<double>(j) - static_cast<double>(i);
            best = std::min(best, f.values[i] + w * d * d);
        }
        g.values[j] = best;
    }
    return g;
}

}  // namespace

TEST_CASE("quadratic envelope scan matches brute force and the Huber oracle") {
    const GridFunction& f = abs_grid();
    const GridFunction fl = moreau_inf(f, 0.2);
    CHECK(fl.values[node_of(f, 0.1)] == doctest::Approx(0.025).epsilon(1e-9));
    CHECK(fl.values[node_of(f, 1.0)] == doctest::Approx(0.9).epsilon(1e-9));
    CHECK(fl.values[node_of(f, -0.1)] == doctest::Approx(0.025).epsilon(1e-9));

    // the scan equals the O(N^2) double loop on a 101-point grid
    const GridFunction small = GridFunction::sample(
        [](const Vec& x) { return std::abs(x[0]); }, IntervalBox::cube(1, -2.0, 2.0), 0.04);
    const GridFunction fast = moreau_inf(small, 0.2);
    const GridFunction slow = brute_inf(small, 0.2);
    for (std::size_t i = 0; i < small.size(); ++i)
        CHECK(std::abs(fast.values[i] - slow.values[i]) <= 1e-12);

    // separability: the axis-by-axis scan equals the full 2D minimization
    Rng rng(60);
    GridFunction r2 = GridFunction::sample([](const Vec&) { return 0.0; },
                                           IntervalBox::cube(2, -1.0, 1.0), 0.1);
    for (double& v : r2.values) v = rng.uniform(-1.0, 1.0);
    const GridFunction fast2 = moreau_inf(r2, 0.37);
    const double w2 = 0.1 * 0.1 / (2.0 * 0.37);
    const std::size_t n = r2.shape[0];
    for (std::size_t j1 = 0; j1 < n; j1 += 3)
        for (std::size_t j2 = 0; j2 < n; j2 += 3) {
            double best = 1e300;
            for (std::size_t i1 = 0; i1 < n; ++i1)
                for (std::size_t i2 = 0; i2 < n; ++i2) {
                    const double d1 = static_cast<double>(j1) - static_cast<double>(i1);
                    const double d2 = static_cast<double>(j2) - static_cast<double>(i2);
                    best = std::min(best, r2.values[i1 * n + i2] + w2 * (d1 * d1 + d2 * d2));
                }
            CHECK(std::abs(best - fast2.values[j1 * n + j2]) <= 1e-12);
        }

    GridFunction c = f;
    for (double& v : c.values) v = 3.25;
    const GridFunction cl = moreau_inf(c, 0.2);
    for (std::size_t i = 0; i < cl.size(); i += 97) CHECK(cl.values[i] == 3.25);

    CHECK_THROWS_AS(moreau_inf(f, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(moreau_sup(f, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(
        GridFunction::sample([](const Vec&) { return 0.0; }, IntervalBox::cube(1, 0.0, 1.0), 0.3),
        std::invalid_argument);
}

TEST_CASE("sup transform is the negation dual and the envelopes bracket f") {
    const GridFunction& f = abs_grid();
    const GridFunction fs = moreau_sup(f, 0.1);
    GridFunction neg = f;
    for (double& v : neg.values) v = -v;
    const GridFunction dual = moreau_inf(neg, 0.1);
    const GridFunction negabs_sup = moreau_sup(neg, 0.1);
    const GridFunction abs_inf = moreau_inf(f, 0.1);
    const GridFunction fl = moreau_inf(f, 0.2);
    for (std::size_t i = 0; i < f.size(); i += 13) {
        CHECK(std::abs(fs.values[i] + dual.values[i]) <= 1e-14);
        // f = -|x|: the sup transform is minus the inf transform of |x|
        CHECK(std::abs(negabs_sup.values[i] + abs_inf.values[i]) <= 1e-14);
        // order: f_lambda <= f <= f^mu
        CHECK(fl.values[i] <= f.values[i] + 1e-12);
        CHECK(f.values[i] <= fs.values[i] + 1e-12);
    }
}

TEST_CASE("regularized surrogate keeps the Lipschitz constant and bounds curvature") {
    const GridFunction& f = abs_grid();
    LasryParams p;
    p.lambda = 0.2;
    p.mu = 0.1;
    const GridFunction g = lasry_lions(f, p);

    CHECK(grid_lip_quotient(g) <= 1.0 + 1e-9);
    CHECK(grid_lip_quotient(moreau_inf(f, 0.2)) <= 1.0 + 1e-9);
    CHECK(grid_lip_quotient(moreau_sup(f, 0.1)) <= 1.0 + 1e-9);

    const auto curv = grid_curvature_range(g);
    CHECK(curv[0] >= -1.0 / p.mu * (1.0 + 1e-3));
    CHECK(curv[1] <= 1.0 / (p.lambda - p.mu) * (1.0 + 1e-3));

    double worst = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
        worst = std::max(worst, std::abs(g.values[i] - f.values[i]));
    CHECK(worst <= (p.lambda + p.mu) * 1.0 * 1.0 / 2.0);

    GridFunction c = f;
    for (double& v : c.values) v = -1.5;
    const GridFunction gc = lasry_lions(c, p);
    for (std::size_t i = 0; i < gc.size(); i += 101) CHECK(gc.values[i] == -1.5);

    LasryParams bad;
    bad.lambda = 0.1;
    bad.mu = 0.2;
    CHECK_THROWS_AS(lasry_lions(f, bad), std::invalid_argument);
    bad.lambda = 2.0;
    bad.mu = 0.5;
    bad.lambda0 = 1.0;
    CHECK_THROWS_AS(lasry_lions(f, bad), std::invalid_argument);
}

TEST_CASE("full regularization matches the double brute-force transform") {
    const GridFunction f = GridFunction::sample(
        [](const Vec& x) { return std::abs(x[0]); }, IntervalBox::cube(1, -2.0, 2.0), 0.01);
    LasryParams p;
    p.lambda = 0.2;
    p.mu = 0.1;
    const GridFunction fast = lasry_lions(f, p);

    const GridFunction slow_inf = brute_inf(f, p.lambda);
    GridFunction neg = slow_inf;
    for (double& v : neg.values) v = -v;
    GridFunction slow = brute_inf(neg, p.mu);
    for (double& v : slow.values) v = -v;

    for (double x : {0.0, 0.05, -0.05, 1.0, -1.0})
        CHECK(std::abs(fast.values[node_of(f, x)] - slow.values[node_of(f, x)]) <= 1e-10);
}

TEST_CASE("lambda schedule hits the printed values and the eps/2 error budget") {
    const LasryParams p = lambda_schedule(1.0, 0.1);
    CHECK(p.lambda == doctest::Approx(0.05).epsilon(1e-15));
    CHECK(p.mu == doctest::Approx(0.025).epsilon(1e-15));
    CHECK(lambda_schedule(2.0, 0.1).lambda < p.lambda);
    CHECK(lambda_schedule(0.1, 1.0, 1.0).lambda == 1.0);  // ceiling binds
    CHECK_THROWS_AS(lambda_schedule(0.0, 0.1), std::invalid_argument);

    const std::vector<ScalarFn> fns = {
        [](const Vec& x) { return std::abs(x[0]); },
        [](const Vec& x) {  // unit-slope sawtooth
            const double t = x[0] - std::floor(x[0]);
            return std::min(t, 1.0 - t);
        }};
    for (const ScalarFn& fn : fns) {
        const GridFunction f = GridFunction::sample(fn, IntervalBox::cube(1, -1.0, 1.0), 0.002);
        const GridFunction g = lasry_lions(f, p);
        double worst = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i)
            worst = std::max(worst, std::abs(g.values[i] - f.values[i]));
        CHECK(worst <= 0.1 / 2.0);
    }
}

TEST_CASE("surrogate error is monotone as lambda halves") {
    const std::vector<ScalarFn> fns = {
        [](const Vec& x) { return std::abs(x[0]); },
        [](const Vec& x) {
            const double t = x[0] - std::floor(x[0]);
            return std::min(t, 1.0 - t);
        }};
    for (const ScalarFn& fn : fns) {
        const GridFunction f = GridFunction::sample(fn, IntervalBox::cube(1, -1.0, 1.0), 0.001);
        double prev = kInf;
        double lambda = 0.2;
        for (int step = 0; step < 4; ++step, lambda /= 2.0) {
            LasryParams p;
            p.lambda = lambda;
            p.mu = lambda / 2.0;
            const GridFunction g = lasry_lions(f, p);
            double worst = 0.0;
            for (std::size_t i = 0; i < f.size(); ++i)
                worst = std::max(worst, std::abs(g.values[i] - f.values[i]));
            CHECK(worst <= prev + 1e-12);
            prev = worst;
        }
    }
}

TEST_CASE("hilbert pipeline certifies the end-to-end bounds on the box grid") {
    const ScalarFn f = [](const Vec& x) { return dist2(x, Vec{0.3, -0.4}); };
    const IntervalBox box = IntervalBox::cube(2, -2.0, 2.0);
    const Approximant a = hilbert_pipeline(f, 1.0, 0.1, box, 0.0025);
    CHECK(a.claimed_sup_error == 0.1);
    CHECK(a.claimed_lip == doctest::Approx(1.1).epsilon(1e-15));
    CHECK(a.valid_region.fraction == 1.0);

    Rng rng(61);
    double worst = 0.0, worst_q = 0.0;
    for (int i = 0; i < 400; ++i) {
        const Vec x = rng.point_in(box);
        worst = std::max(worst, std::abs(a.evaluator(x) - f(x)));
        Vec y = x;
        for (int j = 0; j < 2; ++j) y[j] = std::clamp(y[j] + rng.uniform(-0.2, 0.2), -2.0, 2.0);
        const double dd = dist2(x, y);
        if (dd > 0.05)
            worst_q = std::max(worst_q, std::abs(a.evaluator(x) - a.evaluator(y)) / dd);
    }
    CHECK(worst <= 0.1);
    CHECK(worst_q <= 1.0 + 0.1);

    // constants survive the whole pipeline exactly
    const Approximant ac =
        hilbert_pipeline([](const Vec&) { return 0.75; }, 1.0, 0.1, box, 0.0025);
    for (int i = 0; i < 50; ++i) CHECK(ac.evaluator(rng.point_in(box)) == 0.75);

    CHECK_THROWS_AS(hilbert_pipeline(f, 1.0, 0.1, box, 0.01), std::domain_error);
}

TEST_CASE("plugged smoothing hook inherits the gluing bounds") {
    const ScalarFn f = [](const Vec& x) { return dist2(x, Vec{0.2, 0.1}); };
    const IntervalBox box = IntervalBox::cube(2, -1.0, 1.0);
    const double eps = 0.5;

    SmoothingHook hook = [](const ScalarFn& surrogate, double lip, const IntervalBox& bx) {
        // range the surrogate on a coarse grid, shift to [0, N], slab, glue
        const GridFunction coarse = GridFunction::sample(surrogate, bx, 0.125);
        double lo = kInf, hi = -kInf;
        for (double v : coarse.values) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        const int N = static_cast<int>(std::ceil(hi - lo + 0.1));
        ScalarFn shifted = [surrogate, lo](const Vec& x) { return surrogate(x) - lo; };
        const SlabDecomposition slabs = slab_decompose(shifted, N);
        std::vector<Approximant> comps;
        for (const auto& c : slabs.components) {
            Approximant s;
            s.evaluator = c;
            s.claimed_lip = lip;
            comps.push_back(s);
        }
        const TubeMapConfig cfg = TubeMapConfig::make(0.5, N);
        Rng rng(62);
        std::vector<Vec> probes;
        for (int i = 0; i < 40; ++i) probes.push_back(rng.point_in(bx));
        Approximant glued = glue_bounded(comps, cfg, bx, probes);
        const ScalarFn inner = glued.evaluator;
        glued.evaluator = [inner, lo](const Vec& x) { return inner(x) + lo; };
        return glued;
    };

    const Approximant a = hilbert_pipeline(f, 1.0, eps, box, 0.0125, hook);
    // glue claim (1 + 0.5) * L plus the surrogate's eps on the error side
    CHECK(a.claimed_lip == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(a.claimed_sup_error == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(a.claimed_lip <= (1.0 + eps) * (1.0 + eps) * 1.0);
    CHECK(a.valid_region.fraction == 1.0);

    Rng rng(63);
    double worst = 0.0, worst_q = 0.0;
    for (int i = 0; i < 120; ++i) {
        const Vec x = rng.point_in(box);
        worst = std::max(worst, std::abs(a.evaluator(x) - f(x)));
        Vec y = x;
        for (int j = 0; j < 2; ++j) y[j] = std::clamp(y[j] + rng.uniform(-0.3, 0.3), -1.0, 1.0);
        const double dd = dist2(x, y);
        if (dd > 0.05)
            worst_q = std::max(worst_q, std::abs(a.evaluator(x) - a.evaluator(y)) / dd);
    }
    CHECK(worst <= a.claimed_sup_error);
    CHECK(worst_q <= (1.0 + eps) * (1.0 + eps) * 1.05);
}
