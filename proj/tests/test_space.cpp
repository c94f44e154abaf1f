#include <cmath>
#include <complex>

#include "doctest.h"
#include "lipsmooth/rng.hpp"
#include "lipsmooth/space.hpp"

using namespace lipsmooth;

namespace {

Vec random_vec(Rng& rng, std::size_t d, double scale) {
    Vec x(d);
    for (double& v : x) v = scale * (2.0 * rng.uniform() - 1.0);
    return x;
}

// 1D golden-section minimizer (unimodal objective), used as an independent
// oracle for the closed-form interior minimum.
double golden_min(const std::function<double(double)>& f, double a, double b) {
    const double g = 0.618033988749894848;
    double c = b - g * (b - a), d = a + g * (b - a);
    for (int i = 0; i < 200; ++i) {
        if (f(c) < f(d)) {
            b = d;
        } else {
            a = c;
        }
        c = b - g * (b - a);
        d = a + g * (b - a);
    }
    return 0.5 * (a + b);
}

}  // namespace

TEST_CASE("separating polynomial basics and homogeneity") {
    for (int n : {1, 3}) {
        auto p = SeparatingPolynomial::euclidean(n);
        CHECK(p.q(Vec{0.0, 0.0}) == 0.0);
        Rng rng = Rng::stream(42, 1);
        for (int i = 0; i < 100; ++i) {
            Vec x = random_vec(rng, 3, 5.0);
            double t = 0.1 + 3.0 * rng.uniform();
            double lhs = p.q(t * x);
            double rhs = std::pow(t, 2.0 * n) * p.q(x);
            CHECK(std::abs(lhs - rhs) <= 1e-10 * (1.0 + std::abs(lhs)));
        }
    }
    auto p1 = SeparatingPolynomial::euclidean(1);
    CHECK(p1.q(Vec{3.0, 4.0}) == doctest::Approx(25.0).epsilon(1e-15));
}

TEST_CASE("polynomial sandwich between norm powers") {
    for (int n : {1, 2}) {
        auto p = SeparatingPolynomial::euclidean(n);
        Rng rng = Rng::stream(42, 2);
        for (int i = 0; i < 1000; ++i) {
            Vec x = random_vec(rng, 4, 10.0);
            double nx = norm2(x);
            double q = p.q(x);
            double low = std::pow(nx, 2.0 * n), high = p.K * std::pow(nx, 2.0 * n);
            CHECK(q >= low * (1.0 - 1e-12));
            CHECK(q <= high * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("separating function values and separation property") {
    auto sf = SeparatingFunction::euclidean(1);
    CHECK(sf.Q(Vec{0.0, 0.0}) == 0.0);
    CHECK(sf.Q(Vec{3.0, 4.0}) == doctest::Approx(std::sqrt(26.0) - 1.0).epsilon(1e-15));
    CHECK(sf.lip() == doctest::Approx(1.0));

    Rng rng = Rng::stream(42, 3);
    for (double r : {1.0, 2.0, 5.0}) {
        for (int i = 0; i < 1000; ++i) {
            // random direction, radius >= 8r
            Vec dir = random_vec(rng, 3, 1.0);
            double nd = norm2(dir);
            if (nd < 1e-9) continue;
            double radius = 8.0 * r * (1.0 + rng.uniform());
            Vec x = (radius / nd) * dir;
            CHECK(sf.Q(x) >= 4.0 * r);
        }
    }
    // contrapositive on sampled points: Q < 4 implies ||x|| < 8
    for (int i = 0; i < 2000; ++i) {
        Vec x = random_vec(rng, 3, 12.0);
        if (sf.Q(x) < 4.0) CHECK(norm2(x) < 8.0);
    }
}

TEST_CASE("monotone along rays") {
    auto sf = SeparatingFunction::euclidean(2);
    Rng rng = Rng::stream(42, 4);
    for (int i = 0; i < 200; ++i) {
        Vec dir = random_vec(rng, 3, 1.0);
        double t1 = 5.0 * rng.uniform(), t2 = t1 + 5.0 * rng.uniform();
        CHECK(sf.Q(t1 * dir) <= sf.Q(t2 * dir) + 1e-15);
    }
}

TEST_CASE("strip margin closed form matches 1d search") {
    CHECK(strip_alpha(1) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    auto sf1 = SeparatingFunction::euclidean(1);
    CHECK(sf1.strip_margin() == doctest::Approx(1.0 / 6.0).epsilon(1e-14));

    for (int n : {1, 2, 5}) {
        auto obj = [n](double t) {
            return (0.5 + std::pow(t, 2.0 * n)) / std::pow(1.0 + t, 2.0 * n);
        };
        double t_star = golden_min(obj, 0.0, 10.0);
        CHECK(strip_alpha(n) == doctest::Approx(obj(t_star)).epsilon(1e-10));
        auto sf = SeparatingFunction::euclidean(n);
        CHECK(sf.strip_margin() <= 0.5);
        CHECK(sf.strip_margin() > 0.0);
    }
    // n=1 stationary point sits at t = 1/2
    auto obj1 = [](double t) { return (0.5 + t * t) / ((1.0 + t) * (1.0 + t)); };
    CHECK(golden_min(obj1, 0.0, 10.0) == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("complex continuation: real restriction, strip bound, rejection") {
    for (int n : {1, 2}) {
        auto sf = SeparatingFunction::euclidean(n);
        double delta = sf.strip_margin();
        Rng rng = Rng::stream(42, 5 + n);

        for (int i = 0; i < 500; ++i) {
            Vec x = random_vec(rng, 3, 8.0);
            CD qr = sf.Q_complex({x, Vec(3, 0.0)});
            CHECK(std::abs(qr.imag()) <= 1e-14 * (1.0 + std::abs(qr.real())));
            CHECK(std::abs(qr.real() - sf.Q(x)) <= 1e-12 * (1.0 + sf.Q(x)));
        }

        for (int i = 0; i < 1000; ++i) {
            Vec x = random_vec(rng, 3, 10.0);
            Vec y = random_vec(rng, 3, 1.0);
            double ny = norm2(y);
            if (ny < 1e-12) continue;
            double target = delta * 0.999 * rng.uniform();
            y = (target / ny) * y;
            // direct check of the guaranteed real-part lower bound
            CVec w(3);
            for (int j = 0; j < 3; ++j) w[j] = CD{x[j], y[j]};
            CD oq = CD{1.0, 0.0} + sf.polynomial().q_cx(w);
            CHECK(oq.real() >= 0.5 - 1e-12);
            // continuation evaluates without throwing
            CHECK(std::isfinite(std::abs(sf.Q_complex({x, y}))));
        }

        Vec bad(3, 0.0);
        bad[0] = delta * 1.0001;
        CHECK_THROWS_AS((void)sf.Q_complex({Vec(3, 0.0), bad}), std::domain_error);
    }
}

TEST_CASE("strip lipschitz bound dominates sampled difference quotients") {
    for (int n : {1, 2}) {
        auto sf = SeparatingFunction::euclidean(n);
        double delta = sf.strip_margin();
        Rng rng = Rng::stream(42, 8 + n);
        double worst = 0.0;
        for (int i = 0; i < 2000; ++i) {
            Vec x1 = random_vec(rng, 2, 10.0), x2 = random_vec(rng, 2, 10.0);
            Vec y1 = random_vec(rng, 2, 1.0), y2 = random_vec(rng, 2, 1.0);
            for (Vec* y : {&y1, &y2}) {
                double ny = norm2(*y);
                if (ny > 1e-12) *y = (delta * 0.995 * rng.uniform() / ny) * (*y);
            }
            CD v1 = sf.Q_complex({x1, y1}), v2 = sf.Q_complex({x2, y2});
            double dist = complexification_norm({x1 - x2, y1 - y2});
            if (dist < 1e-9) continue;
            worst = std::max(worst, std::abs(v1 - v2) / dist);
        }
        CHECK(worst <= sf.lip_strip() * (1.0 + 1e-9));
        CHECK(sf.lip_strip() >= sf.lip());
    }
}

TEST_CASE("complexification norm closed form against theta sweep") {
    // exact special cases
    Vec x{3.0, 0.0, 0.0}, zero(3, 0.0);
    CHECK(complexification_norm({x, zero}) == doctest::Approx(3.0).epsilon(1e-15));
    Vec ex{2.0, 0.0, 0.0}, ey{0.0, 2.0, 0.0};
    CHECK(complexification_norm({ex, ey}) == doctest::Approx(2.0).epsilon(1e-14));

    Rng rng = Rng::stream(42, 11);
    for (int i = 0; i < 50; ++i) {
        Vec a = random_vec(rng, 3, 5.0), b = random_vec(rng, 3, 5.0);
        auto g = [&](double th) { return norm2(std::cos(th) * a - std::sin(th) * b); };
        // 1e4-point sweep brackets the max; golden refinement of the winning
        // bracket removes the O(dtheta^2) grid bias.
        const double two_pi = 2.0 * 3.14159265358979323846;
        double best = 0.0;
        int best_k = 0;
        for (int k = 0; k < 10000; ++k) {
            double v = g(two_pi * k / 10000.0);
            if (v > best) {
                best = v;
                best_k = k;
            }
        }
        double lo = two_pi * (best_k - 1) / 10000.0, hi = two_pi * (best_k + 1) / 10000.0;
        double th_star = golden_min([&](double t) { return -g(t); }, lo, hi);
        double sweep = std::max(best, g(th_star));
        double cf = complexification_norm({a, b});
        CHECK(cf == doctest::Approx(sweep).epsilon(1e-8));
        CHECK(cf >= std::max(norm2(a), norm2(b)) - 1e-12);
    }
}

TEST_CASE("point sequence enumerates nested dyadic levels deterministically") {
    SpaceConfig cfg;
    cfg.dimension = 2;
    cfg.box = IntervalBox::cube(2, -5.0, 5.0);

    auto one = point_sequence(cfg, 1);
    REQUIRE(one.size() == 1);
    CHECK(one[0][0] == doctest::Approx(0.0));
    CHECK(one[0][1] == doctest::Approx(0.0));

    auto pts = point_sequence(cfg, 121);
    REQUIRE(pts.size() == 121);
    // level 1 starts right after the center, row-major, last coordinate fastest
    CHECK(pts[1][0] == doctest::Approx(-2.5));
    CHECK(pts[1][1] == doctest::Approx(-2.5));
    CHECK(pts[2][0] == doctest::Approx(-2.5));
    CHECK(pts[2][1] == doctest::Approx(2.5));
    CHECK(pts[3][0] == doctest::Approx(2.5));
    CHECK(pts[3][1] == doctest::Approx(-2.5));

    auto again = point_sequence(cfg, 121);
    CHECK(pts == again);

    // levels 0..3 complete within 121 points: 1 + 4 + 16 + 64 = 85
    auto sf = SeparatingFunction::euclidean(1);
    double rad = coverage_radius(cfg, sf, 121);
    CHECK(rad == doctest::Approx(std::sqrt(2.0) * 0.625).epsilon(1e-12));
    CHECK(rad < 1.0);

    // certified covering: random box points are within rad of the first 85
    Rng rng = Rng::stream(42, 12);
    for (int i = 0; i < 2000; ++i) {
        Vec x = rng.point_in(cfg.box);
        double best = 1e300;
        for (const Vec& p : pts) best = std::min(best, sf.Q(x - p));
        CHECK(best <= rad + 1e-12);
    }

    CHECK_THROWS_AS(point_sequence(cfg, 0), std::invalid_argument);
}

TEST_CASE("q-body membership") {
    auto sf = SeparatingFunction::euclidean(1);
    Vec c{1.0, -2.0};
    CHECK(q_body_contains(sf, c, 0.5, c));
    Vec far{1.0 + 8.0, -2.0};
    CHECK(!q_body_contains(sf, c, 4.0, far));
    // monotone in r
    Vec x{2.0, 0.0};
    CHECK((!q_body_contains(sf, c, 0.7, x) || q_body_contains(sf, c, 1.5, x)));
    CHECK_THROWS_AS(q_body_contains(sf, c, -1.0, x), std::invalid_argument);
}
