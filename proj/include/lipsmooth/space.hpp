#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

#include "lipsmooth/box.hpp"
#include "lipsmooth/vec.hpp"

namespace lipsmooth {

using CD = std::complex<double>;

// Ambient space: R^d restricted to a working box, plus the homogeneity
// half-degree n of the separating polynomial.
struct SpaceConfig {
    std::size_t dimension = 2;
    IntervalBox box;
    int degree = 1;
};

// z = x + iy in the complexification of R^d.
struct ComplexPoint {
    Vec x;
    Vec y;
};

// Norm of x + iy induced by the Euclidean norm:
//   sup_theta || cos(theta) x - sin(theta) y ||,
// evaluated in closed form.
double complexification_norm(const ComplexPoint& z);

// 2n-homogeneous polynomial with ||x||^{2n} <= q(x) <= K ||x||^{2n}, together
// with its complex-argument evaluator and the norm of the generating
// symmetric multilinear form.
struct SeparatingPolynomial {
    int n = 1;
    double K = 1.0;
    double norm_A = 1.0;
    std::function<double(const Vec&)> q;
    std::function<CD(const CVec&)> q_cx;

    // q(x) = (sum x_i^2)^n: K = 1, ||A|| = 1.
    static SeparatingPolynomial euclidean(int n);
};

// Q(x) = (1 + q(x))^{1/2n} - 1 with its certified constants:
//  - lip():         Lipschitz constant of Q on the real space (= K^{1/2n});
//  - strip_margin() delta such that the complex continuation satisfies
//                   Re(1 + q~(x+iy)) >= 1/2 whenever ||y|| < delta;
//  - lip_strip():   Lipschitz bound of the continuation on that strip with
//                   respect to the complexification norm.
class SeparatingFunction {
  public:
    static SeparatingFunction make(SeparatingPolynomial poly);
    static SeparatingFunction euclidean(int n = 1);

    double Q(const Vec& x) const;

    // Complex continuation; throws std::domain_error when ||Im z|| >= strip_margin().
    CD Q_complex(const ComplexPoint& z) const;

    int degree() const { return poly_.n; }
    double equivalence_K() const { return poly_.K; }
    double alpha() const { return alpha_; }
    double strip_margin() const { return delta_q_; }
    double lip() const { return lip_q_; }
    double lip_strip() const { return lip_strip_; }
    const SeparatingPolynomial& polynomial() const { return poly_; }

  private:
    SeparatingPolynomial poly_;
    double alpha_ = 0.0;
    double delta_q_ = 0.0;
    double lip_q_ = 0.0;
    double lip_strip_ = 0.0;
};

// min over t >= 0 of (1/2 + t^{2n}) / (1 + t)^{2n}; interior minimum at
// t = 2^{-1/(2n-1)} in closed form.
double strip_alpha(int n);

// Deterministic enumeration of box points: nested dyadic refinement levels
// (level L has 2^{L d} cell centers), each level emitted in row-major order
// with the last coordinate fastest.  Prefixes are quasi-uniform covers.
std::vector<Vec> point_sequence(const SpaceConfig& cfg, std::size_t N);

// Q-metric covering radius certified by the deepest refinement level that the
// first N sequence points complete: every box point is within this Q-distance
// of some sequence point.
double coverage_radius(const SpaceConfig& cfg, const SeparatingFunction& sf, std::size_t N);

// Membership in the open Q-body {x : Q(x - center) < r}.
bool q_body_contains(const SeparatingFunction& sf, const Vec& center, double r, const Vec& x);

}  // namespace lipsmooth
