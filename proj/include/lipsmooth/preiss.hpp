#pragma once

#include <complex>

#include "lipsmooth/vec.hpp"

namespace lipsmooth {

using CD = std::complex<double>;

struct PreissSolveConfig {
    double abs_tol = 1e-12;  // residual tolerance on C(x/lambda) - 1
    int max_iter = 200;
};

// C(x) = sum_j x_j^{2j} (j counted from 1), compensated summation.
// Throws std::overflow_error when a term is not representable.
double preiss_C(const Vec& x);

// Complex continuation of C.
CD preiss_C_complex(const CVec& z);

// Minkowski functional of {C <= 1}: the unique lambda > 0 with
// C(x/lambda) = 1, solved by safeguarded Newton on the bracket
// [||x||_inf, 2 ||x||_inf].  lambda(0) = 0 by convention.
double preiss_norm(const Vec& x, const PreissSolveConfig& cfg = {});

// Complex root mu of sum_j (z_j/mu)^{2j} = 1 by undamped Newton started at
// mu0 (normally the real norm of Re z).  Non-convergence throws
// std::runtime_error: the caller has left the uniform perturbation radius.
CD preiss_norm_complex(const CVec& z, double mu0, const PreissSolveConfig& cfg = {});

}  // namespace lipsmooth
