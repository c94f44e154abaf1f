#pragma once

#include <complex>

namespace lipsmooth {

using CD = std::complex<double>;

// Standard normal CDF / PDF (real argument), stable in both tails.
double Phi(double t);
double phi_pdf(double t);

// log(1 - Phi(c)) for any real c, stable far into the upper tail.
double log_Phi_tail(double c);

// Error function for complex argument, accurate on horizontal strips
// |Im z| <= 9 (absolute accuracy ~1e-15 relative to max(1, e^{y^2-x^2})).
CD erf_cx(CD z);

// erfc for complex argument with Re z >= 0, computed without the 1 - erf
// cancellation, so relative accuracy is preserved deep in the right tail.
CD erfc_cx(CD z);

// Normal CDF and PDF for complex argument (same strip restriction).
CD Phi_cx(CD z);
CD phi_pdf_cx(CD z);

// Complex number carried as u * e^{logmag} with |u| kept near 1, so that
// products and sums of terms spanning thousands of orders of magnitude stay
// representable.  logmag = -inf encodes exact zero.
struct ScaledComplex {
    double logmag;
    CD u;

    static ScaledComplex zero();
    static ScaledComplex one();
    static ScaledComplex from(CD v);
    static ScaledComplex from_log(double logmag, CD unit);

    bool is_zero() const;
    ScaledComplex normalized() const;

    // Value as a plain complex (may overflow to inf for logmag >~ 709).
    CD value() const;

    double abs_log() const;  // log |value|
};

ScaledComplex operator*(const ScaledComplex& a, const ScaledComplex& b);
ScaledComplex operator*(const ScaledComplex& a, CD c);
ScaledComplex operator+(const ScaledComplex& a, const ScaledComplex& b);
ScaledComplex conj(const ScaledComplex& a);

// Mass of the interval [lo, hi] under a Gaussian of width sigma centred at
// the complex point w:  Phi((hi-w)/sigma) - Phi((lo-w)/sigma), continued
// analytically in w.  Stable for arbitrarily large |Im w|/sigma; the result
// is returned in scaled form because its magnitude grows like
// e^{(Im w)^2 / (2 sigma^2)}.  Intended for wide intervals (hi-lo >> sigma);
// for narrow intervals far from Re w the relative accuracy of the
// same-side-difference branch degrades gracefully.
ScaledComplex cnorm_interval(double lo, double hi, CD w, double sigma);

// Real-argument version of the same mass, stable in both tails.
double norm_interval(double lo, double hi, double x, double sigma);

}  // namespace lipsmooth
