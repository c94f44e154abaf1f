#pragma once

#include <cmath>
#include <complex>

#include "lipsmooth/cerf.hpp"

namespace lipsmooth {

// Saturated complex normal CDF/pdf: far out on the real axis (with the small
// imaginary offsets used throughout) the exact values are 0/1 to far below
// any budget, and saturating avoids feeding huge arguments to the series.
inline CD Phi_clipped(CD w) {
    if (w.real() > 12.0) return CD(1.0);
    if (w.real() < -12.0) return CD(0.0);
    return Phi_cx(w);
}
inline CD phi_pdf_clipped(CD w) {
    if (std::abs(w.real()) > 12.0) return CD(0.0);
    return phi_pdf_cx(w);
}

// Smoothed hinge: E[(u + sigma Z)^+] for standard normal Z — the exact
// Gaussian mollification of the positive part, entire in u.
inline double smoothed_hinge(double u, double sigma) {
    return u * Phi(u / sigma) + sigma * phi_pdf(u / sigma);
}
inline CD smoothed_hinge_complex(CD u, double sigma) {
    return u * Phi_clipped(u / sigma) + sigma * phi_pdf_clipped(u / sigma);
}

}  // namespace lipsmooth
