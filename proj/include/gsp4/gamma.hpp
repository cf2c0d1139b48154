#pragma once

// Log-gamma and digamma for real and complex arguments.

#include <complex>

namespace gsp4 {

using Complex = std::complex<double>;

// log Gamma(x) for x > 0.
double gamma_ln(double x);
// Gamma'/Gamma(x) for x > 0.
double digamma(double x);
// A branch of log Gamma(z) for Re z > 0; exp() of it is Gamma(z).
Complex gamma_ln(Complex z);

}  // namespace gsp4
