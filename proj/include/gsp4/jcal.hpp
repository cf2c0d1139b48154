#pragma once

// The matrix-argument Bessel kernel and the eigenvalue data it is evaluated on.

#include "gsp4/arith.hpp"
#include "gsp4/bessel.hpp"

namespace gsp4 {

// int_0^{pi/2} J_l(4 pi s1 sin t) J_l(4 pi s2 sin t) sin t dt.
double jcal(BesselOrder ell, double s1, double s2);

// Upper bound for |jcal| from the Bessel majorants (no quadrature).
double jcal_majorant(BesselOrder ell, double s1, double s2);

// Square roots s1 <= s2 of the eigenvalues of T C^-1 Q C^-T.
struct EigenPair {
  double s1 = 0.0;
  double s2 = 0.0;
};

// Exact invariants of T C^-1 Q C^-T: trace = trace4 / (4 D^2) and
// determinant = disc(T) disc(Q) / (16 D^2), with D = |det C|.
struct EigenData {
  Int D = 1;
  Int trace4 = 0;
};

EigenData eigen_data(const HalfIntegralForm& t, const HalfIntegralForm& q, const IntMatrix2& c);
EigenPair eigen_pair(const HalfIntegralForm& t, const HalfIntegralForm& q, const IntMatrix2& c);
EigenPair eigen_pair(const HalfIntegralForm& t, const HalfIntegralForm& q, const EigenData& d);
// From trace and determinant of a matrix with positive real eigenvalues.
EigenPair eigen_pair(double trace, double det);

}  // namespace gsp4
