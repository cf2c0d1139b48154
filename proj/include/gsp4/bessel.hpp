#pragma once

// Bessel functions J_nu of integer and half-odd-integer order.

namespace gsp4 {

// The order nu stored as 2 nu.
struct BesselOrder {
  int two_nu = 1;

  BesselOrder() = default;
  explicit BesselOrder(int two_nu);
  double value() const { return 0.5 * two_nu; }
  bool half_odd() const { return two_nu % 2 != 0; }
  // l = k - 3/2.
  static BesselOrder ell(int k);
};

// J_nu(x), x >= 0.
double besselJ(BesselOrder nu, double x);
// Termwise series majorant (x/2)^nu exp(x^2/4) / Gamma(nu + 1).
double besselJ_tail_bound(BesselOrder nu, double x);
// min(1, (x/2)^nu / Gamma(nu + 1), 0.7858 x^(-1/3), 0.6749 nu^(-1/3)).
double besselJ_majorant(BesselOrder nu, double x);

}  // namespace gsp4
