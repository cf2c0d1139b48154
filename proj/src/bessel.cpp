#include "gsp4/bessel.hpp"

#include "gsp4/arith.hpp"
#include "gsp4/gamma.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace gsp4 {

BesselOrder::BesselOrder(int two_nu_) : two_nu(two_nu_) {
  if (two_nu < 0) throw DomainError("BesselOrder: order must be non-negative");
}

BesselOrder BesselOrder::ell(int k) {
  if (k < 6 || k % 2 != 0) throw DomainError("weight k must be even and at least 6");
  return BesselOrder(2 * k - 3);
}

namespace {

constexpr double kBig = 1e200;

double series(double nu, double x) {
  const double q = 0.25 * x * x;
  double term = 1.0, sum = 1.0;
  for (int m = 1; m < 500; ++m) {
    term *= -q / (m * (nu + m));
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return sum * std::exp(nu * std::log(0.5 * x) - gamma_ln(nu + 1.0));
}

int miller_start(double nu, double x) {
  const double top = std::max(nu, x);
  return static_cast<int>(top + 2.0 * std::sqrt(40.0 * top) + 40.0);
}

// Backward recurrence for half-odd orders, normalised against the closed forms
// of J_{1/2} and J_{-1/2}.
double miller_half(int n, double x) {
  // Orders are j + 1/2; n is the index j of the requested order.
  const int top = miller_start(n + 0.5, x);
  double fp = 0.0, f = 1e-300, saved = 0.0;
  for (int j = top; j >= 0; --j) {
    // f = f_{j+1/2}, fp = f_{j+3/2}; produce f_{j-1/2}.
    if (j == n) saved = f;
    const double fm = (2.0 * (j + 0.5) / x) * f - fp;
    fp = f;
    f = fm;
    if (std::abs(f) > kBig) {
      f /= kBig;
      fp /= kBig;
      saved /= kBig;
    }
  }
  // fp = f_{1/2}, f = f_{-1/2}.
  const double c = std::sqrt(2.0 / (std::numbers::pi * x));
  const double s = std::sin(x), co = std::cos(x);
  const double scale = std::abs(s) >= std::abs(co) ? c * s / fp : c * co / f;
  return saved * scale;
}

// Backward recurrence for integer orders with the Neumann normalisation
// 1 = J_0 + 2 sum J_{2m}.
double miller_int(int n, double x) {
  int top = miller_start(n, x);
  if (top % 2) ++top;
  double fp = 0.0, f = 1e-300, saved = 0.0, norm = 0.0;
  for (int j = top; j >= 1; --j) {
    // f = f_j, fp = f_{j+1}.
    if (j == n) saved = f;
    if (j % 2 == 0) norm += 2.0 * f;
    const double fm = (2.0 * j / x) * f - fp;
    fp = f;
    f = fm;
    if (std::abs(f) > kBig) {
      f /= kBig;
      fp /= kBig;
      saved /= kBig;
      norm /= kBig;
    }
  }
  if (n == 0) saved = f;
  norm += f;
  return saved / norm;
}

double forward_half(int n, double x) {
  const double c = std::sqrt(2.0 / (std::numbers::pi * x));
  double jm = c * std::cos(x), j = c * std::sin(x);
  for (int i = 0; i < n; ++i) {
    const double jp = (2.0 * (i + 0.5) / x) * j - jm;
    jm = j;
    j = jp;
  }
  return j;
}

}  // namespace

double besselJ(BesselOrder order, double x) {
  if (!(x >= 0)) throw DomainError("besselJ: argument must be non-negative");
  const double nu = order.value();
  if (x == 0.0) return order.two_nu == 0 ? 1.0 : 0.0;
  if (x * x <= 2.0 * (nu + 1.0)) return series(nu, x);
  if (order.half_odd()) {
    const int n = (order.two_nu - 1) / 2;
    return x < nu ? miller_half(n, x) : forward_half(n, x);
  }
  return miller_int(order.two_nu / 2, x);
}

double besselJ_tail_bound(BesselOrder order, double x) {
  if (!(x >= 0)) throw DomainError("besselJ_tail_bound: argument must be non-negative");
  const double nu = order.value();
  if (x == 0.0) return order.two_nu == 0 ? 1.0 : 0.0;
  const double lg = nu * std::log(0.5 * x) + 0.25 * x * x - gamma_ln(nu + 1.0);
  return lg > 700 ? std::numeric_limits<double>::infinity() : std::exp(lg);
}

double besselJ_majorant(BesselOrder order, double x) {
  if (!(x >= 0)) throw DomainError("besselJ_majorant: argument must be non-negative");
  const double nu = order.value();
  if (x == 0.0) return order.two_nu == 0 ? 1.0 : 0.0;
  double b = 1.0;
  b = std::min(b, std::exp(std::min(0.0, nu * std::log(0.5 * x) - gamma_ln(nu + 1.0))));
  b = std::min(b, 0.7858 * std::pow(x, -1.0 / 3.0));
  if (nu > 0) b = std::min(b, 0.6749 * std::pow(nu, -1.0 / 3.0));
  return b;
}

}  // namespace gsp4
