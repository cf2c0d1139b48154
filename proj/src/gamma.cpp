#include "gsp4/gamma.hpp"

#include "gsp4/arith.hpp"

#include <cmath>
#include <numbers>

namespace gsp4 {

namespace {

// B_{2j} / (2j (2j - 1)) for j = 1..8.
constexpr double kStirling[8] = {
    1.0 / 12.0,     -1.0 / 360.0,      1.0 / 1260.0,     -1.0 / 1680.0,
    1.0 / 1188.0,   -691.0 / 360360.0, 1.0 / 156.0,      -3617.0 / 122400.0};

// B_{2j} / (2j) for j = 1..8.
constexpr double kDigamma[8] = {
    1.0 / 12.0,   -1.0 / 120.0,     1.0 / 252.0,  -1.0 / 240.0,
    1.0 / 132.0,  -691.0 / 32760.0, 1.0 / 12.0,   -3617.0 / 8160.0};

}  // namespace

double gamma_ln(double x) {
  if (!(x > 0)) throw DomainError("gamma_ln: argument must be positive");
#if defined(__GLIBC__)
  int sign = 0;
  return ::lgamma_r(x, &sign);
#else
  return std::lgamma(x);
#endif
}

double digamma(double x) {
  if (!(x > 0)) throw DomainError("digamma: argument must be positive");
  double acc = 0.0;
  while (x < 12.0) {
    acc -= 1.0 / x;
    x += 1.0;
  }
  const double inv2 = 1.0 / (x * x);
  double p = inv2, series = 0.0;
  for (double c : kDigamma) {
    series += c * p;
    p *= inv2;
  }
  return acc + std::log(x) - 0.5 / x - series;
}

Complex gamma_ln(Complex z) {
  if (!(z.real() > 0)) throw DomainError("gamma_ln: complex argument needs positive real part");
  Complex shift = 0.0;
  while (std::abs(z) < 16.0 || z.real() < 8.0) {
    shift += std::log(z);
    z += 1.0;
  }
  const Complex inv = 1.0 / z;
  const Complex inv2 = inv * inv;
  Complex p = inv, series = 0.0;
  for (double c : kStirling) {
    series += c * p;
    p *= inv2;
  }
  return (z - 0.5) * std::log(z) - z + 0.5 * std::log(2.0 * std::numbers::pi) + series - shift;
}

}  // namespace gsp4
