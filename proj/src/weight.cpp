#include "gsp4/weight.hpp"

#include "gsp4/arith.hpp"

#include <cmath>
#include <numbers>

namespace gsp4 {

Complex log_gamma_factor(int k, Complex s) {
  return -2.0 * s * std::log(2.0 * std::numbers::pi) + gamma_ln(s + 1.0) +
         gamma_ln(s + static_cast<double>(k - 1)) - gamma_ln(static_cast<double>(k - 1));
}

WeightKernel::WeightKernel(int k, double sigma0, double step) : k_(k), sigma0_(sigma0), step_(step) {
  if (k < 6 || k % 2 != 0) throw DomainError("WeightKernel: k must be even and at least 6");
  if (!(sigma0 > 0) || !(sigma0 < 2.0 * k - 3.0))
    throw DomainError("WeightKernel: abscissa outside (0, 2k - 3)");
  if (!(step > 0)) throw DomainError("WeightKernel: step must be positive");
  right_ = build(sigma0_);
  left_ = build(-0.5);
  height_ = right_.height;
}

WeightKernel::Contour WeightKernel::build(double sigma) const {
  Contour c;
  c.sigma = sigma;
  auto coef = [&](double t) {
    const Complex s(sigma, t);
    return std::exp(log_gamma_factor(k_, s)) * (1.0 - s * s) / s;
  };
  // March outwards until the integrand is negligible against its peak; the
  // Gamma factors decay like exp(-pi |t|) beyond the peak.
  std::vector<Complex> pos;
  double peak = 0.0;
  int j = 0;
  for (;; ++j) {
    const double t = j * step_;
    const Complex v = coef(t);
    pos.push_back(v);
    peak = std::max(peak, std::abs(v));
    if (t > 2.0 * k_ + 10.0 && std::abs(v) < 1e-18 * peak) break;
  }
  c.height = j * step_;
  c.edge = std::abs(pos.back());
  for (int i = -j; i <= j; ++i) {
    c.t.push_back(i * step_);
    c.coef.push_back(i >= 0 ? pos[i] : coef(i * step_));
  }
  return c;
}

WeightKernel::Value WeightKernel::integrate(const Contour& c, double x) const {
  const double lx = std::log(x);
  const double mag = std::exp(-c.sigma * lx);
  Complex sum = 0.0;
  for (std::size_t i = 0; i < c.t.size(); ++i) sum += c.coef[i] * std::polar(1.0, -c.t[i] * lx);
  sum *= mag * step_ / (2.0 * std::numbers::pi);
  Value v;
  v.value = sum.real();
  v.imag = sum.imag();
  // Tail beyond the height, using exp(-pi t) decay of the coefficients.
  v.truncation = 2.0 * c.edge * mag / (std::numbers::pi * 2.0 * std::numbers::pi);
  return v;
}

WeightKernel::Value WeightKernel::evaluate(double x) const {
  if (!(x > 0)) throw DomainError("weightW: argument must be positive");
  if (x >= 1.0) return integrate(right_, x);
  // Shift to Re s = -1/2 past the simple pole at s = 0 (residue 1); the pole
  // of Gamma(s + 1) at s = -1 is cancelled by 1 - s^2.
  Value v = integrate(left_, x);
  v.value += 1.0;
  return v;
}

double WeightKernel::majorant_constant(double a) const {
  if (!(a > 0)) throw DomainError("majorant_constant: exponent must be positive");
  double sum = 0.0, peak = 0.0;
  for (int j = 0;; ++j) {
    const double t = j * step_;
    const Complex s(a, t);
    const double v = std::abs(std::exp(log_gamma_factor(k_, s)) * (1.0 - s * s) / s);
    sum += (j == 0 ? 1.0 : 2.0) * v;
    peak = std::max(peak, v);
    if (t > 2.0 * k_ + 10.0 + a && v < 1e-18 * peak) break;
  }
  // Trapezoid sum of a smooth positive integrand, inflated by a safety margin.
  return 1.0001 * sum * step_ / (2.0 * std::numbers::pi);
}

double WeightKernel::majorant(double x, double a) const {
  return majorant_constant(a) * std::pow(x, -a);
}

double weightW(const WeightKernel& wk, double x) {
  const auto v = wk.evaluate(x);
  if (std::abs(v.imag) > 1e-10) throw DomainError("weightW: quadrature lost conjugate symmetry");
  return v.value;
}

}  // namespace gsp4
