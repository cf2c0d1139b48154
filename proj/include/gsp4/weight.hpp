#pragma once

// The weight function W(x) of the approximate functional equation,
//   W(x) = (1/2 pi i) int_{(sigma0)} G(s) (1 - s^2) x^{-s} ds / s,
//   G(s) = (2 pi)^{-2s} Gamma(s + 1) Gamma(s + k - 1) / Gamma(k - 1).

#include "gsp4/gamma.hpp"

#include <vector>

namespace gsp4 {

// log G(s).
Complex log_gamma_factor(int k, Complex s);

class WeightKernel {
 public:
  explicit WeightKernel(int k, double sigma0 = 2.0, double step = 0.05);

  int k() const { return k_; }
  double sigma0() const { return sigma0_; }
  double height() const { return height_; }
  int nodes() const { return static_cast<int>(right_.t.size()); }

  struct Value {
    double value = 0.0;
    double imag = 0.0;        // imaginary part of the quadrature sum
    double truncation = 0.0;  // estimate of the discarded contour tail
  };
  Value evaluate(double x) const;
  double operator()(double x) const { return evaluate(x).value; }

  // M(A) = (1/2 pi) int |G(A + it)(1 - s^2)/s| dt, so |W(x)| <= M(A) x^{-A}.
  double majorant_constant(double a) const;
  double majorant(double x, double a) const;

 private:
  struct Contour {
    double sigma = 0.0;
    double height = 0.0;
    double edge = 0.0;  // |integrand coefficient| at the truncation height
    std::vector<double> t;
    std::vector<Complex> coef;
  };
  Contour build(double sigma) const;
  Value integrate(const Contour& c, double x) const;

  int k_;
  double sigma0_;
  double step_;
  double height_ = 0.0;
  Contour right_;
  Contour left_;  // abscissa -1/2, used for x < 1 together with the residue 1
};

double weightW(const WeightKernel& wk, double x);

}  // namespace gsp4
