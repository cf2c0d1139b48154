#pragma once

// Fixed quadrature rules: Gauss-Legendre and double-exponential (tanh-sinh).

#include <Eigen/Core>

namespace gsp4 {

enum class QuadratureKind { GaussLegendre, DoubleExponential };

struct QuadratureRule {
  QuadratureKind kind = QuadratureKind::GaussLegendre;
  double a = -1.0;
  double b = 1.0;
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;

  Eigen::Index size() const { return nodes.size(); }

  template <class F>
  double integrate(F&& f) const {
    double s = 0.0;
    for (Eigen::Index i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
    return s;
  }
};

// n-point Gauss-Legendre rule on [a, b].
QuadratureRule gauss_legendre(int n, double a = -1.0, double b = 1.0);

// Tanh-sinh rule on [a, b] with step h and 2m + 1 nodes.
QuadratureRule double_exponential(int m, double h, double a, double b);

// Composite Gauss-Legendre over `panels` equal subintervals of [a, b].
template <class F>
double integrate_panels(F&& f, double a, double b, int panels, int order = 16) {
  const QuadratureRule ref = gauss_legendre(order);
  const double w = (b - a) / panels;
  double s = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * w;
    double ps = 0.0;
    for (Eigen::Index i = 0; i < ref.size(); ++i)
      ps += ref.weights[i] * f(lo + 0.5 * w * (ref.nodes[i] + 1.0));
    s += 0.5 * w * ps;
  }
  return s;
}

}  // namespace gsp4
