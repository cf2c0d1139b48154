#include "gsp4/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace gsp4 {

namespace {

// Nodes and weights on [-1, 1], computed once per order.
const std::pair<Eigen::VectorXd, Eigen::VectorXd>& legendre_reference(int n) {
  static std::mutex mu;
  static std::map<int, std::pair<Eigen::VectorXd, Eigen::VectorXd>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  Eigen::VectorXd x(n), w(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = z;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    double p0 = 1.0, p1 = z;
    for (int j = 2; j <= n; ++j) {
      const double p2 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p0) / j;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (z * p1 - p0) / (z * z - 1.0);
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  return cache.emplace(n, std::make_pair(x, w)).first->second;
}

}  // namespace

QuadratureRule gauss_legendre(int n, double a, double b) {
  if (n < 2) throw std::invalid_argument("gauss_legendre: need at least 2 nodes");
  if (!(b > a)) throw std::invalid_argument("gauss_legendre: empty interval");
  const auto& [x, w] = legendre_reference(n);
  QuadratureRule r;
  r.kind = QuadratureKind::GaussLegendre;
  r.a = a;
  r.b = b;
  r.nodes = (0.5 * (b - a)) * (x.array() + 1.0) + a;
  r.weights = (0.5 * (b - a)) * w;
  return r;
}

QuadratureRule double_exponential(int m, double h, double a, double b) {
  if (m < 1 || !(h > 0)) throw std::invalid_argument("double_exponential: bad step parameters");
  if (!(b > a)) throw std::invalid_argument("double_exponential: empty interval");
  QuadratureRule r;
  r.kind = QuadratureKind::DoubleExponential;
  r.a = a;
  r.b = b;
  r.nodes.resize(2 * m + 1);
  r.weights.resize(2 * m + 1);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  const double hp = 0.5 * std::numbers::pi;
  for (int j = -m; j <= m; ++j) {
    const double t = j * h;
    const double u = hp * std::sinh(t);
    const double ch = std::cosh(u);
    // 1 - tanh(u) computed without cancellation.
    const double x = std::tanh(u);
    const double comp = 1.0 / (std::exp(2.0 * std::abs(u)) + 1.0) * 2.0;
    const double wt = h * hp * std::cosh(t) / (ch * ch);
    double node = mid + half * x;
    if (x > 0) node = b - half * comp;
    if (x < 0) node = a + half * comp;
    r.nodes[j + m] = node;
    r.weights[j + m] = half * wt;
  }
  return r;
}

}  // namespace gsp4
