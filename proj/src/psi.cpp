#include "gsp4/psi.hpp"

#include "gsp4/jcal.hpp"
#include "gsp4/quadrature.hpp"
#include "gsp4/weight.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace gsp4 {

namespace {

constexpr double kPi = std::numbers::pi;

// x beyond which |W(x)| stays below 1e-14 on a 0.25 grid.
double weight_cutoff(const WeightKernel& wk) {
  double x = 1.0;
  for (;;) {
    bool small = true;
    for (int j = 0; j < 8 && small; ++j) small = std::abs(wk(x + 0.25 * j)) < 1e-14;
    if (small) return x;
    x += 0.25;
  }
}

// Jcal_l(sqrt(u) s1, sqrt(u) s2) tabulated in r = sqrt(u) with six-point
// Lagrange interpolation.
class RadialTable {
 public:
  RadialTable(BesselOrder ell, double s1, double s2, double rmax) {
    const int n = std::max(64, static_cast<int>(std::ceil(rmax * 4.0 * kPi * std::max(s1, s2) * 20.0)));
    h_ = rmax / n;
    values_.resize(n + 6);
    for (int i = 0; i < n + 6; ++i) {
      const double r = i * h_;
      values_[i] = r == 0.0 ? 0.0 : jcal(ell, r * s1, r * s2);
    }
  }
  double operator()(double r) const {
    int i = static_cast<int>(r / h_) - 2;
    i = std::clamp(i, 0, static_cast<int>(values_.size()) - 6);
    const double t = r / h_ - i;
    double sum = 0.0;
    for (int a = 0; a < 6; ++a) {
      double w = 1.0;
      for (int b = 0; b < 6; ++b)
        if (b != a) w *= (t - b) / static_cast<double>(a - b);
      sum += w * values_[i + a];
    }
    return sum;
  }

 private:
  double h_ = 1.0;
  std::vector<double> values_;
};

struct Axis {
  std::vector<double> x;
  std::vector<Complex> w;  // weight times W(n x / |q|^2) x^{-1/2} e(x h / D)
};

Axis make_axis(const WeightKernel& wk, double cutoff, double scale, Int h, Int det_c, int panels) {
  const QuadratureRule ref = gauss_legendre(16);
  const double width = cutoff / panels;
  Axis ax;
  for (int p = 0; p < panels; ++p)
    for (Eigen::Index i = 0; i < ref.size(); ++i) {
      const double x = p * width + 0.5 * width * (ref.nodes[i] + 1.0);
      const double phase = 2.0 * kPi * static_cast<double>(h) * x / static_cast<double>(det_c);
      ax.x.push_back(x);
      ax.w.push_back(0.5 * width * ref.weights[i] * wk(x * scale) / std::sqrt(x) * std::polar(1.0, phase));
    }
  return ax;
}

Complex integrate(const Axis& a, const Axis& b, const RadialTable& table) {
  Complex sum = 0.0;
  for (std::size_t i = 0; i < a.x.size(); ++i) {
    Complex row = 0.0;
    for (std::size_t j = 0; j < b.x.size(); ++j) row += b.w[j] * table(std::sqrt(a.x[i] * b.x[j]));
    sum += a.w[i] * row;
  }
  return sum;
}

}  // namespace

PsiValue eval_Psi(const IntMatrix2& c, Int h1, Int h2, Int n1, Int n2, const KroneckerCharacter& q1,
                  const KroneckerCharacter& q2, int k) {
  const Int det_c = std::abs(det(c));
  if (det_c == 0) throw DomainError("eval_Psi: singular matrix C");
  if (n1 < 1 || n2 < 1) throw DomainError("eval_Psi: n1, n2 must be positive");
  const BesselOrder ell = BesselOrder::ell(k);
  // Eigenvalues s^2 of (C^T C)^{-1} are the reciprocals of those of C^T C.
  const IntMatrix2 m = c.transpose() * c;
  const double tr = static_cast<double>(m.trace()), dt = static_cast<double>(det(m));
  const double root = std::sqrt(std::max(0.0, tr * tr - 4.0 * dt));
  const double s_small = std::sqrt(2.0 / (tr + root)), s_large = std::sqrt((tr + root) / (2.0 * dt));

  const WeightKernel wk(k);
  const double base = weight_cutoff(wk);
  const double scale1 = static_cast<double>(n1) / static_cast<double>(q1.modulus() * q1.modulus());
  const double scale2 = static_cast<double>(n2) / static_cast<double>(q2.modulus() * q2.modulus());
  PsiValue out;
  out.cutoff1 = base / scale1;
  out.cutoff2 = base / scale2;
  const RadialTable table(ell, s_small, s_large, std::sqrt(out.cutoff1 * out.cutoff2));
  const int p1 = std::max(8, static_cast<int>(std::ceil(out.cutoff1 * 4.0))),
            p2 = std::max(8, static_cast<int>(std::ceil(out.cutoff2 * 4.0)));
  const Complex fine = integrate(make_axis(wk, out.cutoff1, scale1, h1, det_c, p1),
                                 make_axis(wk, out.cutoff2, scale2, h2, det_c, p2), table);
  const Complex coarse = integrate(make_axis(wk, out.cutoff1, scale1, h1, det_c, p1 / 2),
                                   make_axis(wk, out.cutoff2, scale2, h2, det_c, p2 / 2), table);
  out.value = fine;
  out.error = std::abs(fine - coarse);
  return out;
}

}  // namespace gsp4
