#include "gsp4/jcal.hpp"

#include "gsp4/gamma.hpp"
#include "gsp4/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace gsp4 {

double jcal(BesselOrder ell, double s1, double s2) {
  if (!(s1 > 0) || !(s2 > 0)) throw DomainError("jcal: eigenvalues must be positive");
  const double a1 = 4.0 * std::numbers::pi * s1;
  const double a2 = 4.0 * std::numbers::pi * s2;
  const int panels = 2 + static_cast<int>(std::ceil(std::max(a1, a2) / 3.0));
  return integrate_panels(
      [&](double th) {
        const double s = std::sin(th);
        return besselJ(ell, a1 * s) * besselJ(ell, a2 * s) * s;
      },
      0.0, 0.5 * std::numbers::pi, panels, 20);
}

namespace {

// int_0^{pi/2} sin^p t dt.
double wallis(double p) {
  return 0.5 * std::sqrt(std::numbers::pi) *
         std::exp(gamma_ln(0.5 * (p + 1.0)) - gamma_ln(0.5 * p + 1.0));
}

}  // namespace

double jcal_majorant(BesselOrder ell, double s1, double s2) {
  const double nu = ell.value();
  if (s1 > s2) std::swap(s1, s2);
  const double a1 = 4.0 * std::numbers::pi * s1;
  const double a2 = 4.0 * std::numbers::pi * s2;
  const double lg = gamma_ln(nu + 1.0);
  // |J(a sin t)| <= (a/2)^nu sin^nu t / Gamma(nu + 1) for both factors.
  const double both = std::exp(nu * std::log(0.25 * a1 * a2) - 2.0 * lg) * wallis(2.0 * nu + 1.0);
  // Small-argument bound for the first factor, 0.7858 x^(-1/3) for the second.
  const double mixed = std::exp(nu * std::log(0.5 * a1) - lg) * 0.7858 * std::pow(a2, -1.0 / 3.0) *
                       wallis(nu + 2.0 / 3.0);
  // |J| <= 1 for the second factor.
  const double one = std::exp(nu * std::log(0.5 * a1) - lg) * wallis(nu + 1.0);
  // Uniform bounds for both factors.
  const double uni = std::min(1.0, 0.6749 * std::pow(nu, -1.0 / 3.0));
  return std::min({both, mixed, one, uni * uni});
}

EigenData eigen_data(const HalfIntegralForm& t, const HalfIntegralForm& q, const IntMatrix2& c) {
  const Int d = det(c);
  if (d == 0) throw DomainError("eigen_pair: singular matrix C");
  const IntMatrix2 adj = adjugate(c);
  // tr(2T adj(C) 2Q adj(C)^T) = 4 tr(T adj Q adj^T).
  const IntMatrix2 m = t.doubled() * adj * q.doubled() * adj.transpose();
  return {d < 0 ? -d : d, m.trace()};
}

EigenPair eigen_pair(double trace, double detv) {
  const double disc = std::max(0.0, trace * trace - 4.0 * detv);
  const double big = 0.5 * (trace + std::sqrt(disc));
  const double small = detv / big;
  return {std::sqrt(small), std::sqrt(big)};
}

EigenPair eigen_pair(const HalfIntegralForm& t, const HalfIntegralForm& q, const EigenData& d) {
  const double d2 = static_cast<double>(d.D) * static_cast<double>(d.D);
  const double trace = static_cast<double>(d.trace4) / (4.0 * d2);
  const double detv = static_cast<double>(t.disc()) * static_cast<double>(q.disc()) / (16.0 * d2);
  return eigen_pair(trace, detv);
}

EigenPair eigen_pair(const HalfIntegralForm& t, const HalfIntegralForm& q, const IntMatrix2& c) {
  return eigen_pair(t, q, eigen_data(t, q, c));
}

}  // namespace gsp4
