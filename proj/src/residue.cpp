#include "gsp4/lfun.hpp"
#include "gsp4/weight.hpp"

#include <cmath>
#include <numbers>

namespace gsp4 {

namespace {

constexpr double kPi = std::numbers::pi;

void check_k(int k, const char* who) {
  if (k < 6 || k % 2 != 0) throw DomainError(std::string(who) + ": k must be even and >= 6");
}

std::vector<Complex> circle(double radius, int nodes) {
  std::vector<Complex> z(nodes);
  for (int j = 0; j < nodes; ++j) z[j] = std::polar(radius, 2.0 * kPi * (j + 0.5) / nodes);
  return z;
}

// log((2 pi)^{-2s} Gamma(s + 1)), the k-free part of G(s).
Complex log_gamma_factor_free(Complex s) { return -2.0 * s * std::log(2.0 * kPi) + gamma_ln(s + 1.0); }

}  // namespace

double first_moment_residue(int k, const KroneckerCharacter& q, Int N, ResidueRadii r) {
  check_k(k, "first_moment_residue");
  if (N < 1) throw DomainError("first_moment_residue: N must be positive");
  const LSeriesAtOne l1(q.q()), l2(-4 * q.q());
  const double log_scale = std::log(static_cast<double>(q.modulus() * q.modulus() * N));
  Complex acc = 0.0;
  for (const Complex s : circle(r.rt, r.nodes)) {
    // f(s) s with f(s) = 2 L L G(s) (1 - s^2) X^s / s.
    acc += 2.0 * l1(s) * l2(s) * std::exp(log_gamma_factor(k, s) + s * log_scale) * (1.0 - s * s);
  }
  return acc.real() / r.nodes;
}

namespace {

struct ResidueOut {
  double exact = 0.0;
  double log_form = 0.0;
  std::array<double, 4> coef{};
};

ResidueOut second_residue(const MainTermSpec& spec, double rs, double rt, int nodes) {
  const LSeriesAtOne l1(spec.q1.q()), l2(-4 * spec.q1.q()), l3(spec.q2.q()), l4(-4 * spec.q2.q()),
      l5(spec.q1.q() * spec.q2.q());
  const double log_q1 = 2.0 * std::log(static_cast<double>(spec.q1.modulus()));
  const double log_q2 = 2.0 * std::log(static_cast<double>(spec.q2.modulus()));
  const double log_k = std::log(static_cast<double>(spec.k));
  const auto ss = circle(rs, nodes), ts = circle(rt, nodes);
  std::vector<Complex> fs(nodes), ft(nodes), gs(nodes), gt(nodes);
  for (int j = 0; j < nodes; ++j) {
    const Complex s = ss[j], t = ts[j];
    fs[j] = l1(s) * l2(s) * std::exp(log_gamma_factor_free(s) + s * log_q1) * (1.0 - s * s);
    ft[j] = l3(t) * l4(t) * std::exp(log_gamma_factor_free(t) + t * log_q2) * (1.0 - t * t);
    gs[j] = log_gamma_factor(spec.k, s) - log_gamma_factor_free(s);
    gt[j] = log_gamma_factor(spec.k, t) - log_gamma_factor_free(t);
  }
  // Res_t Res_s of F(s, t) = mean over both circles of F s t.
  Complex exact = 0.0, log_form = 0.0;
  std::array<Complex, 4> coef{};
  for (int b = 0; b < nodes; ++b) {
    for (int a = 0; a < nodes; ++a) {
      const Complex u = ss[a] + ts[b];
      const Complex f0 = 4.0 * fs[a] * ft[b] * l5(u);
      exact += f0 * std::exp(gs[a] + gt[b]);
      log_form += f0 * std::exp(u * log_k);
      Complex power = 1.0;
      for (int j = 0; j < 4; ++j) {
        coef[j] += f0 * power;
        power *= u / static_cast<double>(j + 1);
      }
    }
  }
  const double norm = static_cast<double>(nodes) * nodes;
  ResidueOut out;
  out.exact = exact.real() / norm;
  out.log_form = log_form.real() / norm;
  for (int j = 0; j < 4; ++j) out.coef[j] = coef[j].real() / norm;
  return out;
}

}  // namespace

SecondMomentMain second_moment_main(const MainTermSpec& spec, ResidueRadii r) {
  check_k(spec.k, "second_moment_main");
  if (gcd(spec.q1.q(), spec.q2.q()) != 1) throw DomainError("second_moment_main: q1 and q2 must be coprime");
  if (spec.N != 1) throw DomainError("second_moment_main: only level N = 1 is supported");
  if (!(r.rs > 0.0 && r.rs < r.rt && r.rt <= 0.15)) throw DomainError("second_moment_main: need 0 < rs < rt <= 0.15");
  const ResidueOut full = second_residue(spec, r.rs, r.rt, r.nodes);
  const ResidueOut half = second_residue(spec, 0.5 * r.rs, 0.5 * r.rt, r.nodes);
  SecondMomentMain m;
  m.value = full.exact;
  m.value_halved = half.exact;
  m.log_form = full.log_form;
  m.log_coefficients = full.coef;
  return m;
}

MellinValue second_moment_diagonal_mellin(int k, const KroneckerCharacter& q1, const KroneckerCharacter& q2,
                                          double sigma, double step) {
  check_k(k, "second_moment_diagonal_mellin");
  if (!(sigma > 0.0 && sigma < 2.0)) throw DomainError("second_moment_diagonal_mellin: need 0 < sigma < 2");
  const double log_q1 = 2.0 * std::log(static_cast<double>(q1.modulus()));
  const double log_q2 = 2.0 * std::log(static_cast<double>(q2.modulus()));
  // One-variable factor h(s) = G(s) (1 - s^2) / s; march until negligible.
  auto h = [&](double tau) {
    const Complex s(sigma, tau);
    return std::exp(log_gamma_factor(k, s)) * (1.0 - s * s) / s;
  };
  const double peak = std::abs(h(0.0));
  int n = 0;
  while (!(n * step > 10.0 && std::abs(h(n * step)) < 1e-17 * peak)) ++n;
  const int count = 2 * n + 1;
  std::vector<Complex> a(count), b(count), c(2 * count - 1);
  for (int j = 0; j < count; ++j) {
    const double tau = (j - n) * step;
    const Complex s(sigma, tau);
    a[j] = dirichlet_L(q1.q(), 1.0 + s) * dirichlet_L(-4 * q1.q(), 1.0 + s) * h(tau) * std::exp(s * log_q1);
    b[j] = dirichlet_L(q2.q(), 1.0 + s) * dirichlet_L(-4 * q2.q(), 1.0 + s) * h(tau) * std::exp(s * log_q2);
  }
  for (int j = 0; j < 2 * count - 1; ++j)
    c[j] = dirichlet_L(q1.q() * q2.q(), Complex(1.0 + 2.0 * sigma, (j - 2 * n) * step));
  Complex acc = 0.0;
  for (int i = 0; i < count; ++i)
    for (int j = 0; j < count; ++j) acc += a[i] * b[j] * c[i + j];
  // ds dt / (2 pi i)^2 = dtau1 dtau2 / (2 pi)^2.
  acc *= 4.0 * step * step / (4.0 * kPi * kPi);
  MellinValue out;
  out.value = acc.real();
  out.imag = acc.imag();
  out.truncation = std::abs(h(n * step)) / peak;
  return out;
}

}  // namespace gsp4
