#include "gsp4/lfun.hpp"

#include "gsp4/weight.hpp"

#include <cmath>
#include <mutex>
#include <numbers>

namespace gsp4 {

namespace {

constexpr double kPi = std::numbers::pi;

// B_{2j} / (2j)! for j = 1..10.
constexpr double kBernoulliRatio[] = {
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1209600.0,
    1.0 / 47900160.0,
    -691.0 / 1307674368000.0,
    1.0 / 74724249600.0,
    -3617.0 / 10670622842880000.0,
    43867.0 / 5109094217170944000.0,
    -174611.0 / 802857662698291200000.0,
};

Int integer_sqrt(Int n) {
  Int r = static_cast<Int>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

bool is_square(Int n) {
  if (n < 0) return false;
  const Int r = integer_sqrt(n);
  return r * r == n;
}

// (e^w - 1) / w.
Complex expm1_ratio(Complex w) {
  if (std::abs(w) > 0.1) return (std::exp(w) - 1.0) / w;
  Complex term = 1.0, sum = 1.0;
  for (int j = 2; j < 16; ++j) {
    term *= w / static_cast<double>(j);
    sum += term;
  }
  return sum;
}

// Euler-Maclaurin tail sum_{n >= m} f(n) - (pole part) for f(x) = (a + x q)^{-s},
// without the integral term.
Complex em_correction(Complex s, double a, double q, Int m) {
  const double x = a + static_cast<double>(m) * q;
  Complex sum = 0.5 * std::pow(x, -s);
  // f^{(2j-1)}(m) = (-s)_(2j-1 falling) q^{2j-1} x^{-s-2j+1}.
  Complex rising = -s;  // (-s)(-s-1)...(-s-r+1) for r = 1
  Complex power = std::pow(x, -s - 1.0) * q;
  for (int j = 1; j <= 10; ++j) {
    sum -= kBernoulliRatio[j - 1] * rising * power;
    // Advance the derivative order by two.
    rising *= (-s - static_cast<double>(2 * j - 1)) * (-s - static_cast<double>(2 * j));
    power *= q * q / (x * x);
  }
  return sum;
}

// Number of direct terms per residue class; the Euler-Maclaurin remainder
// behaves like (2j)! / (2 pi m)^{2j} |s|^{2j}.
Int cutoff(Complex s) { return static_cast<Int>(std::ceil(30.0 + 2.0 * std::abs(s))); }

// zeta(s) for s != 1.
Complex riemann_zeta(Complex s) {
  const Int m = cutoff(s);
  Complex sum = 0.0;
  for (Int n = 1; n < m; ++n) sum += std::pow(static_cast<double>(n), -s);
  const double x = static_cast<double>(m);
  sum += std::pow(x, 1.0 - s) / (s - 1.0);
  sum += em_correction(s, 0.0, 1.0, m);
  return sum;
}

// Non-principal-type character: q^{-s} sum_a chi(a) zeta(s, a / q), with the
// pole terms combined so that s = 1 is regular.
Complex character_sum_L(Int disc, Complex s) {
  const Int q = disc < 0 ? -disc : disc;
  const Int m = cutoff(s);
  const double qd = static_cast<double>(q);
  const double base = static_cast<double>(m) * qd;
  const double log_base = std::log(base);
  Complex sum = 0.0;
  for (Int a = 1; a <= q; ++a) {
    const int chi = kronecker_symbol(disc, a);
    if (chi == 0) continue;
    const double ad = static_cast<double>(a);
    Complex part = 0.0;
    for (Int n = 0; n < m; ++n) part += std::pow(ad + static_cast<double>(n) * qd, -s);
    // int_m^inf (a + x q)^{-s} dx = (a + m q)^{1-s} / (q (s - 1)); subtract the
    // a-independent (m q)^{1-s} / (q (s - 1)) which cancels in the character sum.
    const double delta = std::log1p(ad / base);
    const Complex z = 1.0 - s;
    part += -std::exp(z * log_base) * delta * expm1_ratio(z * delta) / qd;
    part += em_correction(s, ad, qd, m);
    sum += static_cast<double>(chi) * part;
  }
  return sum;
}

}  // namespace

bool is_discriminant(Int d) { return d != 0 && (mod(d, 4) == 0 || mod(d, 4) == 1); }

Complex dirichlet_L(Int disc, Complex s) {
  if (!is_discriminant(disc)) throw DomainError("dirichlet_L: " + std::to_string(disc) + " is not a discriminant");
  if (is_square(disc)) {
    if (s == Complex(1.0, 0.0)) throw PoleError("dirichlet_L: pole of the principal character at s = 1");
    Complex v = riemann_zeta(s);
    for (const auto& [p, e] : factorize(disc)) v *= 1.0 - std::pow(static_cast<double>(p), -s);
    return v;
  }
  return character_sum_L(disc, s);
}

double dirichlet_L_derivative(Int disc, double s) {
  double radius = 0.5;
  if (is_square(disc)) {
    if (s == 1.0) throw PoleError("dirichlet_L: derivative at the pole s = 1");
    radius = std::min(radius, 0.5 * std::abs(s - 1.0));
  }
  constexpr int kNodes = 64;
  Complex acc = 0.0;
  for (int j = 0; j < kNodes; ++j) {
    const Complex u = std::polar(1.0, 2.0 * kPi * (j + 0.5) / kNodes);
    acc += dirichlet_L(disc, s + radius * u) / u;
  }
  return acc.real() / (kNodes * radius);
}

double dirichlet_L(const LValueRequest& req) {
  if (req.point <= 0.0) throw DomainError("dirichlet_L: point must be positive");
  if (req.derivative == 0) return dirichlet_L(req.character.q(), Complex(req.point, 0.0)).real();
  if (req.derivative == 1) return dirichlet_L_derivative(req.character.q(), req.point);
  throw DomainError("dirichlet_L: derivative order must be 0 or 1");
}

double dedekind_zeta_Qi(double s) {
  return (dirichlet_L(1, Complex(s, 0.0)) * dirichlet_L(-4, Complex(s, 0.0))).real();
}

double r_coeff(const KroneckerCharacter& q, Int n) {
  if (n < 1) throw DomainError("r_coeff: n must be positive");
  const int chi = q(n);
  if (chi == 0) return 0.0;
  Int divisor_sum = 0;
  for (Int d = 1; d * d <= n; ++d) {
    if (n % d != 0) continue;
    divisor_sum += kronecker_symbol(-4, d);
    if (d * d != n) divisor_sum += kronecker_symbol(-4, n / d);
  }
  return chi * static_cast<double>(divisor_sum) / std::sqrt(static_cast<double>(n));
}

LSeriesAtOne::LSeriesAtOne(Int disc) {
  pole_ = is_square(disc) ? 1 : 0;
  constexpr int kNodes = 96;
  constexpr int kTerms = 48;
  constexpr double kRadius = 0.6;
  std::vector<Complex> values(kNodes), nodes(kNodes);
  for (int j = 0; j < kNodes; ++j) {
    nodes[j] = std::polar(kRadius, 2.0 * kPi * j / kNodes);
    values[j] = dirichlet_L(disc, 1.0 + nodes[j]) * (pole_ ? nodes[j] : Complex(1.0));
  }
  coef_.assign(kTerms, 0.0);
  for (int p = 0; p < kTerms; ++p) {
    Complex acc = 0.0;
    for (int j = 0; j < kNodes; ++j) acc += values[j] * std::polar(1.0, -2.0 * kPi * j * p / kNodes);
    coef_[p] = acc / (kNodes * std::pow(kRadius, p));
  }
}

Complex LSeriesAtOne::operator()(Complex z) const {
  Complex v = 0.0;
  for (auto it = coef_.rbegin(); it != coef_.rend(); ++it) v = v * z + *it;
  return pole_ ? v / z : v;
}

double L1_chi_minus4() { return kPi / 4.0; }

double Lprime1_chi_minus4() {
  static const double value = dirichlet_L_derivative(-4, 1.0);
  return value;
}

FirstMomentMain first_moment_main(int k) {
  if (k < 6 || k % 2 != 0) throw DomainError("first_moment_main: k must be even and >= 6");
  const double l = L1_chi_minus4(), lp = Lprime1_chi_minus4();
  const double log4pi2 = std::log(4.0 * kPi * kPi);
  FirstMomentMain m;
  m.digamma_form = 2.0 * l * (digamma(k - 1.0) - log4pi2) + 2.0 * lp;
  m.log_form = 2.0 * l * (std::log(static_cast<double>(k)) - log4pi2) + 2.0 * lp;
  return m;
}

double level_constant(int k) {
  if (k < 6 || k % 2 != 0) throw DomainError("level_constant: k must be even and >= 6");
  return 2.0 * L1_chi_minus4() * (digamma(k - 1.0) + std::log(1.0 / (4.0 * kPi * kPi))) +
         2.0 * Lprime1_chi_minus4();
}

double level_main(int k, Int N) {
  if (!is_prime(N) || N % 4 != 3) throw DomainError("level_main: N must be a prime = 3 (mod 4)");
  return 2.0 * L1_chi_minus4() * std::log(static_cast<double>(N)) + level_constant(k);
}

}  // namespace gsp4
