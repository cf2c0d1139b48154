#pragma once

// Dirichlet L-functions of Kronecker characters, the coefficients r_q(n) and
// the closed-form and residue main terms of the moments.

#include "gsp4/arith.hpp"
#include "gsp4/gamma.hpp"

#include <array>
#include <vector>

namespace gsp4 {

// Raised for L(s, chi) at a pole.
class PoleError : public DomainError {
 public:
  using DomainError::DomainError;
};

// d = 0, 1 (mod 4), d != 0: then n -> (d / n) is a character modulo |d|.
bool is_discriminant(Int d);

// L(s, (d / .)) for complex s; d a perfect square gives a pole at s = 1.
Complex dirichlet_L(Int disc, Complex s);

struct LValueRequest {
  KroneckerCharacter character;
  double point = 1.0;
  int derivative = 0;
};
double dirichlet_L(const LValueRequest& req);

// L'(s, (d / .)) at a real point by a Cauchy integral.
double dirichlet_L_derivative(Int disc, double s);

// zeta(s) L(s, chi_{-4}).
double dedekind_zeta_Qi(double s);

// chi_q(n) n^{-1/2} sum_{d | n} chi_{-4}(d).
double r_coeff(const KroneckerCharacter& q, Int n);

// Taylor model of L(1 + z, (d / .)) near z = 0, valid for |z| <= 0.3.
class LSeriesAtOne {
 public:
  explicit LSeriesAtOne(Int disc);
  Complex operator()(Complex z) const;
  int pole_order() const { return pole_; }

 private:
  int pole_ = 0;
  std::vector<Complex> coef_;  // of z^pole L(1 + z)
};

double L1_chi_minus4();       // pi / 4
double Lprime1_chi_minus4();  // L'(1, chi_{-4})

struct FirstMomentMain {
  double digamma_form = 0.0;
  double log_form = 0.0;
};
FirstMomentMain first_moment_main(int k);
// C(k) of the level aspect.
double level_constant(int k);
// 2 L(1, chi_{-4}) log N + C(k), N a prime = 3 (mod 4).
double level_main(int k, Int N);

struct ResidueRadii {
  double rs = 0.05;  // inner circle (s)
  double rt = 0.1;   // outer circle (t)
  int nodes = 256;
};

// Res_{s=0} of 2 L(1+s, chi_q) L(1+s, chi_{-4q}) G(s) (1 - s^2) (|q|^2 N)^s / s.
double first_moment_residue(int k, const KroneckerCharacter& q, Int N = 1, ResidueRadii r = {});

struct MainTermSpec {
  int k = 10;
  KroneckerCharacter q1;
  KroneckerCharacter q2;
  Int N = 1;
};

struct SecondMomentMain {
  double value = 0.0;          // Res_t Res_s on the default circles
  double value_halved = 0.0;   // the same with both radii halved
  double log_form = 0.0;       // residue with Gamma(s + k - 1)/Gamma(k - 1) replaced by k^s
  // Coefficients c_j with value ~ sum_j c_j (log k)^j (Gamma(s + k - 1)/Gamma(k - 1) -> k^s).
  std::array<double, 4> log_coefficients{};
};
SecondMomentMain second_moment_main(const MainTermSpec& spec, ResidueRadii r = {});

// The double Mellin integral of the second-moment diagonal evaluated on the
// lines Re s = Re t = sigma, without any contour shift.
struct MellinValue {
  double value = 0.0;
  double imag = 0.0;
  double truncation = 0.0;
};
MellinValue second_moment_diagonal_mellin(int k, const KroneckerCharacter& q1,
                                          const KroneckerCharacter& q2, double sigma = 0.5,
                                          double step = 0.1);

}  // namespace gsp4
