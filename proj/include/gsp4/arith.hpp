#pragma once

// Exact integer arithmetic: 2x2 integer matrices, positive definite
// half-integral binary forms, Gaussian integers and Kronecker characters.

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gsp4 {

using Int = std::int64_t;
using IntMatrix2 = Eigen::Matrix<Int, 2, 2>;
using IntVector2 = Eigen::Matrix<Int, 2, 1>;

class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// ---------------------------------------------------------------------------
// Integer helpers

Int gcd(Int a, Int b);
Int lcm(Int a, Int b);
// Non-negative residue of a modulo m > 0.
inline Int mod(Int a, Int m) {
  Int r = a % m;
  return r < 0 ? r + m : r;
}
// Inverse of a modulo m (requires gcd(a, m) = 1); returns 0 for m = 1.
Int inverse_mod(Int a, Int m);
bool is_squarefree(Int n);
bool is_prime(Int n);
// Prime factorisation of |n| as (prime, exponent) pairs.
std::vector<std::pair<Int, int>> factorize(Int n);

// ---------------------------------------------------------------------------
// 2x2 integer matrices

inline Int det(const IntMatrix2& m) { return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0); }
inline Int max_abs(const IntMatrix2& m) { return m.cwiseAbs().maxCoeff(); }
// adj(M) with M * adj(M) = det(M) * I.
IntMatrix2 adjugate(const IntMatrix2& m);
inline bool is_unimodular(const IntMatrix2& m) {
  const Int d = det(m);
  return d == 1 || d == -1;
}
// Exact inverse of a unimodular matrix.
IntMatrix2 unimodular_inverse(const IntMatrix2& m);
IntMatrix2 make_matrix(Int a, Int b, Int c, Int d);

// Elementary divisor decomposition U * C * V = diag(e1, e2) with U, V
// unimodular, e1 | e2 and e1, e2 > 0.
struct SmithForm {
  IntMatrix2 U;
  IntMatrix2 V;
  Int e1 = 1;
  Int e2 = 1;
};
SmithForm smith_form(const IntMatrix2& c);

// "a,b,c,d" (row major).
IntMatrix2 parse_matrix(std::string_view text);
std::string format_matrix(const IntMatrix2& m);

// ---------------------------------------------------------------------------
// Half-integral forms

// The positive definite matrix (p1, p2/2; p2/2, p4), equivalently the binary
// quadratic form p1 x^2 + p2 x y + p4 y^2.
class HalfIntegralForm {
 public:
  HalfIntegralForm() = default;
  HalfIntegralForm(Int p1, Int p2, Int p4);

  Int p1() const { return p1_; }
  Int p2() const { return p2_; }
  Int p4() const { return p4_; }
  // 4 det = 4 p1 p4 - p2^2 (a positive integer).
  Int disc() const { return 4 * p1_ * p4_ - p2_ * p2_; }
  double det() const { return static_cast<double>(disc()) / 4.0; }
  Int operator()(Int x, Int y) const { return p1_ * x * x + p2_ * x * y + p4_ * y * y; }
  // The integral matrix 2T.
  IntMatrix2 doubled() const { return make_matrix(2 * p1_, p2_, p2_, 2 * p4_); }
  Eigen::Matrix2d matrix() const;
  double max_eigenvalue() const;
  double min_eigenvalue() const;

  static HalfIntegralForm from_doubled(const IntMatrix2& two_t);
  static HalfIntegralForm parse(std::string_view text);
  std::string str() const;

  friend bool operator==(const HalfIntegralForm&, const HalfIntegralForm&) = default;
  friend auto operator<=>(const HalfIntegralForm&, const HalfIntegralForm&) = default;

 private:
  Int p1_ = 1;
  Int p2_ = 0;
  Int p4_ = 1;
};

inline HalfIntegralForm identity_form() { return {1, 0, 1}; }
inline HalfIntegralForm scaled_identity(Int m) { return {m, 0, m}; }

// U^T T U.
HalfIntegralForm transform(const HalfIntegralForm& t, const IntMatrix2& u);
// U T U^T.
inline HalfIntegralForm transform_rows(const HalfIntegralForm& t, const IntMatrix2& u) {
  return transform(t, u.transpose());
}

struct Reduction {
  HalfIntegralForm form;  // 0 <= p2 <= p1 <= p4
  IntMatrix2 U;           // U^T T U = form, U in GL2(Z)
};
// GL2(Z)-reduction; the reduced representative is unique in its class.
Reduction reduce(const HalfIntegralForm& t);
bool is_reduced(const HalfIntegralForm& t);
bool is_equivalent(const HalfIntegralForm& t, const HalfIntegralForm& q);
// {U in GL2(Z) | U^T T U = T}.
std::vector<IntMatrix2> aut_group(const HalfIntegralForm& t);
// Calls f(x, y) for every integer vector with T[(x, y)] <= bound.
void for_each_vector(const HalfIntegralForm& t, Int bound,
                     const std::function<void(Int, Int)>& f);
// All primitive (x, y) with T[(x, y)] = s.
std::vector<IntVector2> primitive_representations(const HalfIntegralForm& t, Int s);

// ---------------------------------------------------------------------------
// GO_2(Z) and Gaussian integers

struct GaussianInt {
  Int re = 0;
  Int im = 0;
  Int norm() const { return re * re + im * im; }
  friend bool operator==(const GaussianInt&, const GaussianInt&) = default;
};
GaussianInt operator*(const GaussianInt& a, const GaussianInt& b);
// Exact divisibility a | b in Z[i].
bool divides(const GaussianInt& a, const GaussianInt& b);
// Euler's totient on Z[i]: N(g) prod_{pi | g} (1 - 1/N(pi)).
Int gaussian_phi(const GaussianInt& g);

// (x, y; -y, x) or, with reflection, (x, y; y, -x).
struct GOElement {
  Int x = 1;
  Int y = 0;
  bool reflection = false;

  GOElement() = default;
  GOElement(Int x, Int y, bool reflection);
  IntMatrix2 matrix() const;
  Int abs_det() const { return x * x + y * y; }
  GaussianInt gaussian() const { return {x, y}; }
};

// ---------------------------------------------------------------------------
// Kronecker symbols

// The Kronecker symbol (a / n) for arbitrary integers.
int kronecker_symbol(Int a, Int n);
bool is_fundamental_discriminant(Int q);

// chi_q for q a fundamental discriminant or q = 1.
class KroneckerCharacter {
 public:
  KroneckerCharacter() = default;
  explicit KroneckerCharacter(Int q);
  Int q() const { return q_; }
  Int modulus() const { return q_ < 0 ? -q_ : q_; }
  bool is_principal() const { return q_ == 1; }
  int operator()(Int n) const { return kronecker_symbol(q_, n); }
  friend bool operator==(const KroneckerCharacter&, const KroneckerCharacter&) = default;

 private:
  Int q_ = 1;
};
int kronecker(const KroneckerCharacter& chi, Int n);

}  // namespace gsp4
