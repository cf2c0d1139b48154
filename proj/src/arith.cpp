#include "gsp4/arith.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gsp4 {

Int gcd(Int a, Int b) {
  a = a < 0 ? -a : a;
  b = b < 0 ? -b : b;
  while (b != 0) {
    const Int r = a % b;
    a = b;
    b = r;
  }
  return a;
}

Int lcm(Int a, Int b) {
  if (a == 0 || b == 0) return 0;
  const Int g = gcd(a, b);
  return std::abs(a / g * b);
}

namespace {

// Returns g = gcd(a, b) >= 0 and x, y with a x + b y = g.
Int egcd(Int a, Int b, Int& x, Int& y) {
  Int x0 = 1, y0 = 0, x1 = 0, y1 = 1;
  while (b != 0) {
    const Int q = a / b;
    Int t = a - q * b;
    a = b;
    b = t;
    t = x0 - q * x1;
    x0 = x1;
    x1 = t;
    t = y0 - q * y1;
    y0 = y1;
    y1 = t;
  }
  if (a < 0) {
    a = -a;
    x0 = -x0;
    y0 = -y0;
  }
  x = x0;
  y = y0;
  return a;
}

}  // namespace

Int inverse_mod(Int a, Int m) {
  if (m <= 0) throw DomainError("inverse_mod: modulus must be positive");
  if (m == 1) return 0;
  Int x, y;
  if (egcd(mod(a, m), m, x, y) != 1) throw DomainError("inverse_mod: not invertible");
  return mod(x, m);
}

bool is_squarefree(Int n) {
  if (n == 0) return false;
  for (const auto& [p, e] : factorize(n))
    if (e > 1) return false;
  return true;
}

bool is_prime(Int n) {
  if (n < 2) return false;
  for (Int p = 2; p * p <= n; ++p)
    if (n % p == 0) return false;
  return true;
}

std::vector<std::pair<Int, int>> factorize(Int n) {
  std::vector<std::pair<Int, int>> out;
  n = n < 0 ? -n : n;
  for (Int p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

IntMatrix2 make_matrix(Int a, Int b, Int c, Int d) {
  IntMatrix2 m;
  m << a, b, c, d;
  return m;
}

IntMatrix2 adjugate(const IntMatrix2& m) {
  return make_matrix(m(1, 1), -m(0, 1), -m(1, 0), m(0, 0));
}

IntMatrix2 unimodular_inverse(const IntMatrix2& m) {
  const Int d = det(m);
  if (d != 1 && d != -1) throw DomainError("unimodular_inverse: matrix is not unimodular");
  return d * adjugate(m);
}

SmithForm smith_form(const IntMatrix2& c) {
  if (det(c) == 0) throw DomainError("smith_form: singular matrix");
  IntMatrix2 m = c;
  IntMatrix2 u = IntMatrix2::Identity();
  IntMatrix2 v = IntMatrix2::Identity();
  for (;;) {
    // Move the smallest non-zero entry to (0, 0).
    int bi = 0, bj = 0;
    Int best = 0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        if (m(i, j) != 0 && (best == 0 || std::abs(m(i, j)) < best)) {
          best = std::abs(m(i, j));
          bi = i;
          bj = j;
        }
    if (bi == 1) {
      m.row(0).swap(m.row(1));
      u.row(0).swap(u.row(1));
    }
    if (bj == 1) {
      m.col(0).swap(m.col(1));
      v.col(0).swap(v.col(1));
    }
    const Int p = m(0, 0);
    const Int qr = m(1, 0) / p;
    m.row(1) -= qr * m.row(0);
    u.row(1) -= qr * u.row(0);
    const Int qc = m(0, 1) / p;
    m.col(1) -= qc * m.col(0);
    v.col(1) -= qc * v.col(0);
    if (m(1, 0) != 0 || m(0, 1) != 0) continue;
    if (m(1, 1) % p != 0) {
      m.row(0) += m.row(1);
      u.row(0) += u.row(1);
      continue;
    }
    break;
  }
  for (int i = 0; i < 2; ++i)
    if (m(i, i) < 0) {
      m.row(i) *= -1;
      u.row(i) *= -1;
    }
  return {u, v, m(0, 0), m(1, 1)};
}

namespace {

std::vector<Int> parse_ints(std::string_view text, std::size_t count, const char* what) {
  std::vector<Int> out;
  std::string s(text);
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    long long v = 0;
    try {
      v = std::stoll(item, &pos);
    } catch (const std::exception&) {
      throw std::invalid_argument(std::string("cannot parse ") + what + ": '" + s + "'");
    }
    while (pos < item.size() && std::isspace(static_cast<unsigned char>(item[pos]))) ++pos;
    if (pos != item.size())
      throw std::invalid_argument(std::string("cannot parse ") + what + ": '" + s + "'");
    out.push_back(v);
  }
  if (out.size() != count)
    throw std::invalid_argument(std::string("expected ") + std::to_string(count) +
                                " comma-separated integers for " + what + ": '" + s + "'");
  return out;
}

}  // namespace

IntMatrix2 parse_matrix(std::string_view text) {
  const auto v = parse_ints(text, 4, "matrix");
  return make_matrix(v[0], v[1], v[2], v[3]);
}

std::string format_matrix(const IntMatrix2& m) {
  std::ostringstream os;
  os << m(0, 0) << ',' << m(0, 1) << ',' << m(1, 0) << ',' << m(1, 1);
  return os.str();
}

HalfIntegralForm::HalfIntegralForm(Int p1, Int p2, Int p4) : p1_(p1), p2_(p2), p4_(p4) {
  if (p1 < 1 || p4 < 1 || 4 * p1 * p4 - p2 * p2 <= 0)
    throw DomainError("form (" + std::to_string(p1) + "," + std::to_string(p2) + "," +
                      std::to_string(p4) + ") is not positive definite");
}

Eigen::Matrix2d HalfIntegralForm::matrix() const {
  Eigen::Matrix2d m;
  m << static_cast<double>(p1_), p2_ / 2.0, p2_ / 2.0, static_cast<double>(p4_);
  return m;
}

double HalfIntegralForm::max_eigenvalue() const {
  const double tr = static_cast<double>(p1_ + p4_);
  return 0.5 * (tr + std::sqrt(std::max(0.0, tr * tr - static_cast<double>(disc()))));
}

double HalfIntegralForm::min_eigenvalue() const {
  return det() / max_eigenvalue();
}

HalfIntegralForm HalfIntegralForm::from_doubled(const IntMatrix2& two_t) {
  if (two_t(0, 1) != two_t(1, 0) || two_t(0, 0) % 2 != 0 || two_t(1, 1) % 2 != 0)
    throw DomainError("from_doubled: not twice a half-integral symmetric matrix");
  return {two_t(0, 0) / 2, two_t(0, 1), two_t(1, 1) / 2};
}

HalfIntegralForm HalfIntegralForm::parse(std::string_view text) {
  const auto v = parse_ints(text, 3, "form");
  return {v[0], v[1], v[2]};
}

std::string HalfIntegralForm::str() const {
  return std::to_string(p1_) + "," + std::to_string(p2_) + "," + std::to_string(p4_);
}

HalfIntegralForm transform(const HalfIntegralForm& t, const IntMatrix2& u) {
  return HalfIntegralForm::from_doubled(u.transpose() * t.doubled() * u);
}

Reduction reduce(const HalfIntegralForm& t) {
  Int a = t.p1(), b = t.p2(), c = t.p4();
  IntMatrix2 u = IntMatrix2::Identity();
  for (;;) {
    if (a > c) {
      std::swap(a, c);
      u.col(0).swap(u.col(1));
      continue;
    }
    if (b > a || b < -a) {
      // x -> x + n y with n chosen so that |b + 2 n a| <= a.
      const Int n = -static_cast<Int>(std::floor((static_cast<double>(b) + a) / (2.0 * a)));
      c = a * n * n + b * n + c;
      b = b + 2 * n * a;
      u.col(1) += n * u.col(0);
      continue;
    }
    break;
  }
  if (b < 0) {
    b = -b;
    u.col(1) *= -1;
  }
  return {HalfIntegralForm(a, b, c), u};
}

bool is_reduced(const HalfIntegralForm& t) {
  return 0 <= t.p2() && t.p2() <= t.p1() && t.p1() <= t.p4();
}

bool is_equivalent(const HalfIntegralForm& t, const HalfIntegralForm& q) {
  if (t.disc() != q.disc()) return false;
  return reduce(t).form == reduce(q).form;
}

void for_each_vector(const HalfIntegralForm& t, Int bound,
                     const std::function<void(Int, Int)>& f) {
  if (bound < 0) return;
  const double delta = static_cast<double>(t.disc());
  // T[(x,y)] <= N forces y^2 <= 4 p1 N / delta.
  const Int ymax = static_cast<Int>(std::floor(std::sqrt(4.0 * t.p1() * bound / delta))) + 1;
  for (Int y = -ymax; y <= ymax; ++y) {
    // p1 x^2 + p2 y x + (p4 y^2 - N) <= 0.
    const double disc = static_cast<double>(t.p2() * y) * (t.p2() * y) -
                        4.0 * t.p1() * (static_cast<double>(t.p4() * y * y) - bound);
    if (disc < 0) continue;
    const double r = std::sqrt(disc);
    const Int xlo = static_cast<Int>(std::floor((-t.p2() * y - r) / (2.0 * t.p1()))) - 1;
    const Int xhi = static_cast<Int>(std::ceil((-t.p2() * y + r) / (2.0 * t.p1()))) + 1;
    for (Int x = xlo; x <= xhi; ++x)
      if (t(x, y) <= bound) f(x, y);
  }
}

std::vector<IntMatrix2> aut_group(const HalfIntegralForm& t) {
  std::vector<IntVector2> first, second;
  for_each_vector(t, std::max(t.p1(), t.p4()), [&](Int x, Int y) {
    if (t(x, y) == t.p1()) first.push_back(IntVector2(x, y));
    if (t(x, y) == t.p4()) second.push_back(IntVector2(x, y));
  });
  std::vector<IntMatrix2> out;
  const IntMatrix2 two_t = t.doubled();
  for (const auto& a : first)
    for (const auto& b : second) {
      if (a.dot(two_t * b) != t.p2()) continue;
      IntMatrix2 u;
      u.col(0) = a;
      u.col(1) = b;
      if (is_unimodular(u)) out.push_back(u);
    }
  return out;
}

std::vector<IntVector2> primitive_representations(const HalfIntegralForm& t, Int s) {
  std::vector<IntVector2> out;
  if (s < 1) return out;
  for_each_vector(t, s, [&](Int x, Int y) {
    if (t(x, y) == s && gcd(x, y) == 1) out.push_back(IntVector2(x, y));
  });
  return out;
}

GaussianInt operator*(const GaussianInt& a, const GaussianInt& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

bool divides(const GaussianInt& a, const GaussianInt& b) {
  const Int n = a.norm();
  if (n == 0) return b.norm() == 0;
  // b / a = b * conj(a) / N(a).
  const GaussianInt p = b * GaussianInt{a.re, -a.im};
  return p.re % n == 0 && p.im % n == 0;
}

Int gaussian_phi(const GaussianInt& g) {
  const Int n = g.norm();
  if (n == 0) throw DomainError("gaussian_phi: zero argument");
  Int num = n;
  for (const auto& [p, e] : factorize(n)) {
    if (p == 2) {
      num = num / 2;  // 1 + i, norm 2
    } else if (p % 4 == 3) {
      num = num / (p * p) * (p * p - 1);
    } else {
      Int a = 1;
      while (true) {
        const Int r = p - a * a;
        const Int b = static_cast<Int>(std::llround(std::sqrt(static_cast<double>(r))));
        if (b * b == r) {
          for (const GaussianInt& pi : {GaussianInt{a, b}, GaussianInt{a, -b}})
            if (divides(pi, g)) num = num / p * (p - 1);
          break;
        }
        ++a;
      }
    }
  }
  return num;
}

GOElement::GOElement(Int x_, Int y_, bool reflection_) : x(x_), y(y_), reflection(reflection_) {
  if (x == 0 && y == 0) throw DomainError("GOElement: (x, y) must be non-zero");
}

IntMatrix2 GOElement::matrix() const {
  return reflection ? make_matrix(x, y, y, -x) : make_matrix(x, y, -y, x);
}

int kronecker_symbol(Int a, Int n) {
  static constexpr int tab[8] = {0, 1, 0, -1, 0, -1, 0, 1};
  if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
  if (a % 2 == 0 && n % 2 == 0) return 0;
  int v = 0;
  while (n % 2 == 0) {
    n /= 2;
    ++v;
  }
  int k = (v % 2 == 0) ? 1 : tab[a & 7];
  if (n < 0) {
    n = -n;
    if (a < 0) k = -k;
  }
  // n odd and positive: Jacobi symbol with reciprocity.
  a = mod(a, n);
  while (a != 0) {
    v = 0;
    while (a % 2 == 0) {
      a /= 2;
      ++v;
    }
    if (v % 2 == 1) k *= tab[n & 7];
    if ((a & n & 2) != 0) k = -k;
    const Int r = a;
    a = n % r;
    n = r;
  }
  return n == 1 ? k : 0;
}

bool is_fundamental_discriminant(Int q) {
  if (q == 1) return true;
  if (q == 0) return false;
  if (mod(q, 4) == 1) return is_squarefree(q);
  if (mod(q, 4) != 0) return false;
  const Int m = q / 4;
  const Int r = mod(m, 4);
  return (r == 2 || r == 3) && is_squarefree(m);
}

KroneckerCharacter::KroneckerCharacter(Int q) : q_(q) {
  if (!is_fundamental_discriminant(q))
    throw DomainError(std::to_string(q) + " is not a fundamental discriminant");
}

int kronecker(const KroneckerCharacter& chi, Int n) { return chi(n); }

}  // namespace gsp4
