#include "gsp4/expsums.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

namespace gsp4 {

namespace {

using Vec4 = std::array<Int, 4>;

// Row echelon basis with positive pivots.
struct Echelon {
  std::vector<Vec4> rows;
  std::vector<int> pivots;
};

Echelon echelon(std::vector<Vec4> g) {
  Echelon e;
  std::size_t r = 0;
  for (int col = 0; col < 4 && r < g.size(); ++col) {
    for (;;) {
      // Smallest non-zero entry in this column among the remaining rows.
      std::size_t best = g.size();
      for (std::size_t i = r; i < g.size(); ++i)
        if (g[i][col] != 0 && (best == g.size() || std::abs(g[i][col]) < std::abs(g[best][col])))
          best = i;
      if (best == g.size()) break;
      std::swap(g[r], g[best]);
      bool done = true;
      for (std::size_t i = r + 1; i < g.size(); ++i) {
        const Int q = g[i][col] / g[r][col];
        for (int j = 0; j < 4; ++j) g[i][j] -= q * g[r][j];
        if (g[i][col] != 0) done = false;
      }
      if (done) {
        if (g[r][col] < 0)
          for (int j = 0; j < 4; ++j) g[r][j] = -g[r][j];
        e.rows.push_back(g[r]);
        e.pivots.push_back(col);
        ++r;
        break;
      }
    }
  }
  return e;
}

Vec4 reduce_mod(const Echelon& e, Vec4 v) {
  for (std::size_t i = 0; i < e.rows.size(); ++i) {
    const int p = e.pivots[i];
    const Int h = e.rows[i][p];
    Int q = v[p] / h;
    if (v[p] - q * h < 0) --q;
    for (int j = 0; j < 4; ++j) v[j] -= q * e.rows[i][j];
  }
  return v;
}

Vec4 to_vec(const IntMatrix2& m) { return {m(0, 0), m(0, 1), m(1, 0), m(1, 1)}; }
IntMatrix2 from_vec(const Vec4& v) { return make_matrix(v[0], v[1], v[2], v[3]); }

IntMatrix2 sym(int i) {
  if (i == 0) return make_matrix(1, 0, 0, 0);
  if (i == 1) return make_matrix(0, 1, 1, 0);
  return make_matrix(0, 0, 0, 1);
}

Echelon left_lattice(const IntMatrix2& c) {
  std::vector<Vec4> g;
  for (int i = 0; i < 3; ++i) g.push_back(to_vec(sym(i) * c));
  return echelon(g);
}

Echelon right_lattice(const IntMatrix2& c) {
  std::vector<Vec4> g;
  for (int i = 0; i < 3; ++i) g.push_back(to_vec(c * sym(i)));
  return echelon(g);
}

bool symmetric(const IntMatrix2& m) { return m(0, 1) == m(1, 0); }

// B = C^-T (A^T D - I) when integral.
bool completion(const IntMatrix2& a, const IntMatrix2& c, const IntMatrix2& d, IntMatrix2& b) {
  const Int det_c = det(c);
  const IntMatrix2 cof = adjugate(c).transpose();
  const IntMatrix2 m = cof * (a.transpose() * d - IntMatrix2::Identity());
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      if (m(i, j) % det_c != 0) return false;
  b = m / det_c;
  return true;
}

// Numerator N with tr(A C^-1 Q + C^-1 D T) = N / (2 det C).
Int trace_numerator(const HalfIntegralForm& q, const HalfIntegralForm& t, const IntMatrix2& a,
                    const IntMatrix2& c, const IntMatrix2& d) {
  const IntMatrix2 adj = adjugate(c);
  return (a * adj * q.doubled()).trace() + (adj * d * t.doubled()).trace();
}

constexpr Int kMaxCosets = Int(1) << 26;

void check_cost(Int e1, Int e2) {
  if (e1 * e1 * (e2 / e1) > kMaxCosets)
    throw DomainError("kloosterman: |X(C)| exceeds the enumeration cost guard");
}

}  // namespace

Complex unit_phase(Int num, Int den) {
  if (den == 0) throw DomainError("unit_phase: zero denominator");
  if (den < 0) {
    den = -den;
    num = -num;
  }
  const Int g = gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  num = mod(num, den);
  if (num == 0) return {1.0, 0.0};
  if (2 * num == den) return {-1.0, 0.0};
  if (4 * num == den) return {0.0, 1.0};
  if (4 * num == 3 * den) return {0.0, -1.0};
  const double x = 2.0 * std::numbers::pi * static_cast<double>(num) / static_cast<double>(den);
  return {std::cos(x), std::sin(x)};
}

bool is_symplectic(const IntMatrix2& a, const IntMatrix2& b, const IntMatrix2& c,
                   const IntMatrix2& d) {
  return symmetric(a.transpose() * c) && symmetric(b.transpose() * d) &&
         a.transpose() * d - c.transpose() * b == IntMatrix2::Identity();
}

IntMatrix2 canonical_A(const IntMatrix2& a, const IntMatrix2& c) {
  return from_vec(reduce_mod(left_lattice(c), to_vec(a)));
}

IntMatrix2 canonical_D(const IntMatrix2& d, const IntMatrix2& c) {
  return from_vec(reduce_mod(right_lattice(c), to_vec(d)));
}

std::vector<std::pair<IntMatrix2, IntMatrix2>> canonical_pairs(const CosetFamily& f) {
  const Echelon la = left_lattice(f.C), ld = right_lattice(f.C);
  std::vector<std::pair<Vec4, Vec4>> v;
  for (const auto& r : f.reps) v.emplace_back(reduce_mod(la, to_vec(r.A)), reduce_mod(ld, to_vec(r.D)));
  std::sort(v.begin(), v.end());
  std::vector<std::pair<IntMatrix2, IntMatrix2>> out;
  for (const auto& [a, d] : v) out.emplace_back(from_vec(a), from_vec(d));
  return out;
}

bool is_diagonal_reduced(const IntMatrix2& c) {
  return c(0, 1) == 0 && c(1, 0) == 0 && c(0, 0) > 0 && c(1, 1) > 0 && c(1, 1) % c(0, 0) == 0;
}

bool is_go2(const IntMatrix2& c) {
  if (det(c) == 0) return false;
  const bool rotation = c(1, 0) == -c(0, 1) && c(1, 1) == c(0, 0);
  const bool reflection = c(1, 0) == c(0, 1) && c(1, 1) == -c(0, 0);
  return rotation || reflection;
}

void for_each_diagonal_coset(Int e1, Int e2,
                             const std::function<void(const IntMatrix2&, const IntMatrix2&)>& f) {
  if (e1 < 1 || e2 % e1 != 0) throw DomainError("diagonal coset: need 0 < e1 | e2");
  check_cost(e1, e2);
  const Int c2 = e2 / e1;
  for (Int a1 = 0; a1 < e1; ++a1)
    for (Int a3 = 0; a3 < e1; ++a3)
      for (Int a4 = 0; a4 < e2; ++a4) {
        // Rows of A^T D - I vanish modulo e1 and e2 respectively; the last
        // congruence a4 d4 = 1 - c2 a3 d2 (mod e2) pins d4 given d2.
        const Int g = gcd(a4, e2);
        const Int m = e2 / g;
        const Int inv = inverse_mod(a4 / g, m);
        for (Int d1 = 0; d1 < e1; ++d1)
          for (Int d2 = 0; d2 < e1; ++d2) {
            if (mod(a1 * d1 + c2 * a3 * d2 - 1, e1) != 0) continue;
            if (mod(a3 * d1 + a4 * d2, e1) != 0) continue;
            const Int r = mod(1 - c2 * a3 * d2, e2);
            if (r % g != 0) continue;
            const Int base = mod((r / g) * inv, m);
            for (Int j = 0; j < g; ++j) {
              const Int d4 = base + j * m;
              if (mod(a1 * d2 + a3 * d4, e1) != 0) continue;
              f(make_matrix(a1, c2 * a3, a3, a4), make_matrix(d1, d2, c2 * d2, d4));
            }
          }
      }
}

CosetFamily enumerate_XC(const IntMatrix2& c) {
  if (det(c) == 0) throw DomainError("enumerate_XC: singular matrix C");
  CosetFamily fam;
  fam.C = c;
  auto push = [&](const IntMatrix2& a, const IntMatrix2& d) {
    IntMatrix2 b;
    if (!completion(a, c, d, b)) throw DomainError("enumerate_XC: internal completion failure");
    fam.reps.push_back({a, b, d});
  };
  if (is_diagonal_reduced(c)) {
    for_each_diagonal_coset(c(0, 0), c(1, 1), push);
    return fam;
  }
  if (!is_go2(c)) throw DomainError("enumerate_XC: C must be diagonal-reduced or in GO2; reduce first");
  const bool reflection = c(1, 0) == c(0, 1) && c(1, 1) == -c(0, 0);
  const Int x = c(0, 0), y = c(0, 1);
  const Int dd = gcd(x, y);
  const Int a = x / dd, b = y / dd;
  const Int gam = (a * a + b * b) * dd;
  check_cost(dd, gam);
  const Int det_c = std::abs(det(c));
  const IntMatrix2 cof = adjugate(c).transpose();
  std::vector<IntMatrix2> as, ds;
  for (Int c1 = 1; c1 <= dd; ++c1)
    for (Int a2 = 1; a2 <= dd; ++a2)
      for (Int a1 = 1; a1 <= gam; ++a1) {
        as.push_back(reflection ? make_matrix(a1, a2, c1 * b - a2, a1 - c1 * a)
                                : make_matrix(a1, a2, a2 - c1 * b, -a1 + c1 * a));
      }
  for (Int c2 = 1; c2 <= dd; ++c2)
    for (Int d2 = 1; d2 <= dd; ++d2)
      for (Int d1 = 1; d1 <= gam; ++d1) {
        ds.push_back(reflection ? make_matrix(d1, d2, c2 * b - d2, d1 - c2 * a)
                                : make_matrix(d1, d2 + c2 * b, d2, -d1 + c2 * a));
      }
  for (const auto& am : as)
    for (const auto& dm : ds) {
      const IntMatrix2 m = cof * (am.transpose() * dm - IntMatrix2::Identity());
      if (m.unaryExpr([&](Int v) { return mod(v, det_c); }).isZero()) push(am, dm);
    }
  return fam;
}

CosetFamily brute_force_XC(const IntMatrix2& c, Int modulus_box) {
  const Int det_c = std::abs(det(c));
  if (det_c == 0) throw DomainError("brute_force_XC: singular matrix C");
  if (det_c > 16) throw DomainError("brute_force_XC: |det C| > 16 exceeds the cost guard");
  if (modulus_box < det_c) throw DomainError("brute_force_XC: box smaller than |det C|");
  if (modulus_box > 32) throw DomainError("brute_force_XC: box exceeds the cost guard");
  const Echelon la = left_lattice(c), ld = right_lattice(c);
  std::set<Vec4> as, ds;
  // Entries range over (-box, box): the symmetry constraints may force signs.
  const Int lo = 1 - modulus_box;
  for (Int i = lo; i < modulus_box; ++i)
    for (Int j = lo; j < modulus_box; ++j)
      for (Int k = lo; k < modulus_box; ++k)
        for (Int l = lo; l < modulus_box; ++l) {
          const IntMatrix2 m = make_matrix(i, j, k, l);
          if (symmetric(m.transpose() * c)) as.insert(reduce_mod(la, to_vec(m)));
          if (symmetric(c * m.transpose())) ds.insert(reduce_mod(ld, to_vec(m)));
        }
  CosetFamily fam;
  fam.C = c;
  for (const auto& av : as)
    for (const auto& dv : ds) {
      const IntMatrix2 a = from_vec(av), d = from_vec(dv);
      // Solve A^T D - C^T B = I for an integral B and test the whole block.
      const IntMatrix2 rhs = a.transpose() * d - IntMatrix2::Identity();
      const IntMatrix2 num = adjugate(c.transpose()) * rhs;
      if (num.unaryExpr([&](Int v) { return mod(v, det_c); }).isZero()) {
        const IntMatrix2 b = num / det(c);
        if (is_symplectic(a, b, c, d)) fam.reps.push_back({a, b, d});
      }
    }
  return fam;
}

Complex kloosterman_diagonal(const HalfIntegralForm& q, const HalfIntegralForm& t, Int e1, Int e2) {
  const IntMatrix2 c = make_matrix(e1, 0, 0, e2);
  Complex sum = 0.0;
  const Int den = 2 * e1 * e2;
  for_each_diagonal_coset(e1, e2, [&](const IntMatrix2& a, const IntMatrix2& d) {
    sum += unit_phase(trace_numerator(q, t, a, c, d), den);
  });
  return sum;
}

Complex kloosterman_K(const HalfIntegralForm& q, const HalfIntegralForm& t, const IntMatrix2& c) {
  const Int det_c = det(c);
  if (det_c == 0) throw DomainError("kloosterman_K: singular matrix C");
  if (is_diagonal_reduced(c)) return kloosterman_diagonal(q, t, c(0, 0), c(1, 1));
  if (is_go2(c)) {
    Complex sum = 0.0;
    for (const auto& r : enumerate_XC(c).reps) sum += unit_phase(trace_numerator(q, t, r.A, c, r.D), 2 * det_c);
    return sum;
  }
  // U C V = diag(e1, e2): K(Q, T; C) = K(U Q U^T, V^T T V; diag(e1, e2)).
  const SmithForm s = smith_form(c);
  return kloosterman_diagonal(transform_rows(q, s.U), transform(t, s.V), s.e1, s.e2);
}

Complex salie_H(int sign, const HalfIntegralForm& p, const HalfIntegralForm& s, Int c) {
  if (c < 1) throw DomainError("salie_H: modulus must be positive");
  if (sign != 1 && sign != -1) throw DomainError("salie_H: sign must be +1 or -1");
  if (s.p4() != p.p4()) return 0.0;
  const Int s4 = s.p4();
  const Int den = 2 * c * s4;
  const Int shift = -sign * p.p2() * s.p2();
  // Count the integral numerators modulo c first; only c phases are evaluated.
  std::vector<Int> count(static_cast<std::size_t>(c), 0);
  const Int s4c = mod(s4, c), p2c = mod(sign * p.p2(), c), s2c = mod(s.p2(), c);
  const Int p1c = mod(p.p1(), c), s1c = mod(s.p1(), c);
  for (Int d1 = 0; d1 < c; ++d1) {
    if (gcd(d1, c) != 1) continue;
    const Int db = inverse_mod(d1, c);
    const Int quad = db * s4c % c;
    const Int lin = mod(s2c - db * p2c, c);
    const Int base = (db * p1c + d1 * s1c) % c;
    for (Int d2 = 0; d2 < c; ++d2) ++count[static_cast<std::size_t>((quad * (d2 * d2 % c) + lin * d2 + base) % c)];
  }
  Complex sum = 0.0;
  for (Int n = 0; n < c; ++n)
    if (count[static_cast<std::size_t>(n)] != 0)
      sum += static_cast<double>(count[static_cast<std::size_t>(n)]) * unit_phase(2 * s4 * n + shift, den);
  return sum;
}

Complex curly_K(const GOElement& g, const KroneckerCharacter& q1, const KroneckerCharacter& q2) {
  if (gcd(q1.q(), q2.q()) != 1) throw DomainError("curly_K: q1 and q2 must be coprime");
  const IntMatrix2 c = g.matrix();
  const Int dc = g.abs_det();
  const CosetFamily fam = enumerate_XC(c);
  // g_q(x) = sum_{mu mod [q, det C]} chi_q(mu) e(mu x / |det C|), tabulated for x mod |det C|.
  auto table = [&](const KroneckerCharacter& chi) {
    const Int l = lcm(chi.modulus(), dc);
    std::vector<Complex> tab(static_cast<std::size_t>(dc));
    for (Int x = 0; x < dc; ++x) {
      Complex s = 0.0;
      for (Int mu = 0; mu < l; ++mu) {
        const int v = chi(mu);
        if (v != 0) s += static_cast<double>(v) * unit_phase(mu * x, dc);
      }
      tab[static_cast<std::size_t>(x)] = s;
    }
    return tab;
  };
  const auto g1 = table(q1), g2 = table(q2);
  Complex sum = 0.0;
  for (const auto& r : fam.reps) {
    const Int t1 = mod((r.A * c.transpose()).trace(), dc);
    const Int t2 = mod((c.transpose() * r.D).trace(), dc);
    sum += g1[static_cast<std::size_t>(t1)] * g2[static_cast<std::size_t>(t2)];
  }
  return sum;
}

Complex curly_K_closed(const GOElement& g, const KroneckerCharacter& q1, const KroneckerCharacter& q2) {
  if (gcd(q1.q(), q2.q()) != 1) throw DomainError("curly_K_closed: q1 and q2 must be coprime");
  if (!q1.is_principal() || !q2.is_principal()) return 0.0;
  const double d = static_cast<double>(g.abs_det());
  return d * d * static_cast<double>(gaussian_phi(g.gaussian()));
}

}  // namespace gsp4
