#include "gsp4/moments.hpp"

#include "gsp4/bessel.hpp"
#include "gsp4/lfun.hpp"
#include "gsp4/weight.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

namespace gsp4 {

namespace {

// Upper bound for zeta(sigma), sigma > 1.
double zeta_upper(double sigma) {
  return 1.0 + std::pow(2.0, -sigma) + std::pow(2.0, 1.0 - sigma) / (sigma - 1.0);
}

// Upper bound for sum_{n > n0} d(n) n^{-sigma}, sigma > 3/2, using d(n) <= 2 sqrt(n).
double divisor_tail(Int n0, double sigma) {
  if (n0 <= 0) {
    const double z = zeta_upper(sigma);
    return z * z;
  }
  return 2.0 * std::pow(double(n0), 1.5 - sigma) / (sigma - 1.5);
}

void check_weight(int k) {
  if (k < 6 || k % 2 != 0) throw DomainError("moments: k must be even and at least 6");
}

// |W(x)| <= M(A) x^{-A} for every A on a grid; all bounds are kept in logs.
class WeightBounds {
 public:
  explicit WeightBounds(const WeightKernel& wk) {
    for (double a = 1.5; a <= 4.0 * wk.k() + 40.0; a += 1.0) {
      const double m = wk.majorant_constant(a);
      if (std::isfinite(m) && m > 0.0) grid_.emplace_back(a, std::log(m));
    }
    if (grid_.empty()) throw DomainError("moments: no finite weight majorant");
  }
  const std::vector<std::pair<double, double>>& grid() const { return grid_; }

  // Bound for sum_{n > n0} d(n) n^{-1} |W(n y)|, y > 0.
  double n_tail(double y, Int n0) const {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& [a, lm] : grid_)
      best = std::min(best, std::exp(lm - a * std::log(y)) * divisor_tail(n0, a + 1.0));
    return best;
  }

 private:
  std::vector<std::pair<double, double>> grid_;
};

// Bound for |K(m1 I, m2 I) - diagonal| in terms of P = m1 m2: both rank tails
// with zero cutoffs, monotone in P, and growing at most like P^nu.
class OffDiagonalBound {
 public:
  OffDiagonalBound(int k, Int N) : k_(k), N_(N), nu_(BesselOrder::ell(k).value()) {}
  double nu() const { return nu_; }

  double operator()(Int p) {
    if (p < 1) throw DomainError("OffDiagonalBound: product must be positive");
    // Largest grid point p0 <= p; the grid has ratio at most 5/4.
    Int p0 = 1;
    while (true) {
      const Int next = std::max(p0 + 1, (5 * p0 + 3) / 4);
      if (next > p) break;
      p0 = next;
    }
    return value_at(p0) * std::pow(double(p) / double(p0), nu_);
  }
  double at_one() { return value_at(1); }

 private:
  double value_at(Int p) {
    auto it = cache_.find(p);
    if (it != cache_.end()) return it->second;
    const HalfIntegralForm t = identity_form(), q = scaled_identity(p);
    // For (m1 I, m2 I) the rank-1 representation factor is at most 3 times
    // the one of (I, P I); the rank-2 bound depends on P only.
    const double b = 3.0 * rank1_tail_bound(t, q, k_, N_, 0) + rank2_tail_bound(t, q, k_, N_, 0, 0);
    cache_.emplace(p, b);
    return b;
  }
  int k_;
  Int N_;
  double nu_;
  std::map<Int, double> cache_;
};

// sum_{n <= n_max} r_q(n) n^{-1/2} W(n m / conductor) and the bound for the rest;
// r_q(n) already carries one factor n^{-1/2}.
struct NSum {
  double value = 0.0;
  double tail = 0.0;
  Int n_max = 0;
};

struct NSums {
  const WeightKernel& wk;
  const WeightBounds& wb;
  KroneckerCharacter q;
  double conductor;
  double x_max;

  NSum operator()(Int m) const {
    NSum s;
    const double y = double(m) / conductor;
    s.n_max = static_cast<Int>(std::floor(x_max / y));
    for (Int n = 1; n <= s.n_max; ++n) {
      const double r = r_coeff(q, n);
      if (r != 0.0) s.value += r * weightW(wk, double(n) * y) / std::sqrt(double(n));
    }
    s.tail = wb.n_tail(y, s.n_max);
    return s;
  }
  // Bound for the whole n-sum.
  double bound(Int m) const { return wb.n_tail(double(m) / conductor, 0); }
};

// Smallest x (on a grid) with n_tail(x, 0) <= target: beyond it W is negligible
// for every n.
double choose_x_max(const WeightBounds& wb, double target) {
  for (double x = 1.0; x < 1e6; x *= 1.05)
    if (wb.n_tail(x, 0) <= target) return x;
  throw DomainError("moments: weight majorants never reach the target");
}

double moment_main_term(int k, const KroneckerCharacter& q, Int N) {
  if (q.is_principal()) {
    if (N == 1) return first_moment_main(k).digamma_form;
    if (N % 4 == 3) return level_main(k, N);
  }
  return first_moment_residue(k, q, N);
}

void check_level(Int N) {
  if (N < 1 || (N > 1 && !is_prime(N))) throw DomainError("moments: level must be 1 or a prime");
}

}  // namespace

WeightAverage avg_weight(int k, Int N, const TruncationPolicy& policy) {
  WeightAverage a;
  a.kernel = kernel(identity_form(), identity_form(), k, N, policy);
  a.value = a.kernel.total / 8.0;
  a.tail = a.kernel.tail_bound / 8.0;
  return a;
}

MomentReport first_moment_geometric(int k, const KroneckerCharacter& q, Int N, const MomentPolicy& policy) {
  check_weight(k);
  check_level(N);
  MomentReport rep;
  rep.kind = "moment1";
  rep.k = k;
  rep.q1 = q.q();
  rep.q2 = 1;
  rep.N = N;
  rep.main = moment_main_term(k, q, N);
  const double target = policy.eps * std::max(1.0, std::abs(rep.main));

  const WeightKernel wk(k);
  const WeightBounds wb(wk);
  const double conductor = double(q.modulus()) * double(q.modulus()) * double(N);
  rep.x_max = choose_x_max(wb, 1e-3 * target);
  const NSums nsum{wk, wb, q, conductor, rep.x_max};
  OffDiagonalBound offdiag(k, N);

  // m_max: the bound for all m > m_max stays below a quarter of the target.
  // Far m use the P^nu growth of the kernel bound with one exponent A.
  const double nu = offdiag.nu();
  Int m_far = std::max<Int>(64, static_cast<Int>(4.0 * rep.x_max * conductor));
  double far = std::numeric_limits<double>::infinity();
  for (int attempt = 0; attempt < 8 && far > 0.125 * target; ++attempt, m_far *= 2) {
    const double b = offdiag(m_far) * std::pow(double(m_far), -nu);
    far = std::numeric_limits<double>::infinity();
    for (const auto& [a, lm] : wb.grid()) {
      const double e = a + 0.5 - nu;
      if (e <= 1.0) continue;
      const double z = zeta_upper(a + 1.0);
      far = std::min(far, 0.25 * b * std::exp(lm + a * std::log(conductor)) * z * z *
                              std::pow(double(m_far), 1.0 - e) / (e - 1.0));
    }
  }
  m_far /= 2;
  double m_tail = far;
  Int m_max = m_far;
  while (m_max > 1) {
    const double c = q(m_max) == 0 ? 0.0 : 0.25 * offdiag(m_max) * nsum.bound(m_max) / std::sqrt(double(m_max));
    if (m_tail + c > 0.25 * target) break;
    m_tail += c;
    --m_max;
  }
  rep.m_max = m_max;

  double kernel_tail = 0.0, n_tail = 0.0;
  bool kernels_ok = true;
  for (Int m = 1; m <= m_max; ++m) {
    const int chi = q(m);
    if (chi == 0) continue;
    const NSum s = nsum(m);
    const KernelValue kv = kernel(identity_form(), scaled_identity(m), k, N, policy.kernel);
    ++rep.kernels;
    kernels_ok = kernels_ok && kv.certified;
    const double w = 0.25 / std::sqrt(double(m));
    rep.geometric += w * chi * s.value * kv.total;
    rep.diagonal += w * chi * s.value * kv.diagonal;
    kernel_tail += w * std::abs(s.value) * kv.tail_bound;
    n_tail += w * (std::abs(kv.total) + kv.tail_bound) * s.tail;
  }
  rep.sum_tail = m_tail + n_tail;
  rep.tail = rep.sum_tail + kernel_tail;
  rep.residual = rep.geometric - rep.main;
  rep.certified = kernels_ok && rep.sum_tail <= target;
  return rep;
}

MomentReport second_moment_geometric(int k, const KroneckerCharacter& q1, const KroneckerCharacter& q2, Int N,
                                     const MomentPolicy& policy) {
  check_weight(k);
  check_level(N);
  if (gcd(q1.q(), q2.q()) != 1) throw DomainError("second moment: q1 and q2 must be coprime");
  if (N != 1) throw DomainError("second moment: only level 1 is supported");
  MomentReport rep;
  rep.kind = policy.diagonal_only ? "moment2-diagonal" : "moment2";
  rep.k = k;
  rep.q1 = q1.q();
  rep.q2 = q2.q();
  rep.N = N;
  rep.main = second_moment_main({k, q1, q2, N}).value;
  const double target = policy.eps * std::max(1.0, std::abs(rep.main));

  const WeightKernel wk(k);
  const WeightBounds wb(wk);
  rep.x_max = choose_x_max(wb, 1e-3 * target);
  const double c1 = double(q1.modulus() * q1.modulus()), c2 = double(q2.modulus() * q2.modulus());
  const NSums ns1{wk, wb, q1, c1, rep.x_max}, ns2{wk, wb, q2, c2, rep.x_max};
  OffDiagonalBound offdiag(k, N);
  const double nu = offdiag.nu();

  // Box [1, M]^2 with M beyond the support of both n-sums; outside it every
  // term is bounded with the P^nu growth and one exponent A per factor.
  const Int box = std::max<Int>(8, static_cast<Int>(std::ceil(4.0 * rep.x_max * std::max(c1, c2))));
  double outside = std::numeric_limits<double>::infinity();
  double outside_diag = std::numeric_limits<double>::infinity();
  {
    const double b1 = offdiag.at_one();
    for (const auto& [a, lm] : wb.grid()) {
      const double e = a + 0.5 - nu;
      if (e <= 1.0) continue;
      const double z = zeta_upper(a + 1.0);
      const double head = std::exp(lm + a * std::log(std::max(c1, c2))) * z * z;
      const double zfull = zeta_upper(e);
      double zpart = 0.0;
      for (Int m = 1; m <= box; ++m) zpart += std::pow(double(m), -e);
      // sum over pairs outside the box of (m1 m2)^{-e} <= 2 zfull (zfull - zpart).
      const double pairs = 2.0 * zfull * std::max(0.0, zfull - zpart);
      outside = std::min(outside, 0.5 * head * head * b1 * pairs);
      outside_diag = std::min(outside_diag, 2.0 * head * head * std::pow(double(box), -2.0 * a) / a);
    }
  }

  std::vector<NSum> s1(static_cast<std::size_t>(box) + 1), s2(static_cast<std::size_t>(box) + 1);
  for (Int m = 1; m <= box; ++m) {
    if (q1(m) != 0) s1[m] = ns1(m);
    if (q2(m) != 0) s2[m] = ns2(m);
  }
  auto absval = [](const NSum& s) { return std::abs(s.value) + s.tail; };

  // Diagonal kernel terms: K contains 8 exactly when m1 = m2.
  double n_tail = 0.0;
  for (Int m = 1; m <= box; ++m) {
    const int chi = q1(m) * q2(m);
    if (chi == 0) continue;
    const double w = 4.0 / double(m);
    rep.diagonal += w * chi * s1[m].value * s2[m].value;
    n_tail += w * (absval(s1[m]) * absval(s2[m]) - std::abs(s1[m].value * s2[m].value));
  }

  // Off-diagonal terms: keep the pairs with the largest bounds until the rest
  // fits in a quarter of the target.
  struct Pair {
    Int m1, m2;
    double bound;
  };
  std::vector<Pair> pairs;
  for (Int m1 = 1; m1 <= box; ++m1) {
    if (q1(m1) == 0) continue;
    for (Int m2 = 1; m2 <= box; ++m2) {
      if (q2(m2) == 0) continue;
      const double b = 0.5 * absval(s1[m1]) * absval(s2[m2]) * offdiag(m1 * m2) / std::sqrt(double(m1 * m2));
      if (b > 0.0) pairs.push_back({m1, m2, b});
    }
  }
  std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
    return a.bound != b.bound ? a.bound > b.bound : std::tie(a.m1, a.m2) < std::tie(b.m1, b.m2);
  });
  double dropped = outside;
  std::size_t keep = pairs.size();
  while (keep > 0 && dropped + pairs[keep - 1].bound <= 0.25 * target) dropped += pairs[--keep].bound;
  pairs.resize(keep);
  rep.m_max = box;

  double kernel_tail = 0.0;
  bool kernels_ok = true;
  if (policy.diagonal_only) {
    dropped = 0.0;
  } else {
    if (pairs.size() > policy.max_kernels)
      throw DomainError("second moment: " + std::to_string(pairs.size()) + " kernels exceed the budget of " +
                        std::to_string(policy.max_kernels));
    // The kernel is symmetric, so each unordered pair is evaluated once.
    std::map<std::pair<Int, Int>, KernelValue> cache;
    double off = 0.0;
    for (const auto& p : pairs) {
      const auto key = std::minmax(p.m1, p.m2);
      auto it = cache.find(key);
      if (it == cache.end())
        it = cache.emplace(key, kernel(scaled_identity(key.first), scaled_identity(key.second), k, N,
                                       policy.kernel)).first;
      const KernelValue& kv = it->second;
      kernels_ok = kernels_ok && kv.certified;
      const double w = 0.5 * q1(p.m1) * q2(p.m2) / std::sqrt(double(p.m1 * p.m2));
      const double od = kv.rank1 + kv.rank2;
      off += w * s1[p.m1].value * s2[p.m2].value * od;
      kernel_tail += std::abs(w) * absval(s1[p.m1]) * absval(s2[p.m2]) * kv.tail_bound;
      n_tail += std::abs(w) * (absval(s1[p.m1]) * absval(s2[p.m2]) - std::abs(s1[p.m1].value * s2[p.m2].value)) *
                std::abs(od);
    }
    rep.kernels = cache.size();
    rep.geometric = off;
  }
  rep.geometric += rep.diagonal;
  rep.sum_tail = outside_diag + dropped + n_tail;
  rep.tail = rep.sum_tail + kernel_tail;
  rep.residual = rep.geometric - rep.main;
  rep.certified = kernels_ok && rep.sum_tail <= target;
  return rep;
}

std::vector<SweepRow> sweep(const std::string& op, const std::vector<int>& ks, const std::vector<Int>& Ns,
                            const KroneckerCharacter& q1, const KroneckerCharacter& q2, const MomentPolicy& policy) {
  if (op != "moment1" && op != "moment2" && op != "avg") throw DomainError("sweep: unknown operation " + op);
  if (ks.empty() || Ns.empty()) throw DomainError("sweep: empty range");
  std::vector<SweepRow> rows;
  for (const int k : ks)
    for (const Int N : Ns) {
      SweepRow row;
      row.report.kind = op;
      row.report.k = k;
      row.report.q1 = q1.q();
      row.report.q2 = q2.q();
      row.report.N = N;
      try {
        if (op == "moment1") {
          row.report = first_moment_geometric(k, q1, N, policy);
        } else if (op == "moment2") {
          row.report = second_moment_geometric(k, q1, q2, N, policy);
        } else {
          const WeightAverage a = avg_weight(k, N, policy.kernel);
          row.report.geometric = a.value;
          row.report.main = (k == 6 || k == 8) ? 0.0 : 1.0;
          row.report.residual = a.value - row.report.main;
          row.report.tail = a.tail;
          row.report.kernels = 1;
          row.report.certified = a.kernel.certified;
        }
      } catch (const std::exception& e) {
        row.error = e.what();
      }
      rows.push_back(row);
    }
  return rows;
}

std::string sweep_csv_header() {
  return "op,k,q1,q2,N,geometric,main,residual,residual_k,residual_sqrt_k,residual_N,tail,m_max,kernels,"
         "certified,error";
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  std::ostringstream s;
  s << std::setprecision(17);
  s << sweep_csv_header() << '\n';
  for (const auto& row : rows) {
    const MomentReport& r = row.report;
    const bool ok = row.error.empty();
    auto num = [&](double v) {
      if (ok) s << v;
      s << ',';
    };
    s << r.kind << ',' << r.k << ',' << r.q1 << ',' << r.q2 << ',' << r.N << ',';
    num(r.geometric);
    num(r.main);
    num(r.residual);
    num(r.residual * r.k);
    num(r.residual * std::sqrt(double(r.k)));
    num(r.residual * double(r.N));
    num(r.tail);
    s << r.m_max << ',' << r.kernels << ',' << (r.certified ? 1 : 0) << ',';
    std::string err = row.error;
    std::replace(err.begin(), err.end(), ',', ';');
    std::replace(err.begin(), err.end(), '\n', ' ');
    s << err << '\n';
  }
  out << s.str();
}

}  // namespace gsp4
