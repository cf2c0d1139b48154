#include "gsp4/petersson.hpp"

#include "gsp4/bessel.hpp"
#include "gsp4/expsums.hpp"
#include "gsp4/jcal.hpp"
#include "gsp4/parallel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>

namespace gsp4 {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kRank2Constant = 8.0 * kPi * kPi;

struct Egcd {
  Int g, x, y;  // a x + b y = g >= 0
};

Egcd ext_gcd(Int a, Int b) {
  Int x0 = 1, y0 = 0, x1 = 0, y1 = 1;
  while (b != 0) {
    const Int q = a / b;
    std::tie(a, b) = std::make_pair(b, a - q * b);
    std::tie(x0, x1) = std::make_pair(x1, x0 - q * x1);
    std::tie(y0, y1) = std::make_pair(y1, y0 - q * y1);
  }
  if (a < 0) return {-a, -x0, -y0};
  return {a, x0, y0};
}

Int floor_div(Int a, Int b) {
  Int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

Int ceil_div(Int a, Int b) { return -floor_div(-a, b); }

double wallis(double p) {
  return 0.5 * std::sqrt(kPi) * std::exp(gamma_ln(0.5 * (p + 1.0)) - gamma_ln(0.5 * p + 1.0));
}

void check_inputs(int k, Int N) {
  BesselOrder::ell(k);
  if (N < 1) throw DomainError("kernel: level must be positive");
  if (N > 1 && !is_prime(N)) throw DomainError("kernel: level must be 1 or a prime");
}

// Majorants of J_l and of Jcal_l with the Gamma factors evaluated once.
struct Majorants {
  double nu;
  double lg;     // log Gamma(nu + 1)
  double jsup;   // sup |J_nu| <= min(1, 0.6749 nu^{-1/3})
  double w1;     // wallis(nu + 1)
  double w2;     // wallis(2 nu + 1)

  explicit Majorants(int k)
      : nu(BesselOrder::ell(k).value()),
        lg(gamma_ln(nu + 1.0)),
        jsup(std::min(1.0, 0.6749 * std::pow(nu, -1.0 / 3.0))),
        w1(wallis(nu + 1.0)),
        w2(wallis(2.0 * nu + 1.0)) {}

  // |J_nu(x)|.
  double bessel(double x) const {
    if (x <= 0.0) return 0.0;
    const double series = std::exp(nu * std::log(0.5 * x) - lg);
    return std::min({1.0, series, 0.7858 * std::pow(x, -1.0 / 3.0), jsup});
  }
  // |Jcal| when s1 <= s (any s2).
  double jcal_small(double s) const {
    if (s <= 0.0) return 0.0;
    return jsup * std::min(jsup, std::exp(nu * std::log(2.0 * kPi * s) - lg) * w1);
  }
  // |Jcal| when s1 s2 <= p.
  double jcal_product(double p) const {
    if (p <= 0.0) return 0.0;
    return std::exp(nu * std::log(4.0 * kPi * kPi * p) - 2.0 * lg) * w2;
  }
};

double shell_size(Int n) {
  const double a = 2.0 * n + 1.0, b = 2.0 * n - 1.0;
  return a * a * a * a - b * b * b * b;
}

// Matrices with max-entry norm n and |det| <= y: one entry is +-n (8 choices),
// two more are free and the last lies in an interval of length 2y / n.
double shell_count(Int n, double y) {
  const double a = 2.0 * n + 1.0;
  return std::min(shell_size(n), 8.0 * a * a * (2.0 * y / n + 1.0));
}

const std::vector<int>& divisor_counts() {
  static const std::vector<int> d = [] {
    std::vector<int> v(1 << 16, 0);
    for (std::size_t i = 1; i < v.size(); ++i)
      for (std::size_t j = i; j < v.size(); j += i) ++v[j];
    return v;
  }();
  return d;
}

double lambda_max(const HalfIntegralForm& f) { return f.max_eigenvalue(); }

// The sign convention for U modulo +-1.
bool canonical_sign(Int x, Int y) { return x > 0 || (x == 0 && y > 0); }

struct Rank1Pair {
  HalfIntegralForm p;
  HalfIntegralForm s;
};

std::vector<Rank1Pair> rank1_pairs(const HalfIntegralForm& t, const HalfIntegralForm& q, Int s, Int shift) {
  std::vector<Rank1Pair> out;
  const auto us = primitive_representations(q, s);
  if (us.empty()) return out;
  const auto ws = primitive_representations(t, s);
  for (const auto& u : us) {
    if (!canonical_sign(u(0), u(1))) continue;
    const HalfIntegralForm p = transform_rows(q, complete_bottom_row(u(0), u(1), shift));
    for (const auto& w : ws) {
      // (-v3, v1) = w.
      const IntMatrix2 v = complete_first_column(w(1), -w(0), shift);
      out.push_back({p, transform_rows(t, unimodular_inverse(v))});
    }
  }
  return out;
}

}  // namespace

IntMatrix2 complete_bottom_row(Int u3, Int u4, Int shift) {
  // x u4 - y u3 = 1.
  const Egcd e = ext_gcd(u4, -u3);
  if (e.g != 1) throw DomainError("complete_bottom_row: row is not primitive");
  return make_matrix(e.x + shift * u3, e.y + shift * u4, u3, u4);
}

IntMatrix2 complete_first_column(Int v1, Int v3, Int shift) {
  // a v1 - b v3 = 1 with V = (v1 b; v3 a).
  const Egcd e = ext_gcd(v1, -v3);
  if (e.g != 1) throw DomainError("complete_first_column: column is not primitive");
  return make_matrix(v1, e.y + shift * v1, v3, e.x + shift * v3);
}

Complex rank1_salie_total(const HalfIntegralForm& t, const HalfIntegralForm& q, Int s, Int c, Int shift) {
  Complex sum = 0.0;
  for (const auto& pr : rank1_pairs(t, q, s, shift))
    sum += salie_H(1, pr.p, pr.s, c) + salie_H(-1, pr.p, pr.s, c);
  return sum;
}

double rank1_tail_bound(const HalfIntegralForm& t, const HalfIntegralForm& q, int k, Int N, Int cs_max) {
  check_inputs(k, N);
  const Majorants mj(k);
  const double g = std::sqrt(t.det() * q.det());
  // Primitive representations of s by F number at most 2 (2 sqrt(s p4 / det F) + 1),
  // so r_Q(s) r_T(s) / s <= rho below.
  const double rho = 4.0 * (2.0 * std::sqrt(q.p4() / q.det()) + 1.0) * (2.0 * std::sqrt(t.p4() / t.det()) + 1.0);
  // Terms with c s = n: sqrt(2) pi n^{1/2} |J(4 pi g / n)| sum_{s | n} r_Q(s) r_T(s) / s.
  const auto& dc = divisor_counts();
  const Int n1 = std::max<Int>(cs_max + 1, static_cast<Int>(dc.size()) - 1);
  double sum = 0.0;
  for (Int n = cs_max + 1; n <= n1; ++n) {
    const double d = n < static_cast<Int>(dc.size()) ? dc[static_cast<std::size_t>(n)] : 2.0 * std::sqrt(double(n));
    sum += std::sqrt(double(n)) * d * mj.bessel(4.0 * kPi * g / n);
  }
  // n > n1: d(n) <= 2 sqrt(n) and |J(x)| <= (x/2)^nu / Gamma(nu + 1).
  sum += 2.0 * std::exp(mj.nu * std::log(2.0 * kPi * g) - mj.lg) * std::pow(double(n1), 2.0 - mj.nu) / (mj.nu - 2.0);
  return std::sqrt(2.0) * kPi * rho * sum;
}

double rank2_tail_bound(const HalfIntegralForm& t, const HalfIntegralForm& q, int k, Int N, Int norm_max,
                        Int det_max) {
  check_inputs(k, N);
  const Majorants mj(k);
  const double a = std::sqrt(lambda_max(t) * lambda_max(q));
  const double g = std::sqrt(t.det() * q.det());
  const double nd = static_cast<double>(N);
  // C = N C'; norms and determinants below are those of C'.
  const Int rp = norm_max / N;
  const Int yp = det_max / (N * N);
  constexpr Int kExplicit = 4096;
  const Int n0 = std::max(rp + 1, kExplicit);
  double tail = 0.0;
  for (Int n = 1; n <= n0; ++n) {
    const double s_small = mj.jcal_small(a / (nd * n));
    const double max_det = 2.0 * double(n) * double(n);
    double lo = n <= rp ? double(yp) + 1.0 : 1.0;
    while (lo <= max_det) {
      const double hi = 2.0 * lo - 1.0;
      const double bound = std::min(s_small, mj.jcal_product(g / (nd * nd * lo)));
      tail += shell_count(n, hi) * bound;
      lo *= 2.0;
    }
  }
  // n > n0: shell size <= 80 n^3 with the small-argument bound.
  tail += mj.jsup * mj.w1 * std::exp(mj.nu * std::log(2.0 * kPi * a / nd) - mj.lg) * 80.0 *
          std::pow(double(n0), 4.0 - mj.nu) / (mj.nu - 4.0);
  return kRank2Constant * tail;
}

TruncationPolicy certify_tails(const HalfIntegralForm& t, const HalfIntegralForm& q, int k, Int N,
                               const TruncationPolicy& policy) {
  check_inputs(k, N);
  if (!(policy.eps > 0.0)) throw DomainError("certify_tails: eps must be positive");
  TruncationPolicy out = policy;
  const double share = 0.25 * policy.eps;
  if (out.rank1_cs_max == 0) {
    // Tails decrease in the cutoff: bisect on [0, cap].
    Int lo = 0, hi = policy.rank1_cs_cap;
    if (rank1_tail_bound(t, q, k, N, hi) > share) {
      out.rank1_cs_max = hi;
    } else {
      while (lo < hi) {
        const Int mid = (lo + hi) / 2;
        if (rank1_tail_bound(t, q, k, N, mid) <= share) hi = mid; else lo = mid + 1;
      }
      out.rank1_cs_max = lo;
    }
  }
  if (out.rank2_norm_max == 0 && out.rank2_det_max == 0) {
    const Int rcap = policy.rank2_norm_cap / N, ycap = policy.rank2_det_cap / (N * N);
    auto tail = [&](Int rp, Int yp) { return rank2_tail_bound(t, q, k, N, rp * N, yp * N * N); };
    Int rp = 0;
    while (rp < rcap && tail(rp, ycap) > share) ++rp;
    Int lo = 0, hi = ycap;
    if (tail(rp, hi) <= share) {
      while (lo < hi) {
        const Int mid = (lo + hi) / 2;
        if (tail(rp, mid) <= share) hi = mid; else lo = mid + 1;
      }
    }
    out.rank2_norm_max = rp * N;
    out.rank2_det_max = (rp == 0 ? 0 : hi) * N * N;
  }
  return out;
}

namespace {

struct Rank1Result {
  double value = 0.0;
  double skipped = 0.0;
  std::size_t terms = 0;
};

Rank1Result rank1_sum(const HalfIntegralForm& t, const HalfIntegralForm& q, int k, Int N, Int cs_max,
                      double skip) {
  Rank1Result r;
  if (cs_max < N) return r;
  const Majorants mj(k);
  const BesselOrder ell = BesselOrder::ell(k);
  const double g = std::sqrt(t.det() * q.det());
  const double sign = (k / 2) % 2 == 0 ? 1.0 : -1.0;
  std::vector<Int> ss;
  for (Int s = 1; s * N <= cs_max; ++s) ss.push_back(s);
  std::vector<Rank1Result> parts(ss.size());
  parallel_for(ss.size(), [&](std::size_t i) {
    const Int s = ss[i];
    const auto pairs = rank1_pairs(t, q, s, 0);
    if (pairs.empty()) return;
    Rank1Result& part = parts[i];
    for (Int c = N; c * s <= cs_max; c += N) {
      const double x = 4.0 * kPi * g / (double(c) * double(s));
      const double scale = std::sqrt(2.0) * kPi / (std::pow(double(c), 1.5) * std::sqrt(double(s)));
      const double bound = scale * double(c) * double(c) * 2.0 * pairs.size() * mj.bessel(x);
      if (bound < skip) {
        part.skipped += bound;
        continue;
      }
      Complex h = 0.0;
      for (const auto& pr : pairs) h += salie_H(1, pr.p, pr.s, c) + salie_H(-1, pr.p, pr.s, c);
      part.value += sign * scale * h.real() * besselJ(ell, x);
      ++part.terms;
    }
  });
  for (const auto& p : parts) {
    r.value += p.value;
    r.skipped += p.skipped;
    r.terms += p.terms;
  }
  return r;
}

struct Rank2Result {
  double value = 0.0;
  double skipped = 0.0;
  std::size_t terms = 0;
};

// Key of K(Q', T'; diag(e1, e2)): the phases only see q1, q2, t1, t2 modulo
// e1 and q4, t4 modulo e2. For e1 = 1 the sum is the classical Kloosterman
// sum S(q4, t4; e2) = S(1, q4 t4; e2) when q4 is a unit.
using KKey = std::array<Int, 8>;

KKey kloosterman_key(Int e1, Int e2, const HalfIntegralForm& q, const HalfIntegralForm& t) {
  if (e1 == 1 && gcd(q.p4(), e2) == 1) return {1, e2, 0, 0, 1, 0, 0, mod(q.p4() * mod(t.p4(), e2), e2)};
  return {e1, e2, mod(q.p1(), e1), mod(q.p2(), e1), mod(q.p4(), e2),
          mod(t.p1(), e1), mod(t.p2(), e1), mod(t.p4(), e2)};
}

Rank2Result rank2_sum(const HalfIntegralForm& t, const HalfIntegralForm& q, int k, Int N, Int norm_max,
                      Int det_max, double skip) {
  Rank2Result r;
  const Int rp = norm_max / N, yp = det_max / (N * N);
  if (rp < 1 || yp < 1) return r;
  const Majorants mj(k);
  const BesselOrder ell = BesselOrder::ell(k);

  // Terms depend on C only through the two cache keys; count multiplicities.
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> counts;
  std::map<std::pair<Int, Int>, std::size_t> jindex;
  std::vector<std::pair<Int, Int>> jkeys;
  std::map<KKey, std::size_t> kindex;
  std::vector<std::tuple<HalfIntegralForm, HalfIntegralForm, Int, Int>> kargs;

  // C' with first row (a, b) in the positive half; -C' gives the same term.
  for (Int a = 0; a <= rp; ++a)
    for (Int b = -rp; b <= rp; ++b) {
      if (!canonical_sign(a, b)) continue;
      const Egcd e = ext_gcd(a, b);
      const Int al = a / e.g, be = b / e.g;
      for (Int det_c = -yp; det_c <= yp; ++det_c) {
        if (det_c == 0 || det_c % e.g != 0) continue;
        // a d - b c = det_c: (c, d) = (-y, x) det_c / g + m (a, b) / g.
        const Int c0 = -e.y * (det_c / e.g), d0 = e.x * (det_c / e.g);
        Int mlo = std::numeric_limits<Int>::min() / 4, mhi = std::numeric_limits<Int>::max() / 4;
        auto clamp_range = [&](Int base, Int step) {
          if (step == 0) {
            if (base < -rp || base > rp) mlo = 1, mhi = 0;
            return;
          }
          Int lo = step > 0 ? ceil_div(-rp - base, step) : ceil_div(rp - base, step);
          Int hi = step > 0 ? floor_div(rp - base, step) : floor_div(-rp - base, step);
          mlo = std::max(mlo, lo);
          mhi = std::min(mhi, hi);
        };
        clamp_range(c0, al);
        clamp_range(d0, be);
        for (Int m = mlo; m <= mhi; ++m) {
          const IntMatrix2 c = make_matrix(a, b, c0 + m * al, d0 + m * be) * N;
          const EigenData ed = eigen_data(t, q, c);
          const EigenPair ep = eigen_pair(t, q, ed);
          const double bound =
              kRank2Constant * std::min(mj.jcal_small(ep.s1), mj.jcal_product(ep.s1 * ep.s2));
          if (bound < skip) {
            r.skipped += 2.0 * bound;
            continue;
          }
          const auto jk = std::make_pair(ed.D, ed.trace4);
          auto [jit, jnew] = jindex.try_emplace(jk, jkeys.size());
          if (jnew) jkeys.push_back(jk);
          const SmithForm sf = smith_form(c);
          const HalfIntegralForm qq = transform_rows(q, sf.U), tt = transform(t, sf.V);
          auto [kit, knew] = kindex.try_emplace(kloosterman_key(sf.e1, sf.e2, qq, tt), kargs.size());
          if (knew) kargs.emplace_back(qq, tt, sf.e1, sf.e2);
          ++counts[{jit->second, kit->second}];
        }
      }
    }

  std::vector<double> jvals(jkeys.size());
  parallel_for(jkeys.size(), [&](std::size_t i) {
    const EigenPair ep = eigen_pair(t, q, EigenData{jkeys[i].first, jkeys[i].second});
    jvals[i] = jcal(ell, ep.s1, ep.s2);
  });
  std::vector<Complex> kvals(kargs.size());
  parallel_for(kargs.size(), [&](std::size_t i) {
    const auto& [qq, tt, e1, e2] = kargs[i];
    kvals[i] = kloosterman_diagonal(qq, tt, e1, e2);
  });
  for (const auto& [key, count] : counts) {
    const double d = static_cast<double>(jkeys[key.first].first);
    r.value += 2.0 * kRank2Constant * double(count) * kvals[key.second].real() * jvals[key.first] / (d * std::sqrt(d));
    r.terms += 2 * count;
  }
  return r;
}

}  // namespace

KernelValue kernel(const HalfIntegralForm& t, const HalfIntegralForm& q, int k, Int N,
                   const TruncationPolicy& policy) {
  check_inputs(k, N);
  KernelValue v;
  v.policy = certify_tails(t, q, k, N, policy);
  v.diagonal = is_equivalent(t, q) ? static_cast<double>(aut_group(t).size()) : 0.0;

  const double share = 0.25 * policy.eps;
  // Per-term skipping spends at most another quarter of eps on each rank.
  const double r1_count = std::max(1.0, double(v.policy.rank1_cs_max) * (std::log(double(v.policy.rank1_cs_max) + 1.0) + 1.0));
  const Rank1Result r1 = rank1_sum(t, q, k, N, v.policy.rank1_cs_max, share / r1_count);
  double r2_count = 1.0;
  for (Int n = 1; n <= v.policy.rank2_norm_max / N; ++n)
    r2_count += shell_count(n, double(v.policy.rank2_det_max / (N * N)));
  const Rank2Result r2 =
      rank2_sum(t, q, k, N, v.policy.rank2_norm_max, v.policy.rank2_det_max, share / r2_count);

  v.rank1 = r1.value;
  v.rank2 = r2.value;
  v.rank1_terms = r1.terms;
  v.rank2_terms = r2.terms;
  const double t1 = rank1_tail_bound(t, q, k, N, v.policy.rank1_cs_max);
  const double t2 = rank2_tail_bound(t, q, k, N, v.policy.rank2_norm_max, v.policy.rank2_det_max);
  v.rank1_tail = t1 + r1.skipped;
  v.rank2_tail = t2 + r2.skipped;
  v.tail_bound = v.rank1_tail + v.rank2_tail;
  v.total = v.diagonal + v.rank1 + v.rank2;
  v.certified = v.tail_bound <= policy.eps;
  if (t1 > share) v.failed += "rank1_cs_max";
  if (t2 > share) v.failed += std::string(v.failed.empty() ? "" : ",") + "rank2_norm_max";
  return v;
}

Eigen::MatrixXd gram(const std::vector<HalfIntegralForm>& ts, int k, Int N, const TruncationPolicy& policy,
                     Eigen::MatrixXd* tails) {
  const auto n = static_cast<Eigen::Index>(ts.size());
  Eigen::MatrixXd g(n, n);
  if (tails) tails->resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const KernelValue v = kernel(ts[i], ts[j], k, N, policy);
      g(i, j) = v.total;
      if (tails) (*tails)(i, j) = v.tail_bound;
    }
  return g;
}

}  // namespace gsp4
