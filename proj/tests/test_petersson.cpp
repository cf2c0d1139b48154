#include "gsp4/petersson.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace gsp4;

namespace {
TruncationPolicy fixed(Int cs, Int norm, Int det_max) {
  TruncationPolicy p;
  p.rank1_cs_max = cs;
  p.rank2_norm_max = norm;
  p.rank2_det_max = det_max;
  return p;
}
}  // namespace

// Reference: brute-force python sums (scipy Bessel, numpy enumeration of all
// C with entries in [-2, 2], rank-1 terms with c s <= 12).
TEST(Kernel, MatchesReferenceSums) {
  struct Case {
    int k;
    HalfIntegralForm t, q;
    double rank1, rank2;
  };
  const Case cases[] = {{10, {1, 0, 1}, {1, 0, 1}, -5.55580706948479, 41.0872647821412},
                        {10, {1, 0, 2}, {1, 1, 1}, 14.6597960051382, 55.3610880101356},
                        {12, {1, 1, 1}, {1, 0, 1}, 25.1250800852971, 2.96134188657882}};
  for (const auto& c : cases) {
    const KernelValue v = kernel(c.t, c.q, c.k, 1, fixed(12, 2, 8));
    EXPECT_NEAR(v.rank1, c.rank1, 1e-9);
    EXPECT_NEAR(v.rank2, c.rank2, 1e-9);
    EXPECT_NEAR(v.total, v.diagonal + v.rank1 + v.rank2, 1e-12);
  }
}

TEST(Kernel, DiagonalTerm) {
  const auto p = fixed(1, 1, 1);
  EXPECT_DOUBLE_EQ(kernel({1, 0, 1}, {1, 0, 1}, 10, 1, p).diagonal, 8.0);
  EXPECT_DOUBLE_EQ(kernel({1, 1, 1}, {1, 1, 1}, 10, 1, p).diagonal, 12.0);
  EXPECT_DOUBLE_EQ(kernel({1, 0, 1}, {1, 0, 2}, 10, 1, p).diagonal, 0.0);
}

TEST(Kernel, SymmetricAndClassInvariant) {
  const auto p = fixed(20, 3, 18);
  const HalfIntegralForm t(1, 0, 2), q(1, 1, 1);
  // (3, 2, 1) ~ (1, 0, 2) and (1, -1, 1) ~ (1, 1, 1).
  const HalfIntegralForm t2(3, 2, 1), q2(1, -1, 1);
  for (int k : {10, 12}) {
    const KernelValue a = kernel(t, q, k, 1, p), b = kernel(q, t, k, 1, p);
    EXPECT_NEAR(a.total, b.total, 1e-9 * std::max(1.0, std::abs(a.total)));
    // The rank-1 cutoff on c s is class invariant; the rank-2 norm cutoff is not.
    EXPECT_NEAR(a.rank1, kernel(t2, q2, k, 1, p).rank1, 1e-9 * std::max(1.0, std::abs(a.rank1)));
  }
  TruncationPolicy c;
  c.eps = 1e-3;
  const KernelValue a = kernel(t, q, 20, 1, c), d = kernel(t2, q2, 20, 1, c);
  EXPECT_NEAR(a.total, d.total, a.tail_bound + d.tail_bound);
}

TEST(Kernel, CompletionShiftIndependence) {
  const HalfIntegralForm t(1, 0, 2), q(2, 1, 3);
  for (Int s = 1; s <= 6; ++s)
    for (Int c = 1; c <= 5; ++c) {
      const Complex base = rank1_salie_total(t, q, s, c, 0);
      for (Int shift : {-2, 1, 3}) EXPECT_NEAR(std::abs(rank1_salie_total(t, q, s, c, shift) - base), 0.0, 1e-9);
    }
}

TEST(Kernel, Completions) {
  for (Int a = -5; a <= 5; ++a)
    for (Int b = -5; b <= 5; ++b) {
      if (gcd(a, b) != 1) continue;
      for (Int shift : {0, 2}) {
        const IntMatrix2 u = complete_bottom_row(a, b, shift);
        EXPECT_EQ(det(u), 1);
        EXPECT_EQ(u(1, 0), a);
        EXPECT_EQ(u(1, 1), b);
        const IntMatrix2 v = complete_first_column(a, b, shift);
        EXPECT_EQ(det(v), 1);
        EXPECT_EQ(v(0, 0), a);
        EXPECT_EQ(v(1, 0), b);
      }
    }
  EXPECT_THROW(complete_bottom_row(2, 4), DomainError);
}

TEST(Kernel, TailBoundsDecrease) {
  const HalfIntegralForm t(1, 0, 1);
  double prev = rank1_tail_bound(t, t, 12, 1, 50);
  for (Int x : {100, 200, 400}) {
    const double b = rank1_tail_bound(t, t, 12, 1, x);
    EXPECT_LT(b, prev);
    prev = b;
  }
  prev = rank2_tail_bound(t, t, 12, 1, 4, 32);
  for (Int r : {8, 16}) {
    const double b = rank2_tail_bound(t, t, 12, 1, r, 2 * r * r);
    EXPECT_LT(b, prev);
    prev = b;
  }
}

TEST(Kernel, TailBoundCoversOmittedTerms) {
  const HalfIntegralForm t(1, 0, 1);
  const auto big = kernel(t, t, 12, 1, fixed(400, 6, 72));
  const auto small = kernel(t, t, 12, 1, fixed(100, 3, 18));
  EXPECT_LE(std::abs(big.rank1 - small.rank1), rank1_tail_bound(t, t, 12, 1, 100) + 1e-10);
  EXPECT_LE(std::abs(big.rank2 - small.rank2), rank2_tail_bound(t, t, 12, 1, 3, 18) + 1e-10);
}

TEST(Kernel, CertifiedPolicyMeetsTarget) {
  TruncationPolicy p;
  p.eps = 1e-2;
  const HalfIntegralForm t(1, 0, 1);
  const TruncationPolicy c = certify_tails(t, t, 20, 1, p);
  EXPECT_GT(c.rank1_cs_max, 0);
  EXPECT_LE(rank1_tail_bound(t, t, 20, 1, c.rank1_cs_max), p.eps / 4 * (1 + 1e-12));
  const KernelValue v = kernel(t, t, 20, 1, p);
  EXPECT_EQ(v.certified, v.tail_bound <= p.eps);
}

TEST(Kernel, LevelRestrictsModuli) {
  // With N = 3 every rank-2 C is 3 C', so ||C|| <= 2 leaves none.
  const HalfIntegralForm t(1, 0, 1);
  const auto v = kernel(t, t, 10, 3, fixed(12, 2, 18));
  EXPECT_EQ(v.rank2_terms, 0u);
  EXPECT_THROW(kernel(t, t, 9, 1, fixed(2, 1, 1)), DomainError);
  EXPECT_THROW(kernel(t, t, 10, 0, fixed(2, 1, 1)), DomainError);
}

TEST(Kernel, GramIsSymmetric) {
  const std::vector<HalfIntegralForm> ts = {{1, 0, 1}, {1, 1, 1}};
  Eigen::MatrixXd tails;
  const Eigen::MatrixXd g = gram(ts, 12, 1, fixed(20, 2, 8), &tails);
  EXPECT_NEAR(g(0, 1), g(1, 0), 1e-9);
  EXPECT_EQ(tails.rows(), 2);
}
