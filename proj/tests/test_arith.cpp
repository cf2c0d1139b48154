#include "gsp4/arith.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace gsp4;

TEST(Arith, GcdInverseFactor) {
  EXPECT_EQ(gcd(-12, 18), 6);
  EXPECT_EQ(lcm(4, 6), 12);
  EXPECT_EQ(mod(-7, 5), 3);
  EXPECT_EQ(mod(inverse_mod(7, 30) * 7, 30), 1);
  EXPECT_THROW(inverse_mod(6, 9), DomainError);
  EXPECT_TRUE(is_squarefree(30));
  EXPECT_FALSE(is_squarefree(18));
  EXPECT_TRUE(is_prime(31));
  EXPECT_FALSE(is_prime(1));
  const auto f = factorize(-360);
  ASSERT_EQ(f.size(), 3u);
  EXPECT_EQ(f[0], (std::pair<Int, int>{2, 3}));
  EXPECT_EQ(f[2], (std::pair<Int, int>{5, 1}));
}

TEST(Arith, SmithFormDiagonalizes) {
  for (Int a = -4; a <= 4; ++a)
    for (Int b = -3; b <= 3; ++b)
      for (Int c = -3; c <= 3; ++c)
        for (Int d = -4; d <= 4; ++d) {
          const IntMatrix2 m = make_matrix(a, b, c, d);
          if (det(m) == 0) {
            EXPECT_THROW(smith_form(m), DomainError);
            continue;
          }
          const SmithForm s = smith_form(m);
          ASSERT_TRUE(is_unimodular(s.U));
          ASSERT_TRUE(is_unimodular(s.V));
          EXPECT_EQ(s.U * m * s.V, make_matrix(s.e1, 0, 0, s.e2));
          EXPECT_GT(s.e1, 0);
          EXPECT_EQ(s.e2 % s.e1, 0);
          EXPECT_EQ(s.e1 * s.e2, std::abs(det(m)));
        }
}

TEST(Arith, MatrixHelpers) {
  const IntMatrix2 m = make_matrix(2, 3, 1, 2);
  EXPECT_EQ(m * unimodular_inverse(m), IntMatrix2::Identity());
  EXPECT_EQ(m * adjugate(m), det(m) * IntMatrix2::Identity());
  EXPECT_THROW(unimodular_inverse(make_matrix(2, 0, 0, 1)), DomainError);
  EXPECT_EQ(parse_matrix("1,-2,3,4"), make_matrix(1, -2, 3, 4));
  EXPECT_EQ(format_matrix(make_matrix(1, -2, 3, 4)), "1,-2,3,4");
  EXPECT_THROW(parse_matrix("1,2,3"), std::invalid_argument);
  EXPECT_THROW(parse_matrix("1,2,x,4"), std::invalid_argument);
}

TEST(Arith, FormsRejectIndefinite) {
  EXPECT_THROW(HalfIntegralForm(1, 2, 1), DomainError);
  EXPECT_THROW(HalfIntegralForm(-1, 0, -1), DomainError);
  EXPECT_THROW(HalfIntegralForm::parse("1,0"), std::invalid_argument);
  const auto t = HalfIntegralForm::parse("2,1,3");
  EXPECT_EQ(t.disc(), 23);
  EXPECT_DOUBLE_EQ(t.det(), 5.75);
  EXPECT_EQ(t.str(), "2,1,3");
  EXPECT_EQ(HalfIntegralForm::from_doubled(t.doubled()), t);
}

TEST(Arith, ReductionIsCanonical) {
  std::set<std::pair<Int, HalfIntegralForm>> seen;
  const std::vector<IntMatrix2> moves = {make_matrix(1, 1, 0, 1), make_matrix(0, 1, -1, 0),
                                         make_matrix(2, 1, 1, 1), make_matrix(1, 0, 3, 1)};
  for (const auto& base : {HalfIntegralForm(1, 0, 1), HalfIntegralForm(1, 1, 1), HalfIntegralForm(2, 1, 3),
                           HalfIntegralForm(1, 0, 5)}) {
    const Reduction r0 = reduce(base);
    EXPECT_TRUE(is_reduced(r0.form));
    EXPECT_EQ(transform(base, r0.U), r0.form);
    for (const auto& u : moves) {
      const HalfIntegralForm moved = transform(base, u);
      EXPECT_EQ(reduce(moved).form, r0.form);
      EXPECT_TRUE(is_equivalent(moved, base));
    }
  }
  EXPECT_FALSE(is_equivalent(HalfIntegralForm(1, 0, 6), HalfIntegralForm(2, 0, 3)));
}

TEST(Arith, AutomorphismGroups) {
  EXPECT_EQ(aut_group(HalfIntegralForm(1, 0, 1)).size(), 8u);
  EXPECT_EQ(aut_group(HalfIntegralForm(1, 1, 1)).size(), 12u);
  EXPECT_EQ(aut_group(HalfIntegralForm(1, 0, 2)).size(), 4u);
  EXPECT_EQ(aut_group(HalfIntegralForm(2, 1, 3)).size(), 2u);
  const HalfIntegralForm t(1, 1, 1);
  for (const auto& u : aut_group(t)) EXPECT_EQ(transform(t, u), t);
}

TEST(Arith, Representations) {
  const HalfIntegralForm t(1, 0, 1);
  EXPECT_EQ(primitive_representations(t, 5).size(), 8u);
  EXPECT_EQ(primitive_representations(t, 3).size(), 0u);
  EXPECT_EQ(primitive_representations(t, 1).size(), 4u);
  EXPECT_EQ(primitive_representations(t, 4).size(), 0u);
  int count = 0;
  for_each_vector(t, 2, [&](Int, Int) { ++count; });
  EXPECT_EQ(count, 9);
}

TEST(Arith, GaussianIntegers) {
  EXPECT_EQ(gaussian_phi({1, 1}), 1);
  EXPECT_EQ(gaussian_phi({3, 0}), 8);
  EXPECT_EQ(gaussian_phi({2, 0}), 2);
  EXPECT_EQ(gaussian_phi({2, 1}), 4);
  EXPECT_TRUE(divides({1, 1}, {2, 0}));
  EXPECT_FALSE(divides({2, 1}, {3, 0}));
  EXPECT_EQ((GaussianInt{1, 2} * GaussianInt{3, -1}), (GaussianInt{5, 5}));
  EXPECT_THROW(GOElement(0, 0, false), DomainError);
  EXPECT_EQ(det(GOElement(2, 1, true).matrix()), -5);
}

TEST(Arith, Kronecker) {
  EXPECT_EQ(kronecker_symbol(-4, 3), -1);
  EXPECT_EQ(kronecker_symbol(-4, 5), 1);
  EXPECT_EQ(kronecker_symbol(-4, 2), 0);
  EXPECT_EQ(kronecker_symbol(5, 2), -1);
  EXPECT_EQ(kronecker_symbol(8, 7), 1);
  EXPECT_EQ(kronecker_symbol(-3, -1), -1);
  EXPECT_TRUE(is_fundamental_discriminant(-4));
  EXPECT_TRUE(is_fundamental_discriminant(8));
  EXPECT_TRUE(is_fundamental_discriminant(-20));
  EXPECT_FALSE(is_fundamental_discriminant(-16));
  EXPECT_FALSE(is_fundamental_discriminant(3));
  EXPECT_THROW(KroneckerCharacter(12 * 4), DomainError);
  // Multiplicativity and periodicity of a primitive character.
  const KroneckerCharacter chi(-20);
  for (Int a = 1; a < 40; ++a) {
    EXPECT_EQ(chi(a), chi(a + 20));
    for (Int b = 1; b < 10; ++b) EXPECT_EQ(chi(a * b), chi(a) * chi(b));
  }
}
