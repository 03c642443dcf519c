#include <gtest/gtest.h>

#include <numeric>

#include <Eigen/Dense>

#include "test_support.hpp"
#include "ww/hafnian.hpp"

using namespace ww;
using ww::testing::random_square;
using ww::testing::random_symmetric;

namespace {

// (2^n n!)^{-1} sum over all g in S_2n of alpha^{kappa(g)} prod_k A_{g(2k), g(2k+1)}.
Rational hafnian_group_average(const ExactMatrix& a, const Rational& alpha) {
  const int m = a.rows();
  std::vector<int> img(static_cast<size_t>(m));
  std::iota(img.begin(), img.end(), 0);
  Rational total = 0;
  do {
    const auto g = Permutation::from_images(img);
    Rational term = pow(alpha, kappa(g));
    for (int k = 0; k < m; k += 2) term *= a(g(k), g(k + 1));
    total += term;
  } while (std::next_permutation(img.begin(), img.end()));
  return total / Rational(hyperoctahedral_order(m / 2));
}

ExactMatrix ones(int size) {
  ExactMatrix a(size, size);
  for (int i = 0; i < size; ++i)
    for (int j = 0; j < size; ++j) a(i, j) = 1;
  return a;
}

Rational determinant(ExactMatrix a) {
  const int n = a.rows();
  Rational det = 1;
  for (int c = 0; c < n; ++c) {
    int p = c;
    while (p < n && a(p, c) == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      for (int j = 0; j < n; ++j) std::swap(a(p, j), a(c, j));
      det = -det;
    }
    det *= a(c, c);
    for (int r = c + 1; r < n; ++r) {
      const Rational f = a(r, c) / a(c, c);
      for (int j = c; j < n; ++j) a(r, j) -= f * a(c, j);
    }
  }
  return det;
}

}  // namespace

TEST(Hafnian, SmallCasesByHand) {
  const ExactMatrix a{{1, 2}, {2, 5}};
  EXPECT_EQ(hafnian_matching(a, Rational(3)), 6);
  EXPECT_EQ(hafnian_expand(a, Rational(3)), 6);
  // 4x4: three matchings, kappa = 2 for {12,34}, 1 otherwise.
  const ExactMatrix b{{0, 1, 2, 3}, {1, 0, 4, 5}, {2, 4, 0, 6}, {3, 5, 6, 0}};
  const Rational alpha(7, 2);
  const Rational expected = alpha * alpha * 1 * 6 + alpha * 2 * 5 + alpha * 3 * 4;
  EXPECT_EQ(hafnian_matching(b, alpha), expected);
  EXPECT_EQ(hafnian_expand(b, alpha), expected);
  EXPECT_EQ(hafnian_permsum(b, alpha, CycleVariant::P), expected);
  EXPECT_EQ(hafnian_permsum(b, alpha, CycleVariant::Q), expected);
}

TEST(Hafnian, AllOnesIsRisingProductInSteps2) {
  for (int n = 1; n <= 6; ++n) {
    const Rational alpha(5, 3);
    Rational expected = 1;
    for (int k = 0; k < n; ++k) expected *= alpha + 2 * k;
    EXPECT_EQ(hafnian_expand(ones(2 * n), alpha), expected) << n;
    EXPECT_EQ(hafnian_matching(ones(2 * n), alpha), expected) << n;
  }
}

TEST(Hafnian, MatchesGroupAverageDefinition) {
  for (int n = 1; n <= 3; ++n)
    for (int trial = 0; trial < 5; ++trial) {
      const auto a = random_symmetric(2 * n);
      const auto alpha = ww::testing::random_rational();
      EXPECT_EQ(hafnian_matching(a, alpha), hafnian_group_average(a, alpha));
    }
}

TEST(Hafnian, AllRoutesAgreeExactly) {
  for (int n = 1; n <= 5; ++n)
    for (int trial = 0; trial < 10; ++trial) {
      const auto a = random_symmetric(2 * n);
      const auto alpha = ww::testing::random_rational();
      const Rational ref = hafnian_matching(a, alpha);
      EXPECT_EQ(hafnian_expand(a, alpha), ref);
      EXPECT_EQ(hafnian_permsum(a, alpha, CycleVariant::P), ref);
      EXPECT_EQ(hafnian_permsum(a, alpha, CycleVariant::Q), ref);
    }
}

TEST(Hafnian, WorksOnEigenMatrices) {
  Eigen::MatrixXd a(4, 4);
  a << 2, 1, 0.5, 0.25, 1, 3, 0.75, 0.2, 0.5, 0.75, 4, 0.1, 0.25, 0.2, 0.1, 5;
  const double alpha = 1.5;
  const double m = hafnian_matching(a, alpha);
  EXPECT_NEAR(hafnian_expand(a, alpha), m, 1e-12);
  EXPECT_NEAR(hafnian_permsum(a, alpha, CycleVariant::P), m, 1e-12);
  EXPECT_NEAR(hafnian_permsum(a, alpha, CycleVariant::Q), m, 1e-12);
}

TEST(Hafnian, RejectsBadInput) {
  EXPECT_THROW(hafnian_expand(ExactMatrix{{1, 2}, {3, 4}}, Rational(1)), InvalidArgument);
  EXPECT_THROW(hafnian_expand(ExactMatrix(3, 3), Rational(1)), InvalidArgument);
  EXPECT_THROW(hafnian_expand(ExactMatrix(18, 18), Rational(1)), SizeLimitError);
  EXPECT_THROW(hafnian_permsum(ExactMatrix(16, 16), Rational(1), CycleVariant::P), SizeLimitError);
}

TEST(CycleFunctionals, InverseCycleSwapsQ) {
  const auto a = random_symmetric(8);
  const std::vector<int> c = {2, 0, 3, 1};
  const auto f = cycle_functionals(a, c);
  const auto inv = inverse_cycle(canonical_cycle(c, 4));
  const auto g = cycle_functionals(a, inv);
  EXPECT_EQ(f.q_inv, g.q);
  EXPECT_EQ(g.q_inv, f.q);
  EXPECT_EQ(f.p, g.p);
  // P_c splits into the two orientations of Q.
  EXPECT_EQ(f.p, f.q + f.q_inv);
  EXPECT_THROW(cycle_functionals(a, {0, 0}), InvalidArgument);
}

TEST(AlphaPermanent, EmbeddingAndDeterminant) {
  for (int trial = 0; trial < 20; ++trial) {
    const auto m = random_square(3);
    const auto alpha = ww::testing::random_rational();
    EXPECT_EQ(alpha_permanent(m, alpha), hafnian_expand(embed_permanent(m), alpha));
    EXPECT_EQ(alpha_permanent(m, Rational(-1)), -determinant(m));
  }
  // per_1 of the all-ones matrix is n!.
  EXPECT_EQ(alpha_permanent(ones(4), Rational(1)), 24);
}
