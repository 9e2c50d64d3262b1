#include <gtest/gtest.h>

#include <random>

#include "hypcoh/exact_algebra.hpp"

using namespace hypcoh;

namespace {

// Fraction-free Gaussian elimination; used only as an oracle for rank.
std::size_t bareiss_rank(IntegerMatrix m) {
  std::size_t rank = 0;
  Integer prev = 1;
  for (std::size_t c = 0; c < m.cols() && rank < m.rows(); ++c) {
    std::size_t piv = rank;
    while (piv < m.rows() && m(piv, c) == 0) ++piv;
    if (piv == m.rows()) continue;
    m.swap_rows(piv, rank);
    for (std::size_t i = rank + 1; i < m.rows(); ++i) {
      for (std::size_t j = c + 1; j < m.cols(); ++j)
        m(i, j) = (m(rank, c) * m(i, j) - m(i, c) * m(rank, j)) / prev;
      m(i, c) = 0;
    }
    prev = m(rank, c);
    ++rank;
  }
  return rank;
}

IntegerMatrix random_matrix(std::mt19937& rng, std::size_t r, std::size_t c, int lo, int hi) {
  std::uniform_int_distribution<int> dist(lo, hi);
  IntegerMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = dist(rng);
  return m;
}

}  // namespace

TEST(SmithNormalForm, Examples) {
  EXPECT_EQ(smith_normal_form(IntegerMatrix{{2}}), std::vector<Integer>{2});
  EXPECT_EQ(smith_normal_form(IntegerMatrix{{1, 0}, {0, 0}}), std::vector<Integer>{1});
  // d1*d2 = |det| = 8 and d1 = gcd of entries = 2
  EXPECT_EQ(smith_normal_form(IntegerMatrix{{2, 4}, {6, 8}}), (std::vector<Integer>{2, 4}));
  EXPECT_TRUE(smith_normal_form(IntegerMatrix{}).empty());
  EXPECT_TRUE(smith_normal_form(IntegerMatrix(3, 0)).empty());
}

TEST(SmithNormalForm, TransformsReproduceDiagonal) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    auto m = random_matrix(rng, 1 + rng() % 5, 1 + rng() % 5, -6, 6);
    auto s = smith_decomposition(m);
    EXPECT_EQ(s.u * m * s.v, s.diagonal);
    EXPECT_EQ(s.v * s.v_inverse, IntegerMatrix::identity(m.cols()));
    for (std::size_t i = 0; i < s.invariants.size(); ++i) EXPECT_EQ(s.diagonal(i, i), s.invariants[i]);
  }
}

TEST(SmithNormalForm, DivisibilityChainAndRankAgainstBareiss) {
  std::mt19937 rng(20240607);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t r = 1 + rng() % 6, c = 1 + rng() % 6;
    auto m = random_matrix(rng, r, c, -9, 9);
    // sprinkle in rank deficiency
    if (trial % 3 == 0 && r > 1)
      for (std::size_t j = 0; j < c; ++j) m(r - 1, j) = 2 * m(0, j);
    auto inv = smith_normal_form(m);
    ASSERT_EQ(inv.size(), bareiss_rank(m)) << "trial " << trial;
    for (std::size_t i = 0; i < inv.size(); ++i) {
      EXPECT_GT(inv[i], 0);
      if (i + 1 < inv.size()) {
        EXPECT_EQ(inv[i + 1] % inv[i], 0);
      }
    }
  }
}

TEST(Homology, Circle) {
  auto h = homology_of_complex({IntegerMatrix{{0}}}, Coefficients::rational);
  EXPECT_EQ(h, (GradedModule{{0, 1}, {1, 1}}));
}

TEST(Homology, Interval) {
  auto h = homology_of_complex({IntegerMatrix{{1}, {-1}}}, Coefficients::rational);
  EXPECT_EQ(h, (GradedModule{{0, 1}}));
}

TEST(Homology, DegreeTwoAttachingMapGivesTorsion) {
  // one cell in each of degrees 0,1,2 with d1 = 0 and d2 = [2]
  auto h = homology_of_complex({IntegerMatrix{{0}}, IntegerMatrix{{2}}}, Coefficients::integral);
  EXPECT_EQ(h.rank(0), 1);
  EXPECT_EQ(h.rank(1), 0);
  EXPECT_EQ(h.rank(2), 0);
  ASSERT_EQ(h.entry(1).torsion.size(), 1u);
  EXPECT_EQ(h.entry(1).torsion[0], (TorsionSummand{2, 1, 1}));

  auto q = homology_of_complex({IntegerMatrix{{0}}, IntegerMatrix{{2}}}, Coefficients::rational);
  EXPECT_EQ(q, (GradedModule{{0, 1}}));
}

TEST(Homology, Errors) {
  try {
    homology_of_complex({IntegerMatrix{{1}}, IntegerMatrix{{1}}}, Coefficients::rational);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::composition_nonzero);
  }
  try {
    homology_of_complex({IntegerMatrix{{1, 0}}, IntegerMatrix{{1}}}, Coefficients::rational);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::dimension_mismatch);
  }
}

TEST(Homology, EulerPoincareOnRandomComplexes) {
  // d2 built as a product so d1*d2 = 0 automatically: d1 = A, d2 = kernel-ish B with A*B = 0
  std::mt19937 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t c0 = 1 + rng() % 4, c1 = 2 + rng() % 4, c2 = 1 + rng() % 4;
    auto a = random_matrix(rng, c0, c1, -3, 3);
    // choose B's columns in the kernel of A using the Smith transform: A V = U^{-1} D
    auto s = smith_decomposition(a);
    const std::size_t r = s.invariants.size();
    IntegerMatrix b(c1, c2);
    std::uniform_int_distribution<int> coef(-2, 2);
    for (std::size_t j = 0; j < c2; ++j)
      for (std::size_t k = r; k < c1; ++k) {
        Integer f = coef(rng);
        for (std::size_t i = 0; i < c1; ++i) b(i, j) += f * s.v(i, k);
      }
    for (auto mode : {Coefficients::rational, Coefficients::integral}) {
      auto h = homology_of_complex({a, b}, mode, 0);
      EXPECT_EQ(h.euler_characteristic(),
                static_cast<std::int64_t>(c0) - static_cast<std::int64_t>(c1) + static_cast<std::int64_t>(c2));
    }
  }
}

TEST(Homology, LowestDegreeShift) {
  auto h = homology_of_complex({IntegerMatrix{{0}}}, Coefficients::rational, -1);
  EXPECT_EQ(h, (GradedModule{{-1, 1}, {0, 1}}));
}

TEST(Poincare, Examples) {
  EXPECT_EQ(poincare_polynomial(GradedModule{{0, 1}, {3, 1}}), (PoincarePolynomial{1, 0, 0, 1}));
  GradedModule g(Coefficients::integral);
  g.add_free(0, 1);
  g.add_free(1, 1);
  g.add_torsion(1, 2, 1, 1);
  EXPECT_EQ(poincare_polynomial(g), (PoincarePolynomial{1, 1}));
  // cohomology of the space of nonsingular plane cubics modulo C*: degrees 0,3,5,8
  EXPECT_EQ(poincare_polynomial(GradedModule{{0, 1}, {3, 1}, {5, 1}, {8, 1}}).to_string(), "1 + t^3 + t^5 + t^8");
  try {
    poincare_polynomial(GradedModule{{-1, 1}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::negative_degree);
  }
}

TEST(Poincare, DivideByOnePlusT) {
  EXPECT_EQ(divide_by_one_plus_t(PoincarePolynomial{1, 1, 0, 1, 1, 1, 1, 0, 1, 1}),
            (PoincarePolynomial{1, 0, 0, 1, 0, 1, 0, 0, 1}));
  EXPECT_EQ(divide_by_one_plus_t(PoincarePolynomial{1, 1}), PoincarePolynomial::one());
  try {
    divide_by_one_plus_t(PoincarePolynomial{1, 0, 1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::not_divisible);
  }
  // vanishes at -1 but the quotient would be 1 - t + t^2
  EXPECT_THROW(divide_by_one_plus_t(PoincarePolynomial{1, 0, 0, 1}), Error);
}

TEST(Poincare, DivisionInvertsMultiplication) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<std::int64_t> c(1 + rng() % 12);
    for (auto& x : c) x = rng() % 5;
    PoincarePolynomial p(c);
    EXPECT_EQ(divide_by_one_plus_t(p * PoincarePolynomial{1, 1}), p);
  }
}

TEST(GradedModule, ShiftReflectSum) {
  GradedModule g{{-1, 1}, {2, 3}};
  EXPECT_EQ(g.shifted(2), (GradedModule{{1, 1}, {4, 3}}));
  EXPECT_EQ(g.reflected(4), (GradedModule{{5, 1}, {2, 3}}));
  EXPECT_EQ(g + g, (GradedModule{{-1, 2}, {2, 6}}));
  EXPECT_EQ(g.euler_characteristic(), 2);
  EXPECT_EQ(tensor(GradedModule{{0, 1}, {2, 1}}, GradedModule{{0, 1}, {2, 1}}),
            (GradedModule{{0, 1}, {2, 2}, {4, 1}}));
  EXPECT_EQ((GradedModule{{3, 0}}), GradedModule{});
}

TEST(GradedModule, TorsionBookkeeping) {
  GradedModule g(Coefficients::integral);
  g.add_cyclic(3, 12);
  auto e = g.entry(3);
  ASSERT_EQ(e.torsion.size(), 2u);
  EXPECT_EQ(e.torsion[0], (TorsionSummand{2, 2, 1}));
  EXPECT_EQ(e.torsion[1], (TorsionSummand{3, 1, 1}));
  EXPECT_THROW(g.add_torsion(0, 4, 1), Error);
  GradedModule r(Coefficients::rational);
  r.add_cyclic(1, 2);
  EXPECT_TRUE(r.is_zero());
}
