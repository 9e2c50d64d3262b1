#include <gtest/gtest.h>

#include "hypcoh/space_catalog.hpp"

using namespace hypcoh;

namespace {

GradedModule bm_sign(const Space& x) {
  return homology(x, Flavor::borel_moore, Twist::sign, Coefficients::rational);
}
GradedModule bm(const Space& x) { return homology(x, Flavor::borel_moore, Twist::trivial, Coefficients::rational); }
GradedModule ord(const Space& x) { return homology(x, Flavor::ordinary, Twist::trivial, Coefficients::rational); }

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::inconsistent;
}

}  // namespace

TEST(SpaceCatalog, ProjectiveAndAffine) {
  EXPECT_EQ(ord(Space::proj(2)), (GradedModule{{0, 1}, {2, 1}, {4, 1}}));
  for (int n = 0; n < 5; ++n) {
    EXPECT_EQ(bm(Space::affine(n)), (GradedModule{{2 * n, 1}}));
    EXPECT_EQ(ord(Space::affine(n)), (GradedModule{{0, 1}}));
  }
}

TEST(SpaceCatalog, SignTwistedConfigurations) {
  EXPECT_TRUE(bm_sign(Space::config(Space::affine(3), 2)).is_zero());
  EXPECT_EQ(bm_sign(Space::config(Space::proj(1), 2)), (GradedModule{{2, 1}}));
  EXPECT_EQ(bm_sign(Space::config(Space::proj(3), 2)), (GradedModule{{2, 1}, {4, 1}, {6, 2}, {8, 1}, {10, 1}}));
  EXPECT_TRUE(bm_sign(Space::config(Space::proj(1), 3)).is_zero());
}

TEST(SpaceCatalog, TwistedConfigurationsMatchShiftedGrassmannians) {
  for (int n = 0; n <= 3; ++n)
    for (int k = 1; k <= n + 1; ++k) {
      const GradedModule h = bm_sign(Space::config(Space::proj(n), k));
      const GradedModule g = module_from_polynomial(grassmann_poincare(k, n + 1)).shifted(k * (k - 1));
      EXPECT_EQ(h, g) << "n=" << n << " k=" << k;
      EXPECT_EQ(h.total_rank(), g.total_rank());
    }
}

TEST(SpaceCatalog, ConstantCoefficientConfigurationsOfTwoPoints) {
  // CP^2 minus a conic
  EXPECT_EQ(bm(Space::config(Space::proj(1), 2)), (GradedModule{{4, 1}}));
  // B(C^2,2) is rationally a 3-sphere in a manifold of real dimension 8
  EXPECT_EQ(bm(Space::config(Space::affine(2), 2)), (GradedModule{{5, 1}, {8, 1}}));
  EXPECT_EQ(ord(Space::config(Space::affine(2), 2)), (GradedModule{{0, 1}, {3, 1}}));
  EXPECT_EQ(bm(Space::config(Space::proj(2), 2)).euler_characteristic(), 3);
}

TEST(SchubertCells, Examples) {
  auto c12 = schubert_cells(1, 2);
  ASSERT_EQ(c12.size(), 1u);
  EXPECT_EQ(c12[0], (SchubertCell{{1, 2}, 1}));

  auto c22 = schubert_cells(2, 2);
  ASSERT_EQ(c22.size(), 3u);
  EXPECT_EQ(c22[0], (SchubertCell{{1, 2, 2}, 1}));
  EXPECT_EQ(c22[1], (SchubertCell{{1, 1, 2}, 2}));
  EXPECT_EQ(c22[2], (SchubertCell{{0, 1, 2}, 3}));

  EXPECT_TRUE(schubert_cells(1, 3).empty());
}

TEST(SchubertCells, DimensionsAreShiftedGrassmannCells) {
  for (int n = 0; n <= 4; ++n)
    for (int k = 1; k <= n + 1; ++k) {
      std::vector<std::int64_t> counts;
      for (const auto& c : schubert_cells(n, k)) {
        const int d = c.complex_dim - k * (k - 1) / 2;
        ASSERT_GE(d, 0);
        if (counts.size() <= static_cast<std::size_t>(2 * d)) counts.resize(2 * d + 1, 0);
        counts[2 * d] += 1;
        // symbol constraints
        EXPECT_EQ(c.symbol.back(), k);
        EXPECT_LE(c.symbol.front(), 1);
        for (std::size_t i = 1; i < c.symbol.size(); ++i) {
          EXPECT_GE(c.symbol[i] - c.symbol[i - 1], 0);
          EXPECT_LE(c.symbol[i] - c.symbol[i - 1], 1);
        }
      }
      EXPECT_EQ(PoincarePolynomial(counts), grassmann_poincare(k, n + 1));
    }
}

TEST(GrassmannPoincare, Examples) {
  EXPECT_EQ(grassmann_poincare(1, 3), (PoincarePolynomial{1, 0, 1, 0, 1}));
  EXPECT_EQ(grassmann_poincare(2, 2), PoincarePolynomial::one());
  EXPECT_EQ(grassmann_poincare(2, 4), (PoincarePolynomial{1, 0, 1, 0, 2, 0, 1, 0, 1}));
  EXPECT_EQ(kind_of([] { grassmann_poincare(3, 2); }), ErrorKind::bad_range);
  EXPECT_EQ(kind_of([] { grassmann_poincare(-1, 2); }), ErrorKind::bad_range);
}

TEST(GenericConfig, Values) {
  EXPECT_EQ(generic_config_homology(2, 3), (GradedModule{{6, 1}}));
  EXPECT_TRUE(generic_config_homology(2, 4).is_zero());
  EXPECT_EQ(generic_config_homology(3, 3), (GradedModule{{6, 1}, {8, 1}, {10, 1}, {12, 1}}));
  EXPECT_EQ(generic_config_homology(3, 4), (GradedModule{{12, 1}}));
  EXPECT_EQ(kind_of([] { generic_config_homology(2, 5); }), ErrorKind::unsupported_pair);
  EXPECT_EQ(kind_of([] { Space::generic_config(4, 3); }), ErrorKind::unsupported_pair);
  for (auto [n, k] : {std::pair{2, 3}, {2, 4}, {3, 3}, {3, 4}})
    EXPECT_EQ(generic_config_homology(n, k), bm_sign(Space::config(Space::proj(n), k)));
}

TEST(PGL, Homology) {
  EXPECT_EQ(pgl_homology(3, Flavor::ordinary), (GradedModule{{0, 1}, {3, 1}, {5, 1}, {8, 1}}));
  EXPECT_EQ(pgl_homology(3, Flavor::borel_moore), (GradedModule{{16, 1}, {13, 1}, {11, 1}, {8, 1}}));
  EXPECT_EQ(poincare_polynomial(pgl_homology(4, Flavor::ordinary)),
            PoincarePolynomial::one_plus_t_power(3) * PoincarePolynomial::one_plus_t_power(5) *
                PoincarePolynomial::one_plus_t_power(7));
  EXPECT_EQ(kind_of([] { pgl_homology(5, Flavor::ordinary); }), ErrorKind::unsupported_rank);
}

TEST(SpaceCatalog, Errors) {
  EXPECT_EQ(kind_of([] { homology(Space::proj(2), Flavor::ordinary, Twist::sign, Coefficients::rational); }),
            ErrorKind::unsupported_twist);
  EXPECT_EQ(kind_of([] {
              homology(Space::product({Space::proj(2), Space::affine(1)}), Flavor::ordinary, Twist::sign,
                       Coefficients::rational);
            }),
            ErrorKind::unsupported_twist);
  EXPECT_EQ(kind_of([] {
              homology(Space::config(Space::proj(2), 2), Flavor::borel_moore, Twist::sign, Coefficients::integral);
            }),
            ErrorKind::unsupported_integral);
  EXPECT_EQ(kind_of([] { Space::config(Space::grassmann(2, 4), 2); }), ErrorKind::invalid_expression);
}

TEST(SpaceCatalog, IntegralSupport) {
  const auto h = homology(Space::product({Space::proj(2), Space::affine(1)}), Flavor::borel_moore, Twist::trivial,
                          Coefficients::integral);
  EXPECT_EQ(h.mode(), Coefficients::integral);
  EXPECT_EQ(h, GradedModule({{2, 1}, {4, 1}, {6, 1}}, Coefficients::integral));
}

TEST(SpaceCatalog, KunnethOverProducts) {
  const std::vector<Space> catalog = {Space::point(),        Space::affine(1),      Space::affine(2),
                                      Space::proj(1),        Space::proj(2),        Space::proj(3),
                                      Space::grassmann(2, 4), Space::pgl(3),        Space::config(Space::proj(2), 2),
                                      Space::config(Space::affine(1), 2)};
  for (const auto& x : catalog)
    for (const auto& y : catalog) {
      const auto p = Space::product({x, y});
      for (auto fl : {Flavor::ordinary, Flavor::borel_moore})
        EXPECT_EQ(homology(p, fl, Twist::trivial, Coefficients::rational),
                  tensor(homology(x, fl, Twist::trivial, Coefficients::rational),
                         homology(y, fl, Twist::trivial, Coefficients::rational)))
            << p.to_string();
    }
}

TEST(SpaceCatalog, EulerCharacteristicWithCompactSupports) {
  const std::vector<Space> catalog = {Space::point(),
                                      Space::affine(3),
                                      Space::proj(1),
                                      Space::proj(3),
                                      Space::grassmann(2, 4),
                                      Space::pgl(3),
                                      Space::pgl(4),
                                      Space::config(Space::proj(2), 2),
                                      Space::config(Space::proj(1), 2),
                                      Space::config(Space::affine(2), 2)};
  for (const auto& x : catalog) {
    EXPECT_EQ(euler_cs(x), bm(x).euler_characteristic()) << x.to_string();
    EXPECT_EQ(euler_cs(x), ord(x).euler_characteristic()) << x.to_string();
    for (const auto& y : catalog) EXPECT_EQ(euler_cs(Space::product({x, y})), euler_cs(x) * euler_cs(y));
  }
  for (int n = 0; n <= 3; ++n)
    for (int k = 1; k <= 5; ++k) {
      const auto c = Space::config(Space::proj(n), k);
      EXPECT_EQ(euler_cs(c), bm_sign(c).euler_characteristic()) << c.to_string();
    }
  for (auto [n, k] : {std::pair{2, 3}, {2, 4}, {3, 3}, {3, 4}})
    EXPECT_EQ(euler_cs(Space::generic_config(n, k)), generic_config_homology(n, k).euler_characteristic());
}
