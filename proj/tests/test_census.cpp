#include <gtest/gtest.h>

#include "hypcoh/duality_report.hpp"

using namespace hypcoh;

namespace {

CensusTask task(int d, int n, int q, CensusStrategy s, int k_max = 0, int threads = 1) {
  CensusTask t;
  t.d = d;
  t.n = n;
  t.q = q;
  t.strategy = s;
  t.k_max = k_max;
  t.threads = threads;
  return t;
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::inconsistent;
}

Integer gl3(int q) {
  const Integer Q(q);
  return Q * Q * Q * (Q - 1) * (Q * Q - 1) * (Q * Q * Q - 1);
}

}  // namespace

TEST(Census, SmallCounts) {
  struct Row {
    int d, n, q;
    long long count;
  };
  for (const Row& r : std::vector<Row>{{2, 2, 2, 28}, {2, 2, 3, 468}, {2, 2, 4, 3024}, {2, 2, 5, 12400}, {3, 2, 2, 336}, {3, 2, 3, 33696}})
    for (auto s : {CensusStrategy::enumerate, CensusStrategy::sieve}) {
      const auto res = run_census(task(r.d, r.n, r.q, s));
      EXPECT_EQ(res.count, r.count) << r.d << " " << r.n << " " << r.q << " " << to_string(s);
      EXPECT_EQ(res.strategy, s);
      EXPECT_EQ(res.k_max_used, default_k_max(r.d, r.n, false));
    }
}

TEST(Census, StrategiesAgree) {
  for (int d : {1, 2, 3})
    for (int q : {2, 3})
      EXPECT_EQ(run_census(task(d, 2, q, CensusStrategy::enumerate)).count, run_census(task(d, 2, q, CensusStrategy::sieve)).count)
          << d << " " << q;
  for (int q : {2, 3, 4})
    EXPECT_EQ(run_census(task(2, 1, q, CensusStrategy::enumerate)).count, run_census(task(2, 1, q, CensusStrategy::sieve)).count);
  EXPECT_EQ(run_census(task(2, 3, 2, CensusStrategy::enumerate)).count, run_census(task(2, 3, 2, CensusStrategy::sieve)).count);
}

TEST(Census, BinaryQuadraticForms) {
  // nonsingular binary quadratics = q^3 - q^2 (nonzero discriminant, or its
  // characteristic-2 analogue)
  for (int q : {2, 3, 4, 5}) EXPECT_EQ(run_census(task(2, 1, q, CensusStrategy::sieve)).count, Integer(q) * q * q - q * q) << q;
}

TEST(Census, KMaxSaturates) {
  std::vector<Integer> c;
  for (int k = 1; k <= 6; ++k) c.push_back(census_sieve(task(3, 2, 2, CensusStrategy::sieve, k)).count);
  for (int k = 1; k < 6; ++k) EXPECT_GE(c[static_cast<std::size_t>(k - 1)], c[static_cast<std::size_t>(k)]);
  EXPECT_GT(c[0], c[3]);  // points of higher degree matter
  for (int k = 4; k <= 6; ++k) EXPECT_EQ(c[static_cast<std::size_t>(k - 1)], c[3]);
  EXPECT_EQ(c[3], 336);
  EXPECT_EQ(default_k_max(3, 2, false), 4);
  EXPECT_EQ(default_k_max(3, 3, false), 8);
  EXPECT_EQ(default_k_max(2, 2, true), 4);
}

TEST(Census, DivisibleByScalars) {
  for (int q : {3, 4, 5}) {
    const Integer c = run_census(task(2, 2, q, CensusStrategy::sieve)).count;
    EXPECT_EQ(c % (q - 1), 0) << q;
  }
  EXPECT_EQ(run_census(task(3, 2, 3, CensusStrategy::sieve)).count % 2, 0);
}

TEST(Census, ThreadCountInvariance) {
  for (int threads : {2, 3}) {
    EXPECT_EQ(run_census(task(3, 2, 3, CensusStrategy::sieve, 0, threads)).count, 33696);
    EXPECT_EQ(run_census(task(3, 2, 2, CensusStrategy::enumerate, 0, threads)).count, 336);
  }
}

TEST(Census, Budgets) {
  EXPECT_EQ(kind_of([] { run_census(task(3, 3, 2, CensusStrategy::enumerate)); }), ErrorKind::budget_exceeded);
  auto t = task(3, 2, 3, CensusStrategy::sieve);
  t.budget = 1000;
  EXPECT_EQ(kind_of([&] { run_census(t); }), ErrorKind::budget_exceeded);
  EXPECT_EQ(kind_of([] { vf_census(3); }), ErrorKind::budget_exceeded);
  EXPECT_EQ(kind_of([] { vf_census(5); }), ErrorKind::bad_range);
  EXPECT_EQ(kind_of([] { run_census(task(3, 2, 6, CensusStrategy::sieve)); }), ErrorKind::invalid_field);
}

TEST(Census, QuadricTriples) {
  const auto s = vf_census(2);
  EXPECT_EQ(s.count, 86016);
  EXPECT_LE(s.count, Integer(1) << 18);
  EXPECT_EQ(vf_census(2, CensusStrategy::enumerate).count, s.count);
  EXPECT_EQ(s.forms, 1u << 18);
}

TEST(Prediction, Values) {
  EXPECT_EQ(predicted_count({1, 3}, 6, 2), 28);
  EXPECT_EQ(predicted_count({1, 3}, 6, 3), 468);
  EXPECT_EQ(predicted_count({1, 2, 3}, 10, 3), 33696);
  EXPECT_EQ(predicted_count({1, 2, 3, 4}, 20, 2), 322560);
  EXPECT_EQ(predicted_count({}, 4, 2), 16);
  EXPECT_EQ(kind_of([] { predicted_count({1, 1, 1}, 2, 2); }), ErrorKind::non_integer_result);
  EXPECT_EQ(kind_of([] { predicted_count({0}, 2, 2); }), ErrorKind::bad_range);
  EXPECT_EQ(kind_of([] { predicted_count({3}, 2, 2); }), ErrorKind::bad_range);
}

TEST(Prediction, DeterminantCrossCheck) {
  // a conic over odd q is smooth exactly when its Gram matrix is invertible
  for (int q : {3, 5}) EXPECT_EQ(quadric_determinant_count(2, q), run_census(task(2, 2, q, CensusStrategy::enumerate)).count) << q;
  EXPECT_EQ(quadric_determinant_count(1, 3), run_census(task(2, 1, 3, CensusStrategy::enumerate)).count);
  EXPECT_EQ(kind_of([] { quadric_determinant_count(2, 2); }), ErrorKind::bad_range);
}

TEST(Prediction, PipelineAgreesWithCensus) {
  for (int q : {2, 3, 5}) EXPECT_EQ(pipeline_prediction(2, 2, q, false), run_census(task(2, 2, q, CensusStrategy::sieve)).count) << q;
  for (int q : {2, 3}) EXPECT_EQ(pipeline_prediction(3, 2, q, false), run_census(task(3, 2, q, CensusStrategy::sieve)).count) << q;
  EXPECT_EQ(pipeline_prediction(2, 2, 2, true), vf_census(2).count);
}

TEST(Prediction, CubicSurfacesOverF2) {
  const auto r = run_census(task(3, 3, 2, CensusStrategy::sieve));
  EXPECT_EQ(r.count, 322560);
  EXPECT_EQ(pipeline_prediction(3, 3, 2, false), r.count);
}

TEST(Exploratory, QuarticCurves) {
  // no purity prediction (even generator); reduced quartics have at most six
  // singular points, so k_max = 6 is exact
  const Integer c2 = census_sieve(task(4, 2, 2, CensusStrategy::sieve, 6)).count;
  EXPECT_EQ(census_sieve(task(4, 2, 2, CensusStrategy::sieve, 9)).count, c2);
  EXPECT_EQ(census_enumerate(task(4, 2, 2, CensusStrategy::enumerate, 6)).count, c2);
  const Integer c3 = census_sieve(task(4, 2, 3, CensusStrategy::sieve, 6)).count;
  EXPECT_EQ(c2, 10920);
  EXPECT_EQ(c3, 8199360);
  EXPECT_EQ(pipeline_prediction(4, 2, 2, false), std::nullopt);
  // both counts are |GL_3(F_q)| (q^6 + 1); two fields cannot confirm a polynomial
  EXPECT_EQ(c2, gl3(2) * 65);
  EXPECT_EQ(c3, gl3(3) * 730);
  const ExploratoryFit fit = fit_two_counts(15, 2, c2, 3, c3);
  EXPECT_EQ(fit.counts.size(), 2u);
  EXPECT_FALSE(fit.to_string().empty());
}
