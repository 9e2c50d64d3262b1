#pragma once

// The acceptance criteria as executable checks: one verdict line per criterion.

#include <chrono>
#include <functional>
#include <ostream>

#include "hypcoh/duality_report.hpp"

namespace hypcoh {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string detail;
  double elapsed_ms = 0;
};

namespace acceptance {

using Cells = std::map<std::pair<int, int>, std::string>;

// Rendered cells of a page, e.g. {(1,7): "Z2"}.
inline Cells symbols(const E1Page& page) {
  Cells out;
  for (const auto& [pq, e] : page.cells)
    if (!e.is_zero()) out[pq] = entry_symbol(e, page.mode);
  return out;
}

inline Cells column(int p, std::initializer_list<int> qs, const std::string& sym) {
  Cells c;
  for (int q : qs) c[{p, q}] = sym;
  return c;
}

inline Cells join(std::initializer_list<Cells> parts) {
  Cells out;
  for (const auto& c : parts) out.insert(c.begin(), c.end());
  return out;
}

inline std::string render(const Cells& c) {
  std::string s;
  for (const auto& [pq, sym] : c) s += (s.empty() ? "" : " ") + ("(" + std::to_string(pq.first) + "," + std::to_string(pq.second) + "):" + sym);
  return s.empty() ? "(empty)" : s;
}

// Collects failures; the criterion passes when none were recorded.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok) failures_.push_back(what);
  }
  void expect_cells(const E1Page& page, const Cells& want, const std::string& what) {
    const Cells got = symbols(page);
    if (got != want) failures_.push_back(what + ": got " + render(got) + ", want " + render(want));
  }
  void expect_runtime(double ms, double limit_ms, const std::string& what) {
    if (ms >= limit_ms) failures_.push_back(what + " took " + std::to_string(ms) + " ms, limit " + std::to_string(limit_ms));
  }
  void note(const std::string& s) { notes_.push_back(s); }
  bool ok() const { return failures_.empty(); }
  std::string detail() const {
    std::string s;
    for (const auto& f : failures_) s += (s.empty() ? "" : "; ") + f;
    if (s.empty())
      for (const auto& n : notes_) s += (s.empty() ? "" : "; ") + n;
    return s;
  }

 private:
  std::vector<std::string> failures_;
  std::vector<std::string> notes_;
};

inline void c1_quadric(Check& c) {
  const CaseReport r = build_report("quadric-p2", Coefficients::integral);
  c.expect_cells(r.result.e1, join({column(1, {5, 7, 9}, "Z"), column(2, {3, 5, 7}, "Z"), column(3, {5}, "Z")}), "E1");
  c.expect_cells(r.result.e_infinity, join({column(1, {5, 9}, "Z"), column(1, {7}, "Z2"), column(2, {3}, "Z"), column(2, {5}, "Z2")}),
                 "E-infinity");
  GradedModule want(Coefficients::integral);
  for (int i : {0, 1, 5, 6}) want.add_free(i, 1);
  for (int i : {3, 4}) want.add_torsion(i, 2, 1, 1);
  c.expect(r.complement_cohomology == want, "complement cohomology " + r.complement_cohomology.to_string());
  c.expect_runtime(r.elapsed_ms, 1000, "quadric case");
  c.note("H^* = " + r.complement_cohomology.to_string());
}

inline void c2_cubic(Check& c) {
  const CaseReport r = build_report("cubic-p2");
  c.expect_cells(r.result.e1, join({column(1, {13, 15, 17}, "R"), column(2, {9, 11, 13}, "R"), column(4, {6}, "R")}), "E1");
  c.expect_cells(r.result.aux_e1, join({column(1, {-1, 1, 3}, "R"), column(2, {1, 3, 5}, "R"), column(4, {4}, "R")}), "auxiliary E1");
  c.expect_cells(r.result.aux_e_infinity, column(1, {-1}, "R"), "auxiliary E-infinity");
  c.expect(r.result.e_infinity == r.result.e1, "E-infinity differs from E1");
  c.expect(r.N_poincare && *r.N_poincare == PoincarePolynomial({1, 0, 0, 1, 0, 1, 0, 0, 1}),
           "N polynomial " + (r.N_poincare ? r.N_poincare->to_string() : std::string("absent")));
  c.expect_runtime(r.elapsed_ms, 1000, "cubic curves");
  c.note("P_N = " + r.N_poincare->to_string());
}

inline void c3_quartic(Check& c) {
  const CaseReport r = build_report("quartic-p2");
  c.expect_cells(r.result.e1,
                 join({column(1, {23, 25, 27}, "R"), column(2, {19, 21, 23}, "R"), column(4, {16}, "R"),
                       column(10, {5, 8, 10, 13}, "R"), column(13, {1, 4, 6, 9}, "R")}),
                 "E1");
  c.expect(r.N_poincare && *r.N_poincare == expand_factors({3, 5, 6}),
           "N polynomial " + (r.N_poincare ? r.N_poincare->to_string() : std::string("absent")));
  c.expect_runtime(r.elapsed_ms, 5000, "quartic curves");
  c.note("P_N = " + render_factors({3, 5, 6}));
}

inline void c4_cubic_surface(Check& c) {
  const CaseReport r = build_report("cubic-p3");
  Cells want = join({column(1, {31, 33, 35, 37}, "R"), column(2, {25, 27, 31, 33}, "R"), column(2, {29}, "R^2"),
                     column(4, {20, 22, 24, 26}, "R"), column(7, {16}, "R")});
  c.expect_cells(r.result.e1, want, "E1");
  c.expect(r.N_poincare && *r.N_poincare == expand_factors({3, 5, 7}),
           "N polynomial " + (r.N_poincare ? r.N_poincare->to_string() : std::string("absent")));
  c.expect_runtime(r.elapsed_ms, 5000, "cubic surfaces");
  c.note("P_N = " + render_factors({3, 5, 7}) + ", " + std::to_string(r.result.patterns_examined) + " patterns");
}

inline void c5_vector_fields(Check& c) {
  const CaseReport r = build_report("vf-222");
  c.expect_cells(r.result.e1, join({column(1, {29, 31, 33}, "R"), column(2, {25, 27, 29}, "R"), column(3, {23}, "R")}), "E1");
  c.expect(r.complement_poincare == expand_factors({1, 3, 5}), "full-space polynomial " + r.complement_poincare.to_string());
  c.expect(!r.N_poincare, "no projectivization expected");
  c.expect(smale_hirsch_check(), "cubic-curve and quadric-triple complements differ");
  c.expect_runtime(r.elapsed_ms, 1000, "quadric triples");
  c.note("P = " + render_factors({1, 3, 5}));
}

inline void c6_configurations(Check& c) {
  int pairs = 0;
  for (int n = 1; n <= 3; ++n)
    for (int k = 1; k <= n + 1; ++k) {
      const GradedModule h = homology(Space::config(Space::proj(n), k), Flavor::borel_moore, Twist::sign, Coefficients::rational);
      const GradedModule g = module_from_polynomial(grassmann_poincare(k, n + 1)).shifted(k * (k - 1));
      c.expect(h == g, "B(CP^" + std::to_string(n) + "," + std::to_string(k) + ") = " + h.to_string() + ", Grassmann data " + g.to_string());
      ++pairs;
    }
  for (int k = 2; k <= 6; ++k) {
    c.expect(self_join_page(k).reduced.is_zero(), "self-join " + std::to_string(k) + " not acyclic");
    c.expect(euler_cs(Link::self_join(Space::proj(1), k)) == 1, "self-join " + std::to_string(k) + " has χ_c != 1");
  }
  c.note(std::to_string(pairs) + " configuration pairs, self-joins 2..6");
}

inline void c7_euler(Check& c) {
  for (const auto& id : builtin_case_ids()) {
    const CaseReport r = build_report(id);
    c.expect(r.result.e1.alternating_rank_sum() == 1, id + ": alternating sum " + std::to_string(r.result.e1.alternating_rank_sum()));
    c.expect(r.complement_poincare.evaluate(Integer(-1)) == 0, id + ": complement polynomial nonzero at t = -1");
  }
  c.note("five cases");
}

inline void c8_census(Check& c, int threads) {
  struct Row {
    int d, n, q;
    bool vf;
    CensusStrategy strategy;
    long long expected;
    double limit_ms;
  };
  const std::vector<Row> rows = {
      {2, 2, 2, false, CensusStrategy::enumerate, 28, 10000},
      {2, 2, 3, false, CensusStrategy::enumerate, 468, 10000},
      {3, 2, 2, false, CensusStrategy::enumerate, 336, 10000},
      {3, 2, 3, false, CensusStrategy::enumerate, 33696, 10000},
      {3, 3, 2, false, CensusStrategy::sieve, 322560, 300000},
      {2, 2, 2, true, CensusStrategy::sieve, 86016, 300000},
  };
  std::string summary;
  for (const auto& row : rows) {
    CensusTask t;
    t.d = row.d;
    t.n = row.n;
    t.q = row.q;
    t.vector_field = row.vf;
    t.strategy = row.strategy;
    t.threads = threads;
    const CensusResult res = run_census(t);
    const auto pred = pipeline_prediction(row.d, row.n, row.q, row.vf);
    const std::string tag = row.vf ? "vf q=" + std::to_string(row.q)
                                   : "(" + std::to_string(row.d) + "," + std::to_string(row.n) + "," + std::to_string(row.q) + ")";
    c.expect(res.count == row.expected, tag + " counted " + res.count.str());
    c.expect(pred && *pred == res.count, tag + " prediction " + (pred ? pred->str() : std::string("absent")));
    c.expect_runtime(res.elapsed_ms, row.limit_ms, tag);
    summary += (summary.empty() ? "" : " ") + tag + "=" + res.count.str();
  }
  // strategy equivalence
  for (auto [d, q] : {std::pair{2, 2}, {2, 3}, {3, 2}, {3, 3}}) {
    CensusTask t;
    t.d = d;
    t.n = 2;
    t.q = q;
    t.threads = threads;
    t.strategy = CensusStrategy::enumerate;
    const Integer a = run_census(t).count;
    t.strategy = CensusStrategy::sieve;
    const Integer b = run_census(t).count;
    c.expect(a == b, "strategies disagree on (" + std::to_string(d) + ",2," + std::to_string(q) + ")");
  }
  // k_max saturation: nothing changes past (d-1)^n = 4
  std::vector<Integer> by_k;
  for (int k = 1; k <= 6; ++k) {
    CensusTask t;
    t.d = 3;
    t.n = 2;
    t.q = 2;
    t.k_max = k;
    by_k.push_back(census_sieve(t).count);
  }
  for (int k = 4; k <= 6; ++k) c.expect(by_k[static_cast<std::size_t>(k - 1)] == by_k[3], "k_max " + std::to_string(k) + " changes the count");
  c.note(summary);
}

inline void c9_negative(Check& c) {
  ConstraintSet no_div;
  no_div.one_plus_t = false;
  try {
    resolve(builtin_spec("cubic-p2"), Coefficients::rational, no_div);
    c.expect(false, "cubic-p2 without divisibility resolved uniquely");
  } catch (const AmbiguousError& e) {
    c.note("without divisibility: " + std::to_string(e.candidates().size()) + " candidates");
  }
  auto bad = builtin_spec("cubic-p2");
  bad.strata[1].L_dim = 5;
  try {
    resolve(bad);
    c.expect(false, "cubic-p2 with a wrong L_dim resolved");
  } catch (const Error& e) {
    c.expect(e.kind() == ErrorKind::inconsistent, std::string("wrong L_dim raised ") + to_string(e.kind()));
  }
}

}  // namespace acceptance

inline std::vector<std::pair<int, std::string>> acceptance_titles() {
  return {{1, "quadric case, integral coefficients"},
          {2, "cubic curves"},
          {3, "quartic curves"},
          {4, "cubic surfaces"},
          {5, "quadric triples and the Smale-Hirsch comparison"},
          {6, "configuration spaces and self-joins"},
          {7, "Euler characteristic invariant"},
          {8, "finite-field census"},
          {9, "negative controls"}};
}

/// Runs the selected criteria (all when `only` is empty).
inline std::vector<CriterionResult> run_acceptance(const std::vector<int>& only = {}, int threads = 1) {
  using namespace acceptance;
  const std::map<int, std::function<void(Check&)>> checks = {
      {1, c1_quadric},       {2, c2_cubic},   {3, c3_quartic},
      {4, c4_cubic_surface}, {5, c5_vector_fields}, {6, c6_configurations},
      {7, c7_euler},         {8, [threads](Check& c) { c8_census(c, threads); }}, {9, c9_negative},
  };
  std::vector<CriterionResult> out;
  for (const auto& [id, title] : acceptance_titles()) {
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    CriterionResult r{id, title};
    Check c;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      checks.at(id)(c);
    } catch (const std::exception& e) {
      c.expect(false, std::string("raised ") + e.what());
    }
    r.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    r.pass = c.ok();
    r.detail = c.detail();
    out.push_back(std::move(r));
  }
  return out;
}

inline void print_acceptance(const std::vector<CriterionResult>& results, std::ostream& os) {
  for (const auto& r : results) {
    char ms[32];
    std::snprintf(ms, sizeof ms, "%.1f", r.elapsed_ms);
    os << (r.pass ? "PASS" : "FAIL") << " criterion " << r.id << ": " << r.title << " [" << ms << " ms]";
    if (!r.detail.empty()) os << " - " << r.detail;
    os << "\n";
  }
}

}  // namespace hypcoh
