#pragma once

// From H̄_*(Σ) to the cohomology of the complement, the quotient by the C*
// factor, factorizations into (1+t^a), and case reports as tables or JSON.

#include <chrono>
#include <optional>

#include "hypcoh/census.hpp"
#include "hypcoh/spec_io.hpp"
#include "hypcoh/spectral_engine.hpp"

namespace hypcoh {

/// H^0 = 1 and H^i = H̄_{2D-i-1}(Σ) for i > 0; torsion moves with its degree.
inline GradedModule alexander_dual(const GradedModule& sigma, int D) {
  GradedModule out(sigma.mode());
  out.add_free(0, 1);
  for (const auto& [j, e] : sigma.entries()) {
    if (e.is_zero()) continue;
    if (j < 0 || j > 2 * D - 1)
      throw Error(ErrorKind::out_of_range, "H̄_" + std::to_string(j) + " outside [0, 2D-1] for D = " + std::to_string(D));
    out.add_entry(2 * D - 1 - j, e);
  }
  return out;
}

/// Complement = N × C*, so P_N = P_complement / (1+t).
inline PoincarePolynomial project_to_N(const PoincarePolynomial& complement) { return divide_by_one_plus_t(complement); }

/// Greedy: divide by 1+t^a for the lowest surviving positive degree a.
inline std::vector<int> factor_odd_generators(const PoincarePolynomial& p) {
  if (p.coefficient(0) != 1) throw Error(ErrorKind::no_factorization, p.to_string() + " does not start with 1");
  std::vector<int> out;
  PoincarePolynomial rest = p;
  while (rest.degree() > 0) {
    int a = 1;
    while (rest.coefficient(a) == 0) ++a;
    try {
      rest = divide_by_one_plus_t_power(rest, a);
    } catch (const Error&) {
      throw Error(ErrorKind::no_factorization, p.to_string() + " is not a product of factors 1+t^a");
    }
    out.push_back(a);
  }
  return out;
}

inline PoincarePolynomial expand_factors(const std::vector<int>& exponents) {
  PoincarePolynomial p = PoincarePolynomial::one();
  for (int a : exponents) p = p * PoincarePolynomial::one_plus_t_power(a);
  return p;
}

inline std::string render_factors(const std::vector<int>& exponents) {
  if (exponents.empty()) return "1";
  std::string s;
  for (int a : exponents) s += a == 1 ? "(1+t)" : "(1+t^" + std::to_string(a) + ")";
  return s;
}

/// Exterior algebra on odd generators of degrees 2a-1 gives the a's; nullopt when
/// some generator has even degree (no purity prediction).
inline std::optional<std::vector<int>> purity_exponents(const PoincarePolynomial& complement) {
  std::vector<int> out;
  for (int deg : factor_odd_generators(complement)) {
    if (deg % 2 == 0) return std::nullopt;
    out.push_back((deg + 1) / 2);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Reports

struct CaseReport {
  std::string case_id;
  int D = 0;
  Coefficients mode = Coefficients::rational;
  bool projectivize = true;
  int columns = 0;
  SSResult result;
  GradedModule sigma_homology;
  GradedModule complement_cohomology;
  PoincarePolynomial complement_poincare;
  std::optional<PoincarePolynomial> N_poincare;
  std::optional<std::vector<int>> factored_form;  // of the complement polynomial
  double elapsed_ms = 0;

  std::string e1_table() const { return render_table(result.e1, columns); }
  std::string e_infinity_table() const { return render_table(result.e_infinity, columns); }
  std::string aux_table() const { return render_table(result.aux_e1, columns); }
};

inline CaseReport build_report(const StratificationSpec& spec, Coefficients mode = Coefficients::rational,
                               bool parallel = false) {
  const auto t0 = std::chrono::steady_clock::now();
  CaseReport r;
  r.case_id = spec.case_id;
  r.D = spec.D;
  r.mode = mode;
  r.projectivize = spec.projectivize;
  r.columns = static_cast<int>(spec.strata.size());
  r.result = resolve(spec, mode, {}, parallel);
  r.sigma_homology = total_homology(r.result);
  r.complement_cohomology = alexander_dual(r.sigma_homology, spec.D);
  if (r.complement_cohomology.max_degree().value_or(0) > spec.D)
    throw Error(ErrorKind::inconsistent, spec.case_id + ": complement cohomology above degree D");
  r.complement_poincare = poincare_polynomial(r.complement_cohomology);
  if (spec.projectivize) r.N_poincare = project_to_N(r.complement_poincare);
  try {
    r.factored_form = factor_odd_generators(r.complement_poincare);
  } catch (const Error&) {
    r.factored_form = std::nullopt;
  }
  r.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

inline CaseReport build_report(const std::string& case_id, Coefficients mode = Coefficients::rational) {
  return build_report(builtin_spec(case_id), mode);
}

/// Rational complement polynomials of two cases agree.
inline bool same_complement(const std::string& a, const std::string& b) {
  return build_report(a).complement_poincare == build_report(b).complement_poincare;
}

/// Nondegenerate quadric triples and smooth plane cubics share rational cohomology.
inline bool smale_hirsch_check() { return same_complement("cubic-p2", "vf-222"); }

inline std::string to_text(const CaseReport& r) {
  std::ostringstream os;
  os << "case " << r.case_id << " (D = " << r.D << ", " << to_string(r.mode) << " coefficients)\n\n";
  os << "E1\n" << r.e1_table() << "\n";
  os << "E-infinity\n" << r.e_infinity_table() << "\n";
  os << "auxiliary E1\n" << r.aux_table() << "\n";
  os << "final column: " << r.result.final_column_source << "; patterns examined: " << r.result.patterns_examined << "\n";
  for (const auto& d : r.result.differentials)
    os << "d" << d.r << " (" << d.from.first << "," << d.from.second << ")->(" << d.to.first << "," << d.to.second
       << ") rank " << d.rank << (d.known ? " (given)" : "") << "\n";
  os << "H̄_*(Σ) = " << r.sigma_homology.to_string() << "\n";
  os << "H^*(complement) = " << r.complement_cohomology.to_string() << "\n";
  os << "complement P(t) = " << r.complement_poincare.to_string();
  if (r.factored_form) os << " = " << render_factors(*r.factored_form);
  os << "\n";
  if (r.N_poincare) {
    os << "N P(t) = " << r.N_poincare->to_string();
    if (r.factored_form && !r.factored_form->empty() && r.factored_form->front() == 1)
      os << " = " << render_factors({r.factored_form->begin() + 1, r.factored_form->end()});
    os << "\n";
  }
  return os.str();
}

inline Json cells_json(const E1Page& page) {
  Json arr = Json::array();
  for (const auto& [pq, e] : page.cells) {
    if (e.is_zero()) continue;
    Json c = {{"p", pq.first}, {"q", pq.second}, {"rank", e.free_rank}};
    if (!e.torsion.empty()) {
      Json t = Json::array();
      for (const auto& s : e.torsion) t.push_back({{"prime", s.prime}, {"exponent", s.exponent}, {"multiplicity", s.multiplicity}});
      c["torsion"] = t;
    }
    arr.push_back(c);
  }
  return arr;
}

inline Json to_json(const CaseReport& r) {
  Json diffs = Json::array();
  for (const auto& d : r.result.differentials)
    diffs.push_back({{"r", d.r}, {"from", {d.from.first, d.from.second}}, {"to", {d.to.first, d.to.second}}, {"rank", d.rank}, {"known", d.known}});
  Json j = {{"schema_version", 1},
            {"case_id", r.case_id},
            {"coefficients", to_string(r.mode)},
            {"D", r.D},
            {"e1", cells_json(r.result.e1)},
            {"e_infinity", cells_json(r.result.e_infinity)},
            {"auxiliary_e1", cells_json(r.result.aux_e1)},
            {"auxiliary_e_infinity", cells_json(r.result.aux_e_infinity)},
            {"final_column_source", r.result.final_column_source},
            {"differentials", diffs},
            {"patterns_examined", r.result.patterns_examined},
            {"sigma_homology", to_json(r.sigma_homology)},
            {"complement_cohomology", to_json(r.complement_cohomology)},
            {"complement_poincare", r.complement_poincare.coefficients()},
            {"complement_poincare_text", r.complement_poincare.to_string()}};
  j["N_poincare"] = r.N_poincare ? Json(r.N_poincare->coefficients()) : Json(nullptr);
  j["N_poincare_text"] = r.N_poincare ? Json(r.N_poincare->to_string()) : Json(nullptr);
  j["factored_form"] = r.factored_form ? Json(*r.factored_form) : Json(nullptr);
  j["elapsed_ms"] = r.elapsed_ms;
  return j;
}

// ---------------------------------------------------------------------------
// Census predictions from the pipeline

/// The built-in case whose complement governs a census task, if any.
inline std::optional<std::string> census_case(int d, int n, bool vector_field) {
  if (vector_field) return std::string("vf-222");
  if (d == 2 && n == 2) return std::string("quadric-p2");
  if (d == 3 && n == 2) return std::string("cubic-p2");
  if (d == 4 && n == 2) return std::string("quartic-p2");
  if (d == 3 && n == 3) return std::string("cubic-p3");
  return std::nullopt;
}

/// predicted_count built from the engine's own complement polynomial; nullopt when
/// there is no matching case or the polynomial has an even generator.
inline std::optional<Integer> pipeline_prediction(int d, int n, int q, bool vector_field) {
  const auto id = census_case(d, n, vector_field);
  if (!id) return std::nullopt;
  const CaseReport r = build_report(*id);
  const auto a = purity_exponents(r.complement_poincare);
  if (!a) return std::nullopt;
  return predicted_count(*a, r.D, q);
}

}  // namespace hypcoh
