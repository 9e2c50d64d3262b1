#pragma once

// Command-line front end: compute, spaces, census, spec, check.
// Exit codes: 0 success, 1 ambiguous or inconsistent input, 2 usage errors.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "hypcoh/acceptance.hpp"

namespace hypcoh {

namespace cli {

inline int exit_code(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::ambiguous:
    case ErrorKind::inconsistent: return 1;
    default: return 2;
  }
}

inline bool is_space_tag(const std::string& tag) {
  for (const char* t : {"Point", "Affine", "Proj", "Grassmann", "Config", "GenericConfig", "PGL", "Product", "Known"})
    if (tag == t) return true;
  return false;
}

}  // namespace cli

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cohomology of spaces of nonsingular hypersurfaces"};
  app.require_subcommand(1);

  std::string case_id = "all", coeffs = "rational", format = "table", spec_file;
  bool parallel = false;
  auto* compute = app.add_subcommand("compute", "resolve the spectral sequence of a case");
  compute->add_option("--case", case_id, "case id or 'all'");
  compute->add_option("--coefficients", coeffs)->check(CLI::IsMember({"rational", "integral"}));
  compute->add_option("--format", format)->check(CLI::IsMember({"table", "json"}));
  compute->add_option("--spec", spec_file, "stratification spec (JSON) instead of a built-in case");
  compute->add_flag("--parallel", parallel, "enumerate patterns on several threads");

  std::string expr, flavor = "borel_moore", twist = "trivial";
  auto* spaces = app.add_subcommand("spaces", "homology of a space or link expression");
  spaces->add_option("--expr", expr, "SpaceExpr or LinkExpr as JSON")->required();
  spaces->add_option("--flavor", flavor)->check(CLI::IsMember({"ordinary", "borel_moore"}));
  spaces->add_option("--twist", twist)->check(CLI::IsMember({"trivial", "sign"}));
  spaces->add_option("--coefficients", coeffs)->check(CLI::IsMember({"rational", "integral"}));

  CensusTask task;
  std::string strategy = "sieve";
  auto* census = app.add_subcommand("census", "count nonsingular forms over a finite field");
  census->add_option("--d", task.d, "degree")->check(CLI::Range(1, 8));
  census->add_option("--n", task.n, "projective dimension")->check(CLI::Range(1, 4));
  census->add_option("--q", task.q, "field size")->required();
  census->add_option("--kmax", task.k_max, "largest closed-point degree (0: default)");
  census->add_option("--strategy", strategy)->check(CLI::IsMember({"enumerate", "sieve"}));
  census->add_option("--threads", task.threads)->check(CLI::Range(1, 256));
  census->add_flag("--vf", task.vector_field, "triples of ternary quadrics");
  census->add_option("--budget", task.budget, "forms (enumerate) or bits (sieve); 0: default");
  int fit_q = 0, fit_kmax = 0;
  census->add_option("--fit-q", fit_q, "also count over this field and fit q^D - a q^(D-1) + b q^(D-2) (exploratory)");
  census->add_option("--fit-kmax", fit_kmax, "k_max for the second field (0: default)");

  std::string dump_id;
  auto* spec_cmd = app.add_subcommand("spec", "print a built-in stratification spec as JSON");
  spec_cmd->add_option("--case", dump_id, "case id")->required();

  bool all = false;
  std::vector<int> criteria;
  auto* check = app.add_subcommand("check", "run the acceptance criteria");
  check->add_flag("--all", all, "run every criterion");
  check->add_option("--criterion", criteria, "criterion numbers");
  check->add_option("--threads", task.threads)->check(CLI::Range(1, 256));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return 2;
  }

  const Coefficients mode = coeffs == "integral" ? Coefficients::integral : Coefficients::rational;
  try {
    if (compute->parsed()) {
      std::vector<StratificationSpec> specs;
      if (!spec_file.empty()) {
        specs.push_back(load_spec(spec_file));
      } else if (case_id == "all") {
        for (const auto& id : builtin_case_ids()) specs.push_back(builtin_spec(id));
      } else {
        specs.push_back(builtin_spec(case_id));
      }
      Json reports = Json::array();
      for (const auto& s : specs) {
        const CaseReport r = build_report(s, mode, parallel);
        if (format == "json") reports.push_back(to_json(r));
        else out << to_text(r) << "\n";
      }
      if (format == "json") out << (reports.size() == 1 ? reports[0] : reports).dump(2) << "\n";
      return 0;
    }
    if (spaces->parsed()) {
      Json j;
      try {
        j = Json::parse(expr);
      } catch (const Json::parse_error& e) {
        throw ParseError("expr", e.what());
      }
      const std::string tag = j.is_object() && j.contains("tag") && j["tag"].is_string() ? j["tag"].get<std::string>() : "";
      Json res;
      if (cli::is_space_tag(tag)) {
        const Space x = space_from_json(j, "expr");
        const GradedModule h = homology(x, flavor == "ordinary" ? Flavor::ordinary : Flavor::borel_moore,
                                        twist == "sign" ? Twist::sign : Twist::trivial, mode);
        res = {{"kind", "space"}, {"flavor", flavor}, {"twist", twist}, {"homology", to_json(h)}, {"text", h.to_string()}};
      } else {
        const Link l = link_from_json(j, "expr");
        const GradedModule h = detail::eval_link_mode(l, mode);
        res = {{"kind", "link"}, {"reduced_homology", to_json(h)}, {"text", h.to_string()}};
      }
      out << res.dump(2) << "\n";
      return 0;
    }
    if (census->parsed()) {
      task.strategy = strategy == "enumerate" ? CensusStrategy::enumerate : CensusStrategy::sieve;
      const CensusResult r = run_census(task);
      std::optional<Integer> pred = r.predicted;
      if (!pred) pred = pipeline_prediction(task.d, task.n, task.q, task.vector_field);
      Json j = {{"d", task.d}, {"n", task.n}, {"q", task.q}, {"vector_field", task.vector_field},
                {"strategy", to_string(r.strategy)}, {"count", r.count.str()}};
      j["predicted"] = pred ? Json(pred->str()) : Json(nullptr);
      j["match"] = pred ? Json(*pred == r.count) : Json(nullptr);
      j["elapsed_ms"] = r.elapsed_ms;
      j["kmax_used"] = r.k_max_used;
      if (fit_q) {
        CensusTask t2 = task;
        t2.q = fit_q;
        t2.k_max = fit_kmax;
        const CensusResult r2 = run_census(t2);
        const int D = static_cast<int>(task.vector_field ? 3 * monomials(2, 2).size() : monomials(task.n, task.d).size());
        const ExploratoryFit fit = fit_two_counts(D, task.q, r.count, fit_q, r2.count);
        j["exploratory_fit"] = {{"q", {task.q, fit_q}},
                                {"counts", {r.count.str(), r2.count.str()}},
                                {"kmax_used", {r.k_max_used, r2.k_max_used}},
                                {"polynomial", fit.to_string()},
                                {"note", "two counts determine the fit; it is not a prediction"}};
      }
      out << j.dump(2) << "\n";
      return 0;
    }
    if (spec_cmd->parsed()) {
      out << to_json(builtin_spec(dump_id)).dump(2) << "\n";
      return 0;
    }
    if (check->parsed()) {
      if (!all && criteria.empty()) {
        err << "check: pass --all or --criterion N\n";
        return 2;
      }
      const auto results = run_acceptance(all ? std::vector<int>{} : criteria, task.threads);
      print_acceptance(results, out);
      for (const auto& r : results)
        if (!r.pass) return 1;
      return 0;
    }
  } catch (const AmbiguousError& e) {
    err << e.what() << "\n";
    for (const auto& c : e.candidates()) err << "  candidate: " << c << "\n";
    return 1;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return cli::exit_code(e);
  }
  return 2;
}

}  // namespace hypcoh
