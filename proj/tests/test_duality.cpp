#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "hypcoh/cli.hpp"

using namespace hypcoh;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::inconsistent;
}

struct CliRun {
  int code;
  std::string out, err;
};

CliRun run(std::vector<std::string> args) {
  args.insert(args.begin(), "hypcoh_cli");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST(AlexanderDual, QuadricIntegral) {
  GradedModule sigma(Coefficients::integral);
  for (int j : {5, 6, 10}) sigma.add_free(j, 1);
  for (int j : {7, 8}) sigma.add_torsion(j, 2, 1);
  const GradedModule h = alexander_dual(sigma, 6);
  EXPECT_EQ(h.to_string(), "{0:1, 1:1, 3:Z/2, 4:Z/2, 5:1, 6:1}");
}

TEST(AlexanderDual, CubicRanks) {
  const GradedModule sigma{{10, 1}, {11, 1}, {13, 1}, {14, 1}, {15, 1}, {16, 1}, {18, 1}};
  const GradedModule h = alexander_dual(sigma, 10);
  EXPECT_EQ(h, (GradedModule{{0, 1}, {1, 1}, {3, 1}, {4, 1}, {5, 1}, {6, 1}, {8, 1}, {9, 1}}));
}

TEST(AlexanderDual, EmptyAndRange) {
  EXPECT_EQ(alexander_dual(GradedModule{}, 6), (GradedModule{{0, 1}}));
  EXPECT_EQ(kind_of([] { alexander_dual(GradedModule{{12, 1}}, 6); }), ErrorKind::out_of_range);
  EXPECT_EQ(kind_of([] { alexander_dual(GradedModule{{-1, 1}}, 6); }), ErrorKind::out_of_range);
}

TEST(AlexanderDual, IsAnInvolutionAwayFromDegreeZero) {
  const GradedModule sigma{{10, 1}, {13, 2}, {18, 1}};
  GradedModule h = alexander_dual(sigma, 10);
  GradedModule stripped;
  for (const auto& [i, e] : h.entries())
    if (i > 0) stripped.add_entry(i, e);
  GradedModule back = alexander_dual(stripped, 10);
  GradedModule back_stripped;
  for (const auto& [i, e] : back.entries())
    if (i > 0) back_stripped.add_entry(i, e);
  EXPECT_EQ(back_stripped, sigma);
}

TEST(ProjectToN, Cases) {
  EXPECT_EQ(build_report("cubic-p2").N_poincare, PoincarePolynomial({1, 0, 0, 1, 0, 1, 0, 0, 1}));
  EXPECT_EQ(build_report("quartic-p2").N_poincare, expand_factors({3, 5, 6}));
  EXPECT_EQ(build_report("cubic-p3").N_poincare, expand_factors({3, 5, 7}));
  EXPECT_EQ(build_report("quadric-p2").N_poincare, expand_factors({5}));
  EXPECT_FALSE(build_report("vf-222").N_poincare.has_value());
  EXPECT_EQ(kind_of([] { project_to_N(PoincarePolynomial{1, 0, 1}); }), ErrorKind::not_divisible);
}

TEST(Factorization, OddGenerators) {
  EXPECT_EQ(factor_odd_generators(expand_factors({1, 3, 5})), (std::vector<int>{1, 3, 5}));
  EXPECT_TRUE(factor_odd_generators(PoincarePolynomial::one()).empty());
  EXPECT_EQ(factor_odd_generators(build_report("quartic-p2").complement_poincare), (std::vector<int>{1, 3, 5, 6}));
  for (const auto& f : std::vector<std::vector<int>>{{1}, {1, 5}, {1, 3, 5, 7}, {2, 2}, {1, 1, 3}})
    EXPECT_EQ(expand_factors(factor_odd_generators(expand_factors(f))), expand_factors(f));
  EXPECT_EQ(kind_of([] { factor_odd_generators(PoincarePolynomial{1, 2}); }), ErrorKind::no_factorization);
  EXPECT_EQ(kind_of([] { factor_odd_generators(PoincarePolynomial{2, 1}); }), ErrorKind::no_factorization);
  EXPECT_EQ(kind_of([] { factor_odd_generators(PoincarePolynomial{1, 1, 1}); }), ErrorKind::no_factorization);
  EXPECT_EQ(render_factors({1, 3}), "(1+t)(1+t^3)");
  EXPECT_EQ(render_factors({}), "1");
}

TEST(Factorization, PurityExponents) {
  EXPECT_EQ(purity_exponents(expand_factors({1, 5})), (std::vector<int>{1, 3}));
  EXPECT_EQ(purity_exponents(build_report("cubic-p3").complement_poincare), (std::vector<int>{1, 2, 3, 4}));
  EXPECT_EQ(purity_exponents(build_report("quartic-p2").complement_poincare), std::nullopt);
}

TEST(Report, ComplementPolynomials) {
  for (const auto& id : builtin_case_ids()) {
    const CaseReport r = build_report(id);
    EXPECT_EQ(r.complement_poincare.evaluate(Integer(-1)), 0) << id;
    EXPECT_EQ(r.complement_poincare.evaluate(Integer(0)), 1) << id;
    EXPECT_LE(r.complement_poincare.degree(), r.D) << id;
    EXPECT_TRUE(r.factored_form.has_value()) << id;
  }
}

TEST(Report, SmaleHirsch) {
  EXPECT_TRUE(smale_hirsch_check());
  EXPECT_FALSE(same_complement("cubic-p2", "quartic-p2"));
  EXPECT_TRUE(same_complement("cubic-p2", "cubic-p2"));
}

TEST(Report, TextAndJson) {
  const CaseReport r = build_report("quadric-p2", Coefficients::integral);
  const std::string text = to_text(r);
  EXPECT_NE(text.find("H^*(complement) = {0:1, 1:1, 3:Z/2, 4:Z/2, 5:1, 6:1}"), std::string::npos);
  EXPECT_NE(text.find("(1+t)(1+t^5)"), std::string::npos);
  const Json j = to_json(r);
  EXPECT_EQ(j["schema_version"], 1);
  EXPECT_EQ(j["case_id"], "quadric-p2");
  EXPECT_EQ(j["N_poincare"], Json::array({1, 0, 0, 0, 0, 1}));
  bool torsion_seen = false;
  for (const auto& c : j["e_infinity"])
    if (c.contains("torsion")) torsion_seen = true;
  EXPECT_TRUE(torsion_seen);
  EXPECT_TRUE(to_json(build_report("vf-222"))["N_poincare"].is_null());
}

TEST(CensusLink, PipelinePredictions) {
  EXPECT_EQ(pipeline_prediction(2, 2, 2, false), Integer(28));
  EXPECT_EQ(pipeline_prediction(3, 2, 3, false), Integer(33696));
  EXPECT_EQ(pipeline_prediction(3, 3, 2, false), Integer(322560));
  EXPECT_EQ(pipeline_prediction(2, 2, 2, true), Integer(86016));
  EXPECT_EQ(pipeline_prediction(4, 2, 2, false), std::nullopt);
  EXPECT_EQ(pipeline_prediction(5, 2, 2, false), std::nullopt);
}

TEST(Cli, ComputeTable) {
  const auto r = run({"compute", "--case", "cubic-p2"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("N P(t) = 1 + t^3 + t^5 + t^8"), std::string::npos);
}

TEST(Cli, ComputeJsonAll) {
  const auto r = run({"compute", "--case", "all", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = Json::parse(r.out);
  ASSERT_TRUE(j.is_array());
  EXPECT_EQ(j.size(), builtin_case_ids().size());
}

TEST(Cli, ComputeFromSpecFile) {
  const auto path = (std::filesystem::temp_directory_path() / "hypcoh_cli_spec.json").string();
  save_spec(builtin_spec("quartic-p2"), path);
  const auto r = run({"compute", "--spec", path, "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(Json::parse(r.out)["N_poincare"], Json(expand_factors({3, 5, 6}).coefficients()));
  std::filesystem::remove(path);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run({"compute", "--case", "no-such-case"}).code, 2);
  EXPECT_EQ(run({"compute", "--format", "xml"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"check"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);

  auto spec = builtin_spec("cubic-p2");
  spec.strata[1].L_dim = 5;
  const auto path = (std::filesystem::temp_directory_path() / "hypcoh_cli_bad.json").string();
  save_spec(spec, path);
  const auto r = run({"compute", "--spec", path});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("Inconsistent"), std::string::npos) << r.err;
  std::filesystem::remove(path);
}

TEST(Cli, Spaces) {
  auto r = run({"spaces", "--expr", R"({"tag":"Config","base":{"tag":"Proj","n":2},"k":2})", "--twist", "sign"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(Json::parse(r.out)["text"], "{2:1, 4:1, 6:1}");
  r = run({"spaces", "--expr", R"({"tag":"SelfJoin","space":{"tag":"Proj","n":1},"k":3})"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(Json::parse(r.out)["text"], "{}");
  EXPECT_EQ(run({"spaces", "--expr", "{not json"}).code, 2);
  EXPECT_EQ(run({"spaces", "--expr", R"({"tag":"Klein"})"}).code, 2);
}

TEST(Cli, Census) {
  const auto r = run({"census", "--d", "3", "--n", "2", "--q", "2", "--strategy", "enumerate"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["count"], "336");
  EXPECT_EQ(j["predicted"], "336");
  EXPECT_EQ(j["match"], true);
  EXPECT_EQ(j["kmax_used"], 4);
  EXPECT_EQ(run({"census", "--q", "6"}).code, 2);
  EXPECT_EQ(run({"census", "--d", "3", "--n", "3", "--q", "2", "--strategy", "enumerate"}).code, 2);
}

TEST(Cli, CensusExploratoryFit) {
  const auto r = run({"census", "--d", "2", "--n", "2", "--q", "2", "--fit-q", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = Json::parse(r.out);
  // (q^6 - c)/q^4 is 9/4 at q = 2 and 29/9 at q = 3, so a = 35/36 and b = 2a - 9/4
  EXPECT_EQ(j["exploratory_fit"]["polynomial"], "q^6 - (35/36) q^5 + (-11/36) q^4");
  EXPECT_EQ(j["exploratory_fit"]["counts"], Json::array({"28", "468"}));
}

TEST(Cli, SpecDumpRoundTrips) {
  for (const auto& id : builtin_case_ids()) {
    const auto r = run({"spec", "--case", id});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(to_json(parse_spec(r.out)), to_json(builtin_spec(id))) << id;
  }
  EXPECT_EQ(run({"spec", "--case", "nope"}).code, 2);
}

TEST(Cli, CheckSelectedCriteria) {
  const auto r = run({"check", "--criterion", "1", "--criterion", "9"});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("PASS criterion 1"), std::string::npos);
  EXPECT_NE(r.out.find("PASS criterion 9"), std::string::npos);
  EXPECT_EQ(r.out.find("criterion 8"), std::string::npos);
}
