#include <gtest/gtest.h>

#include "corgal/validity.hpp"

using namespace corgal;

namespace {

SuiteConfig small_config() {
  SuiteConfig c;
  c.model_count = 40;
  c.bindings_per_model = 5;
  c.min_refutations = 20;
  c.samples = 200;
  return c;
}

}  // namespace

TEST(AxiomInstance, Examples) {
  Bindings b;
  b.phi = parse_formula("p & q");
  b.atom = "p";
  EXPECT_EQ(axiom_instance("A5", b), parse_formula("[! p & q] p <-> (p & q -> p)"));

  Bindings c;
  c.group = Group{"a"};
  c.chi = parse_formula("q");
  c.phi = parse_formula("p");
  c.psi_g = GroupKnowledgeFormula{{{"a", parse_formula("q")}}};
  EXPECT_EQ(axiom_instance("A10", c), parse_formula("[{a}, q] p -> q & [! K a q & q] p"));

  Bindings d;
  d.phi = parse_formula("p");
  d.all_agents = {"a", "b", "c"};
  EXPECT_EQ(axiom_instance("C3", d), parse_formula("~<[{}]> ~p -> <[{a,b,c}]> p"));
}

TEST(AxiomInstance, Errors) {
  EXPECT_THROW(axiom_instance("A1", Bindings{}), MissingBinding);
  EXPECT_THROW(axiom_instance("A0", Bindings{}), MissingBinding);
  EXPECT_THROW(axiom_instance("Z9", Bindings{}), MissingBinding);
  Bindings b;
  b.group = Group{"a"};
  b.group2 = Group{"a", "b"};
  b.phi = parse_formula("p");
  b.psi = parse_formula("q");
  EXPECT_THROW(axiom_instance("C5", b), DisjointnessViolation);
}

TEST(AxiomInstance, TautologySkeletonsAreTautologies) {
  Rng rng(3);
  const Vocabulary v{{"p", "q"}, {"a", "b"}};
  for (int i = 0; i < 100; ++i) {
    const auto b = random_bindings(rng, "A0", v, 2);
    ASSERT_TRUE(b.skeleton);
    EXPECT_EQ(stratum(*b.skeleton), Stratum::EL);
    EXPECT_NO_THROW(axiom_instance("A0", b));
  }
}

TEST(AxiomSuite, PassesAndIsDeterministic) {
  const auto cfg = small_config();
  const auto a = run_axiom_suite(cfg);
  EXPECT_TRUE(a.passed()) << report_summary(a);
  EXPECT_EQ(a.skipped, 0u);
  EXPECT_GT(a.cases_run, 0u);
  EXPECT_EQ(report_to_json(a).dump(), report_to_json(run_axiom_suite(cfg)).dump());
}

TEST(AxiomSuite, CorruptedSchemaIsCaughtAndReplays) {
  auto table = default_axiom_table();
  for (auto& [id, make] : table)
    if (id == "A6")
      make = [](const Bindings& b) {
        return Formula::iff(Formula::ann(*b.phi, Formula::neg(*b.psi)), Formula::neg(Formula::ann(*b.phi, *b.psi)));
      };
  const auto rep = run_axiom_suite(small_config(), table);
  ASSERT_FALSE(rep.passed());
  for (const auto& f : rep.failures) {
    EXPECT_EQ(f.claim, "A6");
    Checker ck;
    EXPECT_FALSE(ck.eval(parse_model(f.model), f.state, parse_formula(f.formula)));
  }
}

TEST(RuleSuite, EmptyPool) {
  const auto rep = run_rule_suite(small_config(), {});
  EXPECT_TRUE(rep.passed());
  EXPECT_EQ(rep.cases_run, 0u);
}

TEST(RuleSuite, NonValidPremiseIsCaught) {
  const std::vector<PremiseFn> pool{[](Rng&, const Vocabulary&, std::size_t) { return parse_formula("K a p"); }};
  EXPECT_FALSE(run_rule_suite(small_config(), pool).passed());
}

TEST(RuleSuite, OnlyRelativisedRuleCanFailAndOnlyWhereConditionIsFalse) {
  const auto rep = run_rule_suite(small_config());
  for (const auto& f : rep.failures) {
    EXPECT_EQ(f.claim, "R3");
    EXPECT_EQ(f.witness, "condition false at this state");
  }
}

TEST(QuantifierRuleSuite, WitnessesRefutePremises) {
  const auto rep = run_quantifier_rule_suite(small_config());
  EXPECT_TRUE(rep.passed()) << report_summary(rep);
  EXPECT_GE(rep.counters.at("refuted R5"), 20u);
  EXPECT_GE(rep.counters.at("refuted R6"), 20u);
}

TEST(QuantifierRuleSuite, NoWitnessDemandedWhenConclusionHolds) {
  Checker ck;
  const auto m = figures::train();
  EXPECT_TRUE(ck.eval(m, "w", parse_formula("[{c}, top] ~K c ~p")));
}

TEST(QuantifierRuleSuite, LiftsThroughNecessityForms) {
  const auto m = figures::train();
  Checker ck;
  const auto q = parse_formula("[{a}, top] ~K c ~p");
  const auto eta = NecessityForm::know("c", NecessityForm::ann(parse_formula("top"), NecessityForm::hole()));
  ASSERT_FALSE(ck.eval(m, "w", eta.instantiate(q)));
  const auto psi = refute_through(ck, m, 0, eta, q);
  ASSERT_TRUE(psi);
  EXPECT_FALSE(ck.eval(m, "w", eta.instantiate(Formula::conj(Formula::top(),
                                                              Formula::ann(Formula::conj(psi->denotation(), Formula::top()),
                                                                           parse_formula("~K c ~p"))))));
}

TEST(TheoremSuite, Passes) {
  const auto rep = run_theorem_suite(small_config());
  EXPECT_TRUE(rep.passed()) << report_summary(rep);
}

TEST(Repro, PassesAndDetectsMutation) {
  EXPECT_TRUE(run_counterexample_repro().passed());
  auto doc = nlohmann::json::parse(figures::kCounterexampleDocument);
  doc["partitions"]["c"] = {{"pqr"}, {"pqnr"}, {"npqr"}, {"pnqr"}};
  EXPECT_FALSE(run_counterexample_repro(figures::train(), parse_model(doc.dump())).passed());
}

TEST(TranslationMeasures, Passes) {
  const auto rep = run_translation_and_measure_suite(small_config());
  EXPECT_TRUE(rep.passed()) << report_summary(rep);
}

TEST(OpenQuestions, NeverFail) {
  const auto rep = run_open_question_suite(small_config());
  EXPECT_TRUE(rep.passed());
  EXPECT_GT(rep.cases_run, 0u);
}

TEST(SuiteConfig, Validation) {
  SuiteConfig c;
  c.max_states = 7;
  EXPECT_THROW(run_axiom_suite(c), Error);
  c.max_states = 0;
  EXPECT_THROW(run_theorem_suite(c), Error);
  EXPECT_THROW(run_suite("nonsense", SuiteConfig{}), Error);
}

TEST(SuiteConfig, CapExceededIsSkipNotPass) {
  auto c = small_config();
  c.enumeration_cap = 1;
  const auto rep = run_theorem_suite(c);
  EXPECT_GT(rep.skipped, 0u);
  EXPECT_FALSE(rep.skip_notes.empty());
}
