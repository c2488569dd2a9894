#include <gtest/gtest.h>

#include "corgal/formula.hpp"
#include "corgal/parser.hpp"
#include "corgal/validity.hpp"

using namespace corgal;

namespace {

Formula p() { return Formula::atom("p"); }
Formula q() { return Formula::atom("q"); }

}  // namespace

TEST(Stratum, LeastContainingFragment) {
  EXPECT_EQ(stratum(parse_formula("K a p & q")), Stratum::EL);
  EXPECT_EQ(stratum(parse_formula("<! p> K a p")), Stratum::PAL);
  EXPECT_EQ(stratum(parse_formula("[{a}, top] p")), Stratum::RGAL);
  EXPECT_EQ(stratum(parse_formula("<{a}, q> p")), Stratum::RGAL);
  EXPECT_EQ(stratum(parse_formula("p -> <[{a}]> p")), Stratum::CoRGAL);
  EXPECT_EQ(stratum(Formula::top()), Stratum::EL);
}

TEST(Desugar, ProducesCoreOnly) {
  const auto f = parse_formula("(p | q) -> <[{a}]> M b <! p> (q <-> p)");
  const auto d = desugar(f);
  EXPECT_TRUE(is_core(d));
  EXPECT_FALSE(is_core(f));
  EXPECT_EQ(desugar(d), d);
}

TEST(Desugar, DualsExpandAsNegatedBoxes) {
  EXPECT_EQ(desugar(parse_formula("<[{a}]> p")), parse_formula("~[<{a}>] ~p"));
  EXPECT_EQ(desugar(parse_formula("<{a}, q> p")), parse_formula("~[{a}, q] ~p"));
  EXPECT_EQ(desugar(parse_formula("M a p")), parse_formula("~K a ~p"));
}

TEST(Desugar, IdempotentOnRandomFormulas) {
  const Vocabulary v{{"p", "q"}, {"a", "b"}};
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const auto f = gen_formula(seed, Stratum::CoRGAL, 4, v.atoms, v.agents);
    const auto d = desugar(f);
    EXPECT_TRUE(is_core(d));
    EXPECT_EQ(desugar(d), d);
  }
}

TEST(Measures, SizeCountsConditionFree) {
  // Size([G,χ]φ) = Size(φ) + 1 regardless of χ.
  EXPECT_EQ(size(Formula::rel_group({"a"}, parse_formula("K a (p & q)"), p())), 2u);
  EXPECT_EQ(size(p()), 1u);
  EXPECT_EQ(size(Formula::neg(p())), 2u);
  EXPECT_EQ(size(Formula::conj(p(), q())), 3u);
  // Size([ψ]φ) = Size(ψ) + 3 Size(φ)
  EXPECT_EQ(size(Formula::ann(p(), q())), 4u);
  EXPECT_EQ(size(Formula::coal({"a"}, p())), 2u);
}

TEST(Measures, Depths) {
  const auto f = Formula::rel_group({"a"}, Formula::rel_group({}, p(), p()), Formula::coal({"b"}, p()));
  EXPECT_EQ(depth_box(f), 2u);
  EXPECT_EQ(depth_coal(f), 1u);
  EXPECT_EQ(depth_box(Formula::coal({"a"}, Formula::rel_group({}, p(), p()))), 1u);
  EXPECT_EQ(depth_coal(Formula::coal({"a"}, Formula::coal({}, p()))), 2u);
}

TEST(Measures, UnfoldingIsSmaller) {
  const auto chi = q();
  const auto psi = parse_formula("K a q");
  const auto rel = Formula::rel_group({"a"}, chi, p());
  EXPECT_TRUE(order_lt(Formula::conj(chi, Formula::ann(Formula::conj(psi, chi), p())), rel));
  EXPECT_FALSE(order_lt(rel, rel));
}

TEST(Measures, OrderIsStrict) {
  const Vocabulary v{{"p", "q"}, {"a", "b"}};
  std::vector<Formula> fs;
  for (std::uint64_t seed = 0; seed < 60; ++seed) fs.push_back(gen_formula(seed, Stratum::CoRGAL, 3, v.atoms, v.agents));
  for (const auto& a : fs) {
    EXPECT_FALSE(order_lt(a, a));
    for (const auto& b : fs)
      for (const auto& c : fs)
        if (order_lt(a, b) && order_lt(b, c)) {
          EXPECT_TRUE(order_lt(a, c));
        }
  }
}

TEST(NecessityForms, InstantiateAndDepth) {
  const auto eta = NecessityForm::imp(p(), NecessityForm::know("a", NecessityForm::ann(q(), NecessityForm::hole())));
  EXPECT_EQ(eta.depth(), 3u);
  EXPECT_EQ(eta.hole_count(), 1u);
  EXPECT_EQ(nf_instantiate(eta, Formula::top()), parse_formula("p -> K a [! q] top"));
  EXPECT_EQ(nf_instantiate(NecessityForm::hole(), p()), p());
}

TEST(GroupKnowledge, EmptyGroupDenotesTop) {
  EXPECT_EQ(GroupKnowledgeFormula{}.denotation(), Formula::top());
  const auto s = GroupKnowledgeFormula::silence({"a", "b"});
  EXPECT_EQ(s.denotation(), parse_formula("K a top & K b top"));
  EXPECT_EQ(s.group(), (Group{"a", "b"}));
}

TEST(Generator, DeterministicAndBounded) {
  const std::vector<std::string> atoms{"p", "q", "r"}, agents{"a", "b", "c"};
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto f = gen_formula(seed, Stratum::PAL, 3, atoms, agents);
    EXPECT_EQ(f, gen_formula(seed, Stratum::PAL, 3, atoms, agents));
    EXPECT_LE(stratum(f), Stratum::PAL);
    EXPECT_LE(formula_height(f), 3u);
  }
}

TEST(Groups, SetOperations) {
  EXPECT_EQ(group_union({"a"}, {"b"}), (Group{"a", "b"}));
  EXPECT_EQ(group_minus({"a", "b", "c"}, {"b"}), (Group{"a", "c"}));
  EXPECT_TRUE(groups_disjoint({"a"}, {"b"}));
  EXPECT_FALSE(groups_disjoint({"a", "b"}, {"b"}));
}
