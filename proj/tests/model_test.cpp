#include <gtest/gtest.h>

#include "corgal/checker.hpp"
#include "corgal/figures.hpp"
#include "corgal/model.hpp"
#include "corgal/parser.hpp"
#include "oracles.hpp"

using namespace corgal;

TEST(StateSet, Basics) {
  auto s = StateSet::of(5, {0, 3});
  EXPECT_EQ(s.count(), 2u);
  EXPECT_TRUE(s.contains(3));
  EXPECT_FALSE(s.contains(1));
  EXPECT_EQ(s.complement(), StateSet::of(5, {1, 2, 4}));
  EXPECT_EQ(s.rank(3), 1u);
  EXPECT_TRUE(StateSet::of(5, {3}).subset_of(s));
  EXPECT_EQ((s & StateSet::of(5, {3, 4})), StateSet::of(5, {3}));
  EXPECT_TRUE(StateSet::full(5).is_full());
}

TEST(Update, RestrictsStatesAndRelations) {
  const auto m = figures::counterexample();
  Checker ck;
  const auto keep = ck.truth_set(m, parse_formula("q"));
  const auto u = update(m, keep);
  EXPECT_EQ(u.num_states(), 3u);
  EXPECT_FALSE(u.state_index("pnqr").has_value());
  EXPECT_EQ(u.blocks(u.require_agent("c")).size(), 1u);
  EXPECT_THROW(update(m, StateSet(4)), ModelError);
}

TEST(Contraction, MergesDuplicates) {
  const auto m = figures::train();
  const auto big = oracle::with_copy(oracle::with_copy(m, 0), 1);
  EXPECT_FALSE(is_contracted(big));
  const auto c = contract(big);
  EXPECT_EQ(c.quotient.num_states(), 2u);
  EXPECT_TRUE(is_contracted(c.quotient));
  EXPECT_EQ(c.image[0], c.image[2]);
  EXPECT_EQ(c.image[1], c.image[3]);
  EXPECT_EQ(c.state_map(big).at("w_copy"), "w");
}

TEST(Contraction, FiguresAreContracted) {
  EXPECT_TRUE(is_contracted(figures::train()));
  EXPECT_TRUE(is_contracted(figures::counterexample()));
}

TEST(Contraction, SameValuationSameBlocksCollapse) {
  // Two states agreeing on everything, each in its own blocks, but with
  // identical successors: still bisimilar.
  const auto m = parse_model(R"({"agents": ["a"], "atoms": ["p"], "states": ["x", "y"],
    "valuation": {"x": ["p"], "y": ["p"]}, "partitions": {"a": [["x"], ["y"]]}})");
  EXPECT_EQ(contract(m).quotient.num_states(), 1u);
}

TEST(CharacteristicFormulas, PickOutExactlyOneState) {
  Checker ck;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto m = contract(random_model(seed, 1 + seed % 6, 2, 2)).quotient;
    const auto chars = characteristic_formulas(m);
    ASSERT_EQ(chars.size(), m.num_states());
    for (std::size_t s = 0; s < m.num_states(); ++s) {
      EXPECT_EQ(stratum(chars[s]), Stratum::EL);
      EXPECT_EQ(ck.truth_set(m, chars[s]), StateSet::of(m.num_states(), {s}));
    }
  }
  EXPECT_THROW(characteristic_formulas(oracle::with_copy(figures::train(), 0)), ModelError);
}

TEST(ChoiceSets, AgentUnionsStartWithSilence) {
  const auto m = figures::counterexample();
  const auto us = agent_unions(m, "a");
  EXPECT_EQ(us.size(), 7u);
  EXPECT_TRUE(us.front().is_full());
  EXPECT_THROW(agent_unions(m, "a", 6), EnumerationCapExceeded);
}

TEST(ChoiceSets, ProductAndDistinct) {
  const auto m = figures::counterexample();
  EXPECT_EQ(choice_product_size(m, {"a", "b"}), 49u);
  EXPECT_EQ(choice_sets(m, {"a", "b"}).size(), 49u);
  const auto d = distinct_choices(m, {"a", "b"});
  EXPECT_LT(d.size(), 49u);
  std::set<std::string> seen;
  for (const auto& c : d) {
    std::string key;
    for (auto s : c.extension.members()) key += std::to_string(s) + ",";
    EXPECT_TRUE(seen.insert(key).second);
  }
  EXPECT_THROW(choice_sets(m, {"a", "b"}, 48), EnumerationCapExceeded);
  EXPECT_EQ(distinct_choices(m, {}).size(), 1u);
}

TEST(ChoiceSets, DefinableFormulaDenotesExtension) {
  Checker ck;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto m = contract(random_model(seed, 1 + seed % 5, 3, 2)).quotient;
    for (const auto& c : distinct_choices(m, {"a", "c"})) {
      const auto psi = definable_formula(m, c);
      EXPECT_EQ(psi.group(), (Group{"a", "c"}));
      EXPECT_EQ(ck.truth_set(m, psi.denotation()), c.extension);
    }
  }
}

TEST(Definability, OracleOnThreeStateModels) {
  std::size_t contracted = 0;
  oracle::for_each_model(3, 2, 2, [&](const EpistemicModel& m) {
    const auto small = oracle::view(m);
    ASSERT_EQ(is_contracted(m), oracle::all_states_definable(small));
    if (!is_contracted(m)) return;
    ++contracted;
    for (std::size_t a = 0; a < 2; ++a) {
      std::set<oracle::Mask> got;
      for (const auto& u : agent_unions(m, a)) got.insert(oracle::to_mask(u));
      EXPECT_EQ(got, oracle::definable_knowledge_sets(small, a));
    }
  });
  EXPECT_GT(contracted, 0u);
}

TEST(RandomModel, DeterministicAndValid) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto a = random_model(seed, 5, 3, 3);
    const auto b = random_model(seed, 5, 3, 3);
    EXPECT_EQ(render_model(a), render_model(b));
    EXPECT_EQ(a.states().front(), "s0");
  }
  EXPECT_THROW(random_model(1, 0, 1, 1), ModelError);
  EXPECT_THROW(random_model(1, 21, 1, 1), ModelError);
}
