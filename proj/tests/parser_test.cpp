#include <gtest/gtest.h>

#include "corgal/figures.hpp"
#include "corgal/parser.hpp"
#include "corgal/validity.hpp"

using namespace corgal;

TEST(Parser, OperatorShapes) {
  const auto f = parse_formula("<[{a,b}]> (~K c ~p & ~K c p)");
  EXPECT_EQ(f.op(), Op::CoalDual);
  EXPECT_EQ(f.group(), (Group{"a", "b"}));
  EXPECT_EQ(f.body().op(), Op::And);

  const auto g = parse_formula("[{c}, top] q");
  EXPECT_EQ(g.op(), Op::RelGroup);
  EXPECT_EQ(g.condition(), Formula::top());

  EXPECT_EQ(parse_formula("[{a}] p"), parse_formula("[{a}, top] p"));
  EXPECT_EQ(parse_formula("[<{}>] p").op(), Op::Coal);
  EXPECT_EQ(parse_formula("[! p] q").op(), Op::Ann);
  EXPECT_EQ(parse_formula("<! p> q").op(), Op::AnnDual);
  EXPECT_EQ(parse_formula("<{a}, q> p").op(), Op::RelGroupDual);
}

TEST(Parser, Associativity) {
  EXPECT_EQ(parse_formula("p -> q -> r"), parse_formula("p -> (q -> r)"));
  EXPECT_EQ(parse_formula("p & q & r"), parse_formula("(p & q) & r"));
  EXPECT_EQ(parse_formula("p | q & r"), parse_formula("p | (q & r)"));
  EXPECT_EQ(parse_formula("~p & q"), parse_formula("(~p) & q"));
}

TEST(Parser, ErrorsCarryPosition) {
  try {
    parse_formula("p &");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1u);
    EXPECT_EQ(e.column(), 4u);
  }
  try {
    parse_formula("p\n  & $");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.column(), 5u);
  }
  EXPECT_THROW(parse_formula("[{a} p"), ParseError);
  EXPECT_THROW(parse_formula("K p"), ParseError);
  EXPECT_THROW(parse_formula("(p"), ParseError);
  EXPECT_THROW(parse_formula(""), ParseError);
}

TEST(Parser, RenderRoundTrip) {
  const std::vector<std::string> atoms{"p", "q"}, agents{"a", "b", "c"};
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const auto f = gen_formula(seed, Stratum::CoRGAL, 4, atoms, agents);
    EXPECT_EQ(parse_formula(render_formula(f)), f) << render_formula(f);
  }
}

TEST(Parser, RenderIsCanonical) {
  EXPECT_EQ(render_formula(parse_formula("[!p]K a p")), "[! p] K a p");
  EXPECT_EQ(render_formula(parse_formula("p -> (q -> p)")), "p -> (q -> p)");
  EXPECT_EQ(render_formula(parse_formula("[{ b , a }] p")), "[{a,b}, top] p");
}

TEST(ModelDocument, Figures) {
  const auto m = figures::train();
  EXPECT_EQ(m.num_states(), 2u);
  EXPECT_EQ(m.designated(), std::optional<std::string>("w"));
  EXPECT_EQ(m.blocks(m.require_agent("c")).size(), 1u);
  const auto n = figures::counterexample();
  EXPECT_EQ(n.num_states(), 4u);
  EXPECT_EQ(n.blocks(n.require_agent("a")).size(), 3u);
}

TEST(ModelDocument, RoundTrip) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto m = random_model(seed, 1 + seed % 6, 3, 2);
    const auto text = render_model(m);
    const auto back = parse_model(text);
    EXPECT_TRUE(same_model(m, back));
    EXPECT_EQ(render_model(back), text);
  }
}

TEST(ModelDocument, Rejections) {
  auto doc = [](const std::string& partitions, const std::string& valuation = R"({"w": [], "v": ["p"]})") {
    return R"({"agents": ["a"], "atoms": ["p"], "states": ["w", "v"], "valuation": )" + valuation +
           R"(, "partitions": )" + partitions + "}";
  };
  EXPECT_NO_THROW(parse_model(doc(R"({"a": [["w", "v"]]})")));
  EXPECT_THROW(parse_model(doc(R"({"a": [["w"]]})")), ModelError);
  EXPECT_THROW(parse_model(doc(R"({"a": [["w", "v"], ["v"]]})")), ModelError);
  EXPECT_THROW(parse_model(doc(R"({"a": [["w", "x"]]})")), ModelError);
  EXPECT_THROW(parse_model(doc(R"({"a": [["w", "v"]]})", R"({"w": ["z"], "v": []})")), ModelError);
  EXPECT_THROW(parse_model(doc(R"({"a": [["w", "v"]], "b": [["w", "v"]]})")), ModelError);
  EXPECT_THROW(parse_model(doc(R"({})")), ModelError);
  EXPECT_THROW(parse_model("{not json"), ParseError);
}
