#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "gen/tree_match.hpp"

using namespace gen;

namespace {

const Equivalence& equiv() {
  static const Equivalence eq(fixtures::resources(), EquivConfig::generation());
  return eq;
}

}  // namespace

TEST(TreeMatch, StrictRequiresSameShapeAndEquivalentLeaves) {
  const auto a = fixtures::sentence("a", "(NP (DT the) (NN telephone))");
  const auto b = fixtures::sentence("b", "(NP (DT the) (NN telephone))");
  const auto c = fixtures::sentence("c", "(NP (DT the) (NN comet))");
  const auto d = fixtures::sentence("d", "(NP (DT the) (JJ old) (NN telephone))");
  auto m = match_trees_strict({&a.constituency, &a.tokens}, {&b.constituency, &b.tokens}, equiv());
  ASSERT_TRUE(m);
  EXPECT_EQ(*m, (LeafAlignment{{0, 0}, {1, 1}}));
  EXPECT_FALSE(match_trees_strict({&a.constituency, &a.tokens}, {&c.constituency, &c.tokens}, equiv()));
  EXPECT_FALSE(match_trees_strict({&a.constituency, &a.tokens}, {&d.constituency, &d.tokens}, equiv()));
}

TEST(TreeMatch, SubtreeSearchesDescendants) {
  const auto p = fixtures::sentence("p", "(NP (DT the) (NN telephone))");
  const auto s = fixtures::sentence("s", "(S (NP (NNP Bell)) (VP (VBD made) (NP (DT the) (NN telephone))))");
  const auto m = match_subtree({&p.constituency, &p.tokens}, {&s.constituency, &s.tokens}, equiv());
  ASSERT_TRUE(m);
  EXPECT_EQ(*m, (LeafAlignment{{0, 2}, {1, 3}}));
}

TEST(TreeMatch, TemplateExpression) {
  const auto s = fixtures::sentence("s", "(NP (DT the) (NN telephone))");
  const auto t = compile_template(s.constituency);
  EXPECT_EQ(t.prefix, "N");
  ASSERT_EQ(t.children.size(), 2u);
  EXPECT_EQ(t.expression(), "/N* << ( /D* $ /N* )");
}

TEST(TreeMatch, FlexToleratesExtraStructure) {
  const auto p = fixtures::sentence("p", "(NP (DT the) (NN telephone))");
  const auto s = fixtures::sentence("s", "(NP (NP (DT the) (NN sea) (NN route)) (PP (TO to) (NP (NNP India))))");
  const auto t = compile_template(p.constituency);
  const auto m = match_flex(t, s.constituency);
  ASSERT_TRUE(m);
  // Innermost match: the inner NP "the sea route".
  EXPECT_EQ(m->matched->label, "NP");
  EXPECT_EQ(m->chunk, (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_TRUE(template_matches(t, s.constituency));
}

TEST(TreeMatch, FlexNeedsSisterBindings) {
  const auto p = fixtures::sentence("p", "(NP (DT the) (NN telephone))");
  const auto s = fixtures::sentence("s", "(NP (NN telephone) (NN line))");
  EXPECT_FALSE(match_flex(compile_template(p.constituency), s.constituency));
}

TEST(TreeMatch, FlexLeafTemplateChecksLabelOnly) {
  const auto p = fixtures::sentence("p", "(NNP Bell)");
  const auto s = fixtures::sentence("s", "(NP (NNS Gamas))");
  const auto t = compile_template(p.constituency);
  EXPECT_EQ(t.expression(), "/N*");
  EXPECT_TRUE(template_matches(t, s.constituency));
}
