#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "gen/similarity.hpp"

using namespace gen;

namespace {

Token tok(const std::string& surface, const std::string& pos, const std::string& lemma = "") {
  Token t;
  t.surface = surface;
  t.pos = pos;
  t.lemma = lemma.empty() ? to_lower(surface) : lemma;
  return t;
}

Token ne(const std::string& surface, const std::string& type) {
  Token t = tok(surface, "NNP");
  t.ne_type = type;
  return t;
}

Token noun(const std::string& lemma, const std::string& synset) {
  Token t = tok(lemma, "NN");
  t.synset_ids = {synset};
  return t;
}

}  // namespace

TEST(Similarity, LexicalExactAndLemma) {
  EXPECT_EQ(equiv_lexical(tok("Telephone", "NN"), tok("telephone", "NN")), 1.0);
  EXPECT_EQ(equiv_lexical(tok("invented", "VBD", "invent"), tok("invent", "VB", "invent")), 0.75);
  EXPECT_EQ(equiv_lexical(tok("dog", "NN"), tok("cat", "NN")), 0.0);
}

TEST(Similarity, VerbSenseSharedClass) {
  const auto& inv = fixtures::resources().senses;
  EXPECT_EQ(equiv_verbsense(inv, tok("make", "VB"), tok("build", "VB")), 0.75);
  EXPECT_EQ(equiv_verbsense(inv, tok("created", "VBD", "create"), tok("inventing", "VBG", "invent")), 0.75);
  EXPECT_EQ(equiv_verbsense(inv, tok("make", "VB"), tok("kill", "VB")), 0.0);
  EXPECT_EQ(equiv_verbsense(inv, tok("make", "NN"), tok("build", "VB")), 0.0);
  Token tagged = tok("frobnicate", "VB");
  tagged.verb_sense_ids = {"Building"};
  EXPECT_EQ(equiv_verbsense(inv, tagged, tok("build", "VB")), 0.75);
}

TEST(Similarity, NamedEntityIncludes) {
  const auto r = NeInclusionRules::defaults();
  EXPECT_EQ(equiv_ne(r, ne("Alexander Graham Bell", "Person"), ne("Alexander Graham Bell", "Person"),
                     EquivMode::Acquisition),
            1.0);
  EXPECT_EQ(equiv_ne(r, ne("Alexander Graham Bell", "Person"), ne("Graham Bell", "Person"), EquivMode::Acquisition),
            0.9);
  EXPECT_EQ(equiv_ne(r, ne("Bell", "Person"), ne("Bell", "Organization"), EquivMode::Acquisition), 0.0);
  EXPECT_EQ(equiv_ne(r, ne("Bell", "Person"), ne("Gama", "Person"), EquivMode::Acquisition), 0.0);
  EXPECT_EQ(equiv_ne(r, ne("Bell", "Person"), ne("Gama", "Person"), EquivMode::Generation), 1.0);
}

TEST(Similarity, WordNetHopPenalty) {
  const auto& g = fixtures::resources().synsets;
  EXPECT_DOUBLE_EQ(equiv_wordnet(g, noun("feline", "feline.n.01"), noun("cat", "cat.n.01")), 0.9);
  EXPECT_DOUBLE_EQ(equiv_wordnet(g, noun("dog", "dog.n.01"), noun("cat", "cat.n.01")), 0.8);
  EXPECT_DOUBLE_EQ(equiv_wordnet(g, noun("cat", "cat.n.01"), noun("kitty", "cat.n.01")), 1.0);
  EXPECT_EQ(equiv_wordnet(g, noun("cat", "cat.n.01"), noun("x", "unknown.n.01")), 0.0);
  EXPECT_EQ(equiv_wordnet(g, tok("cat", "NN"), noun("cat", "cat.n.01")), 0.0);
}

TEST(Similarity, EmbeddingCosine) {
  const auto& table = fixtures::resources().embeddings;
  const auto& a = *table.find("dog");
  const auto& b = *table.find("cat");
  double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i], na += a[i] * a[i], nb += b[i] * b[i];
  EXPECT_NEAR(equiv_w2v(table, tok("dog", "NN"), tok("cat", "NN")), dot / std::sqrt(na * nb), 1e-12);
  EXPECT_EQ(equiv_w2v(table, tok("dog", "NN"), tok("zebra", "NN")), 0.0);
}

TEST(Similarity, EmbeddingKeyOverridesSurface) {
  const auto& table = fixtures::resources().embeddings;
  Token t = tok("kitty", "NN");
  t.embedding_key = "cat";
  EXPECT_NEAR(equiv_w2v(table, t, tok("cat", "NN")), 1.0, 1e-12);
}

TEST(Similarity, CompositeTakesMaximum) {
  const Equivalence eq(fixtures::resources(), EquivConfig::acquisition());
  EXPECT_DOUBLE_EQ(eq(noun("dog", "dog.n.01"), noun("cat", "cat.n.01")), 0.8);
  EXPECT_DOUBLE_EQ(eq(tok("made", "VBD", "make"), tok("make", "VB", "make")), 0.75);
  EXPECT_DOUBLE_EQ(eq(tok("the", "DT"), tok("the", "DT")), 1.0);
}

TEST(Similarity, DisabledFunctionsDoNotContribute) {
  EquivConfig cfg;
  cfg.enabled = {EquivFunction::Lexical};
  const Equivalence eq(fixtures::resources(), cfg);
  EXPECT_EQ(eq(noun("dog", "dog.n.01"), noun("cat", "cat.n.01")), 0.0);
  EXPECT_EQ(eq(tok("make", "VB"), tok("build", "VB")), 0.0);
}

TEST(Similarity, EmbeddingFloorZeroesWeakMatches) {
  EquivConfig cfg;
  cfg.enabled = {EquivFunction::Embedding};
  cfg.w2v_floor = 0.99;
  const Equivalence strict(fixtures::resources(), cfg);
  EXPECT_EQ(strict(tok("dog", "NN"), tok("cat", "NN")), 0.0);
  cfg.w2v_floor = 0.0;
  const Equivalence loose(fixtures::resources(), cfg);
  EXPECT_GT(loose(tok("dog", "NN"), tok("cat", "NN")), 0.5);
}

TEST(Similarity, ConfigValidation) {
  EquivConfig cfg;
  cfg.enabled.clear();
  EXPECT_THROW(validate(cfg), std::invalid_argument);
  cfg = {};
  cfg.w2v_floor = 1.5;
  EXPECT_THROW(validate(cfg), std::invalid_argument);
}
