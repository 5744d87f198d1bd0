#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "gen/feedback.hpp"

using namespace gen;

namespace {

std::vector<std::string> w(const std::string& s) { return tokenize(s); }

WeighingConfig wma(double th = 0.9, double l = 0.2, double b = 0.3) {
  WeighingConfig c;
  c.strategy = WeighingStrategy::WMA;
  c.th = th;
  c.penalty = l;
  c.bonus = b;
  return c;
}

WeighingConfig ewaf(SimilarityKind sim = SimilarityKind::Overlap, double l = 0.1) {
  WeighingConfig c;
  c.strategy = WeighingStrategy::EWAF;
  c.sim = sim;
  c.penalty = l;
  return c;
}

}  // namespace

TEST(Feedback, OverlapCoefficient) {
  EXPECT_DOUBLE_EQ(sim_overlap(w("a b c"), w("a b c d e")), 1.0);
  EXPECT_DOUBLE_EQ(sim_overlap(w("a b"), w("b c")), 0.5);
  EXPECT_DOUBLE_EQ(sim_overlap(w("The cat"), w("the CAT")), 1.0);
  EXPECT_DOUBLE_EQ(sim_overlap(w("the cat saw the dog"), w("the cat saw the dog")), 1.0);
  EXPECT_DOUBLE_EQ(sim_overlap({}, w("a")), 0.0);
}

TEST(Feedback, WordEditDistance) {
  EXPECT_EQ(word_edit_distance(w("a b c"), w("a b c")), 0u);
  EXPECT_EQ(word_edit_distance(w("a b c"), w("a c")), 1u);
  EXPECT_EQ(word_edit_distance(w("a b c"), w("x b y z")), 3u);
  EXPECT_EQ(word_edit_distance({}, w("a b")), 2u);
}

TEST(Feedback, NormalizedLevenshteinUsesLongerLength) {
  EXPECT_DOUBLE_EQ(sim_levenshtein(w("who did discover the comet ?"), w("who discovered the comet ?")), 1.0 - 2.0 / 6.0);
  EXPECT_DOUBLE_EQ(sim_levenshtein(w("Who ?"), w("who ?")), 1.0);
  // Multi-word surfaces are split before comparing.
  EXPECT_DOUBLE_EQ(sim_levenshtein({"Vasco Da Gama", "?"}, w("Vasco Da Gama ?")), 1.0);
}

TEST(Feedback, SuccessPredicateUsesThreshold) {
  EXPECT_TRUE(successful(w("a b c d e f g h i j"), w("a b c d e f g h i j"), wma(0.9)));
  EXPECT_TRUE(successful(w("a b c d e f g h i j"), w("a b c d e f g h i x"), wma(0.85)));
  // Strict: a similarity equal to the threshold is not a success.
  EXPECT_FALSE(successful(w("a b c d e f g h i j"), w("a b c d e f g h i x"), wma(0.9)));
  EXPECT_FALSE(successful(w("a b c d e f g h i j"), w("a b c d e f g h x x"), wma(0.85)));
}

TEST(Feedback, WmaUpdates) {
  PatternWeight pw;
  auto up = update_wma(pw, "q1", w("a b"), w("a b"), wma());
  EXPECT_NEAR(up.w, 1.0 / 0.7, 1e-12);
  ASSERT_EQ(up.history.size(), 1u);
  EXPECT_EQ(up.history[0].question_id, "q1");
  auto down = update_wma(pw, "q1", w("a b"), std::nullopt, wma());
  EXPECT_DOUBLE_EQ(down.w, 0.8);
  down = update_wma(pw, "q1", w("a b c d"), w("x y z w"), wma());
  EXPECT_DOUBLE_EQ(down.w, 0.8);
}

TEST(Feedback, EwafUpdates) {
  PatternWeight pw;
  EXPECT_NEAR(update_ewaf(pw, "q", w("a b"), w("a b"), ewaf()).w, std::exp(-0.1), 1e-12);
  EXPECT_NEAR(update_ewaf(pw, "q", w("a b"), w("a c"), ewaf()).w, std::exp(-0.2), 1e-12);
  EXPECT_NEAR(update_ewaf(pw, "q", w("a b"), std::nullopt, ewaf()).w, std::exp(-0.1 / 0.05), 1e-12);
  // Zero similarity hits the floor.
  EXPECT_NEAR(update_ewaf(pw, "q", w("a b"), w("c d"), ewaf()).w, std::exp(-0.1 / 0.05), 1e-12);
}

TEST(Feedback, EwafAlwaysDecreasesAndRewardsSimilarity) {
  PatternWeight pw;
  pw.w = 0.7;
  const auto kept = update_ewaf(pw, "q", w("a b c"), w("a b c"), ewaf(SimilarityKind::Levenshtein));
  const auto edited = update_ewaf(pw, "q", w("a b c"), w("a b x"), ewaf(SimilarityKind::Levenshtein));
  EXPECT_LT(kept.w, pw.w);
  EXPECT_LT(edited.w, kept.w);
}

TEST(Feedback, ConfigValidation) {
  EXPECT_TRUE(validate(wma()).empty());
  EXPECT_FALSE(validate(ewaf()).empty());
  EXPECT_THROW(validate(wma(0.0)), std::invalid_argument);
  EXPECT_THROW(validate(wma(0.9, 1.0)), std::invalid_argument);
  EXPECT_THROW(validate(wma(0.9, 0.2, 1.0)), std::invalid_argument);
  auto c = ewaf();
  c.th = 7.0;  // ignored by EWAF
  EXPECT_NO_THROW(validate(c));
}

TEST(Feedback, DecisionValidation) {
  ReviewDecision d{"q", ReviewAction::Discarded, std::nullopt, false};
  EXPECT_NO_THROW(validate(d));
  d.corrected_text = w("x");
  EXPECT_THROW(validate(d), std::invalid_argument);
  d.action = ReviewAction::Edited;
  EXPECT_NO_THROW(validate(d));
  d.corrected_text = std::vector<std::string>{};
  EXPECT_THROW(validate(d), std::invalid_argument);
  EXPECT_EQ(review_action_from_string("keep"), ReviewAction::Kept);
  EXPECT_EQ(review_action_from_string("edited"), ReviewAction::Edited);
  EXPECT_THROW(review_action_from_string("maybe"), std::invalid_argument);
}

TEST(Feedback, WeighingCorrection) {
  GeneratedQuestion q;
  q.id = "q";
  q.text = w("who did it ?");
  ReviewDecision d{"q", ReviewAction::Edited, w("who made it ?"), false};
  EXPECT_EQ(weighing_correction(d, q), w("who made it ?"));
  d.type_changed = true;
  EXPECT_FALSE(weighing_correction(d, q));
  d = {"q", ReviewAction::Discarded, std::nullopt, false};
  EXPECT_FALSE(weighing_correction(d, q));
}

namespace {

struct Batch {
  PatternPool pool;
  std::vector<GeneratedQuestion> questions;
};

Batch telephone_batch() {
  Batch b;
  const Equivalence eq(fixtures::resources(), EquivConfig::acquisition());
  b.pool.add_all(acquire_patterns({fixtures::telephone_seed()}, eq, 0).patterns);
  b.questions = generate(b.pool.patterns()[0], fixtures::vasco_sentence(), all_strategies(),
                         eq.with_mode(EquivMode::Generation));
  return b;
}

}  // namespace

TEST(Feedback, ApplyWeightsInDecisionOrder) {
  auto b = telephone_batch();
  ASSERT_EQ(b.questions.size(), 2u);
  std::vector<ReviewDecision> ds = {{b.questions[1].id, ReviewAction::Kept, b.questions[1].text, false},
                                    {b.questions[0].id, ReviewAction::Discarded, std::nullopt, false},
                                    {"unknown", ReviewAction::Discarded, std::nullopt, false}};
  apply_weights(b.pool, b.questions, ds, wma());
  const auto& pw = b.pool.patterns()[0].weight;
  EXPECT_NEAR(pw.w, (1.0 / 0.7) * 0.8, 1e-12);
  ASSERT_EQ(pw.history.size(), 2u);
  EXPECT_EQ(pw.history[0].question_id, b.questions[1].id);
}

TEST(Feedback, HarvestReannotatesCorrection) {
  auto b = telephone_batch();
  const auto corrected = w("Who found the sea route to India ?");
  std::vector<ReviewDecision> ds = {{b.questions[1].id, ReviewAction::Edited, corrected, false},
                                    {b.questions[0].id, ReviewAction::Discarded, std::nullopt, false}};
  const auto h = harvest_seeds(ds, b.questions, {fixtures::vasco_sentence()}, b.pool, Stopwords::defaults());
  ASSERT_EQ(h.seeds.size(), 1u);
  const auto& seed = h.seeds[0];
  EXPECT_EQ(seed.id, "h-" + b.questions[1].id);
  ASSERT_EQ(seed.question.size(), 8u);
  EXPECT_EQ(seed.question[0].surface, "Who");
  EXPECT_EQ(seed.question[2].lemma, "the");
  EXPECT_EQ(seed.question[3].surface, "sea");
  EXPECT_EQ(seed.question[3].pos, "NN");
  EXPECT_EQ(seed.question[6].ne_type, "Location");
  EXPECT_EQ(seed.question[1].pos, "UNK");  // "found" is in neither the sentence nor the pattern question
  ASSERT_TRUE(seed.answer_span);
  EXPECT_EQ(seed.answer_span->start, 0u);
  EXPECT_EQ(seed.answer[0].surface, "Vasco Da Gama");
}

TEST(Feedback, HarvestWarnsOnInvalidSeed) {
  auto b = telephone_batch();
  std::vector<ReviewDecision> ds = {{b.questions[0].id, ReviewAction::Edited, w("Tell me about the route"), false}};
  const auto h = harvest_seeds(ds, b.questions, {fixtures::vasco_sentence()}, b.pool, Stopwords::defaults());
  EXPECT_TRUE(h.seeds.empty());
  ASSERT_EQ(h.warnings.size(), 1u);
}

TEST(Feedback, PruneOnlyAllDiscardedPatterns) {
  auto b = telephone_batch();
  const auto id = b.pool.patterns()[0].id;
  std::vector<ReviewDecision> ds = {{b.questions[0].id, ReviewAction::Discarded, std::nullopt, false},
                                    {b.questions[1].id, ReviewAction::Edited, w("x y ?"), false}};
  auto pool = b.pool;
  EXPECT_TRUE(prune_patterns(pool, b.questions, ds).empty());
  ds[1] = {b.questions[1].id, ReviewAction::Discarded, std::nullopt, false};
  EXPECT_EQ(prune_patterns(pool, b.questions, ds), std::vector<std::string>{id});
  EXPECT_TRUE(pool.empty());
  // A pattern without questions in the batch is never pruned.
  EXPECT_TRUE(prune_patterns(b.pool, {}, ds).empty());
}
