#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "fixtures.hpp"
#include "gen/session.hpp"

using namespace gen;

namespace {

std::vector<std::string> ids(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back("s" + std::to_string(i));
  return out;
}

GeneratedQuestion question(const std::string& id, const std::string& pattern) {
  GeneratedQuestion q;
  q.id = id;
  q.pattern_id = pattern;
  q.text = tokenize("who is " + id + " ?");
  return q;
}

Pattern pattern_with_weight(const std::string& id, double w) {
  Pattern p;
  p.id = id;
  p.content_hash = id;
  p.weight.w = w;
  return p;
}

SessionConfig small_config(std::size_t batch = 5) {
  SessionConfig cfg;
  cfg.batch_size = batch;
  return cfg;
}

const std::string* pattern_of_seed(const PatternPool& pool, const std::string& seed) {
  for (const auto& p : pool.patterns())
    if (p.seed_id == seed) return &p.id;
  return nullptr;
}

}  // namespace

TEST(Session, PlanBatchesKeepsRemainder) {
  const auto plan = plan_batches(ids(7), 3);
  ASSERT_EQ(plan.batches.size(), 3u);
  EXPECT_EQ(plan.batches[0], (std::vector<std::string>{"s0", "s1", "s2"}));
  EXPECT_EQ(plan.batches[2], (std::vector<std::string>{"s6"}));
  EXPECT_FALSE(plan.shuffle_seed);
}

TEST(Session, PlanBatchesShuffleIsSeededPermutation) {
  const auto a = plan_batches(ids(20), 4, 7);
  const auto b = plan_batches(ids(20), 4, 7);
  EXPECT_EQ(a, b);
  std::vector<std::string> flat;
  for (const auto& batch : a.batches) flat.insert(flat.end(), batch.begin(), batch.end());
  auto sorted = flat;
  std::sort(sorted.begin(), sorted.end());
  auto expected = ids(20);
  std::sort(expected.begin(), expected.end());
  EXPECT_EQ(sorted, expected);
  EXPECT_NE(flat, ids(20));
}

TEST(Session, PlanBatchesRejectsBadInput) {
  EXPECT_THROW(plan_batches({}, 3), std::invalid_argument);
  EXPECT_THROW(plan_batches(ids(3), 0), std::invalid_argument);
}

TEST(Session, SeededShuffleIsDeterministic) {
  std::vector<int> a(50), b(50), c(50);
  std::iota(a.begin(), a.end(), 0);
  b = a;
  c = a;
  seeded_shuffle(a, 42);
  seeded_shuffle(b, 42);
  seeded_shuffle(c, 43);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
}

TEST(Session, RankByWeightIsStable) {
  PatternPool pool;
  pool.add(pattern_with_weight("p1", 0.5));
  pool.add(pattern_with_weight("p2", 2.0));
  pool.add(pattern_with_weight("p3", 0.5));
  const std::vector<GeneratedQuestion> qs = {question("a", "p1"), question("b", "p3"), question("c", "p2"),
                                             question("d", "p1")};
  const auto ranked = rank_questions(qs, pool);
  std::vector<std::string> order;
  for (const auto& q : ranked) order.push_back(q.id);
  EXPECT_EQ(order, (std::vector<std::string>{"c", "a", "b", "d"}));
  EXPECT_DOUBLE_EQ(ranked.front().rank_score, 2.0);
  EXPECT_EQ(rank_questions(qs, pool, RankingMode::Random, 3), rank_questions(qs, pool, RankingMode::Random, 3));
}

TEST(Session, ValidateConfig) {
  auto cfg = small_config();
  EXPECT_NO_THROW(validate(cfg));
  cfg.strategies.clear();
  EXPECT_THROW(validate(cfg), std::invalid_argument);
  cfg = small_config(0);
  EXPECT_THROW(validate(cfg), std::invalid_argument);
}

TEST(Session, StartWithoutSeedsWarns) {
  const auto syn = fixtures::synthetic(6);
  const auto state = start_session(syn.corpus, {}, small_config(3));
  EXPECT_EQ(state.plan.batches.size(), 2u);
  EXPECT_EQ(state.status, SessionStatus::Created);
  EXPECT_FALSE(state.warnings.empty());
}

TEST(Session, OpenBatchGeneratesRankedQuestions) {
  const auto syn = fixtures::synthetic(6);
  auto state = start_session(syn.corpus, syn.seeds, small_config(3));
  const SessionContext ctx{&syn.corpus, &fixtures::resources()};
  open_batch(state, ctx);
  ASSERT_NE(state.pending(), nullptr);
  EXPECT_EQ(state.status, SessionStatus::Reviewing);
  const auto& rec = *state.pending();
  EXPECT_EQ(rec.sentence_ids, (std::vector<std::string>{"syn1", "syn2", "syn3"}));
  EXPECT_EQ(rec.pool_size, 2u);
  EXPECT_EQ(rec.new_patterns.size(), 2u);
  EXPECT_FALSE(rec.questions.empty());
  EXPECT_EQ(rec.undecided().size(), rec.questions.size());
  EXPECT_TRUE(state.seeds.empty());
  // Opening again is a no-op.
  const auto before = state;
  open_batch(state, ctx);
  EXPECT_EQ(state, before);
}

TEST(Session, DecisionErrorsAndIdempotence) {
  const auto syn = fixtures::synthetic(6);
  auto state = start_session(syn.corpus, syn.seeds, small_config(3));
  const SessionContext ctx{&syn.corpus, &fixtures::resources()};

  ReviewDecision d{"nope", ReviewAction::Discarded, std::nullopt, false};
  try {
    submit_decision(state, d);
    FAIL() << "expected a conflict before any batch is open";
  } catch (const SessionError& e) {
    EXPECT_EQ(e.kind(), SessionError::Kind::Conflict);
  }

  open_batch(state, ctx);
  try {
    submit_decision(state, d);
    FAIL();
  } catch (const SessionError& e) {
    EXPECT_EQ(e.kind(), SessionError::Kind::NotFound);
    EXPECT_EQ(e.ids(), std::vector<std::string>{"nope"});
  }

  const auto& q = state.pending()->questions.front();
  ReviewDecision bad{q.id, ReviewAction::Discarded, q.text, false};
  try {
    submit_decision(state, bad);
    FAIL();
  } catch (const SessionError& e) {
    EXPECT_EQ(e.kind(), SessionError::Kind::Invalid);
  }

  ReviewDecision keep{q.id, ReviewAction::Kept, q.text, false};
  submit_decision(state, keep);
  submit_decision(state, keep);
  EXPECT_EQ(state.pending()->decisions.size(), 1u);
  ReviewDecision other{q.id, ReviewAction::Discarded, std::nullopt, false};
  try {
    submit_decision(state, other);
    FAIL();
  } catch (const SessionError& e) {
    EXPECT_EQ(e.kind(), SessionError::Kind::Conflict);
  }
}

TEST(Session, CloseRequiresEveryDecision) {
  const auto syn = fixtures::synthetic(6);
  auto state = start_session(syn.corpus, syn.seeds, small_config(3));
  const SessionContext ctx{&syn.corpus, &fixtures::resources()};
  open_batch(state, ctx);
  const auto open = state.pending()->undecided();
  try {
    advance(state, ctx);
    FAIL();
  } catch (const SessionError& e) {
    EXPECT_EQ(e.kind(), SessionError::Kind::Conflict);
    EXPECT_EQ(e.ids(), open);
  }
  EXPECT_EQ(state.iteration(), 0u);
}

TEST(Session, TypeChangeIsDetectedFromWhWord) {
  EXPECT_TRUE(type_changed(tokenize("Who found it ?"), tokenize("What found it ?")));
  EXPECT_FALSE(type_changed(tokenize("Who found it ?"), tokenize("who discovered it ?")));
  EXPECT_FALSE(type_changed({}, tokenize("who ?")));
}

TEST(Session, EditedDecisionRecordsTypeChange) {
  const auto syn = fixtures::synthetic(3);
  auto state = start_session(syn.corpus, syn.seeds, small_config(3));
  const SessionContext ctx{&syn.corpus, &fixtures::resources()};
  open_batch(state, ctx);
  const auto q = state.pending()->questions.front();
  auto corrected = q.text;
  corrected.front() = "What";
  submit_decision(state, ReviewDecision{q.id, ReviewAction::Edited, corrected, false});
  EXPECT_TRUE(state.pending()->decision(q.id)->type_changed);
}

TEST(Session, ScriptedRunPrunesDiscardedPattern) {
  const auto syn = fixtures::synthetic(9);
  auto cfg = small_config(3);
  auto state = start_session(syn.corpus, syn.seeds, cfg);
  const SessionContext ctx{&syn.corpus, &fixtures::resources()};
  auto oracle = FeedbackOracle::scripted(ReviewAction::Kept);
  oracle.on_pattern_seed("bad", ReviewAction::Discarded);

  open_batch(state, ctx);
  const auto* bad = pattern_of_seed(state.pool, "bad");
  ASSERT_NE(bad, nullptr);
  const std::string bad_id = *bad;
  std::size_t bad_questions = 0;
  for (const auto& q : state.pending()->questions) bad_questions += q.pattern_id == bad_id;
  ASSERT_GT(bad_questions, 0u);

  const auto s1 = run_iteration(state, ctx, oracle);
  EXPECT_EQ(s1.batch, 1u);
  EXPECT_EQ(s1.discarded, bad_questions);
  EXPECT_EQ(state.batches[0].pruned, std::vector<std::string>{bad_id});
  EXPECT_EQ(state.pool.find(bad_id), nullptr);

  run_iteration(state, ctx, oracle);
  for (const auto& q : state.batches[1].questions) EXPECT_NE(q.pattern_id, bad_id);
  run_iteration(state, ctx, oracle);
  EXPECT_EQ(state.status, SessionStatus::Complete);
  EXPECT_EQ(state.iteration(), 3u);
  EXPECT_THROW(run_iteration(state, ctx, oracle), SessionError);
}

TEST(Session, StatsCountQuestionsAndEdits) {
  const auto syn = fixtures::synthetic(3);
  auto state = start_session(syn.corpus, syn.seeds, small_config(3));
  const SessionContext ctx{&syn.corpus, &fixtures::resources()};
  open_batch(state, ctx);
  const auto questions = state.pending()->questions;
  ASSERT_GE(questions.size(), 2u);
  // Discard the first, keep the others except one edit of the second.
  double edit = 0.0;
  for (std::size_t i = 0; i < questions.size(); ++i) {
    const auto& q = questions[i];
    if (i == 0) {
      submit_decision(state, ReviewDecision{q.id, ReviewAction::Discarded, std::nullopt, false});
    } else if (i == 1) {
      auto c = q.text;
      c.insert(c.end() - 1, "again");
      edit += 1.0 - sim_levenshtein(q.text, c);
      submit_decision(state, ReviewDecision{q.id, ReviewAction::Edited, c, false});
    } else {
      submit_decision(state, ReviewDecision{q.id, ReviewAction::Kept, q.text, false});
    }
  }
  const auto s = close_batch(state, ctx);
  std::set<std::string> texts;
  for (const auto& q : questions) texts.insert(q.question_string());
  EXPECT_EQ(s.questions, questions.size());
  EXPECT_EQ(s.unique, texts.size());
  EXPECT_EQ(s.discarded, 1u);
  EXPECT_DOUBLE_EQ(s.discarded_pct, 100.0 / static_cast<double>(questions.size()));
  EXPECT_NEAR(s.edit_avg, edit / static_cast<double>(questions.size() - 1), 1e-12);
  EXPECT_EQ(s.patterns, 2u);
  EXPECT_EQ(s.new_patterns, 2u);
}

TEST(Session, ReferenceOracleGradesByLevenshtein) {
  Reference ref = {{"s1", {tokenize("Who found the comet ?")}}};
  const auto oracle = FeedbackOracle::reference_based(ref, 0.6);
  PatternPool pool;
  GeneratedQuestion q;
  q.id = "q";
  q.source_sentence_id = "s1";
  q.text = tokenize("Who found the comet ?");
  auto d = oracle.review(q, pool);
  EXPECT_EQ(d.action, ReviewAction::Kept);
  EXPECT_EQ(*d.corrected_text, q.text);

  q.text = tokenize("Who did find the comet ?");
  d = oracle.review(q, pool);
  EXPECT_EQ(d.action, ReviewAction::Edited);
  EXPECT_EQ(*d.corrected_text, tokenize("Who found the comet ?"));

  q.text = tokenize("What is a comet made of ?");
  EXPECT_EQ(oracle.review(q, pool).action, ReviewAction::Discarded);
  q.source_sentence_id = "unknown";
  q.text = tokenize("Who found the comet ?");
  EXPECT_EQ(oracle.review(q, pool).action, ReviewAction::Discarded);
}

TEST(Session, ScriptedOracleMostSpecificRuleWins) {
  PatternPool pool;
  Pattern p = pattern_with_weight("p", 1.0);
  p.seed_id = "seed";
  pool.add(p);
  auto oracle = FeedbackOracle::scripted(ReviewAction::Kept);
  oracle.on_pattern_seed("seed", ReviewAction::Discarded);
  GeneratedQuestion q = question("q1", "p");
  EXPECT_EQ(oracle.review(q, pool).action, ReviewAction::Discarded);
  oracle.on_pattern("p", ReviewAction::Kept);
  EXPECT_EQ(oracle.review(q, pool).action, ReviewAction::Kept);
  oracle.on_question("q1", ReviewDecision{"", ReviewAction::Edited, tokenize("who else ?"), false});
  const auto d = oracle.review(q, pool);
  EXPECT_EQ(d.action, ReviewAction::Edited);
  EXPECT_EQ(d.question_id, "q1");
}

TEST(Session, StatsTableHeader) {
  BatchStats s;
  s.batch = 2;
  s.patterns = 11;
  s.new_patterns = 3;
  s.questions = 40;
  s.unique = 38;
  s.discarded = 10;
  s.discarded_pct = 25.0;
  s.edit_avg = 0.125;
  const auto table = format_stats_table({s});
  EXPECT_EQ(table,
            "batch  patterns  new  questions  unique  discarded      %  edit avg\n"
            "    2        11    3         40      38         10   25.0     0.125\n");
}

TEST(Session, ReportWithSingleBatchWarnsAboutWindow) {
  const auto syn = fixtures::synthetic(3);
  const auto out = run_session(syn.corpus, syn.seeds, small_config(3), fixtures::resources(),
                               FeedbackOracle::reference_based(syn.reference), &syn.reference);
  EXPECT_EQ(out.report.stats.size(), 1u);
  EXPECT_EQ(out.report.batches.size(), 1u);
  EXPECT_TRUE(out.report.window_ranked.empty);
  EXPECT_TRUE(std::any_of(out.report.warnings.begin(), out.report.warnings.end(),
                          [](const std::string& w) { return w.find("window") != std::string::npos; }));
}

TEST(Session, RunSessionIsDeterministic) {
  const auto syn = fixtures::synthetic(12);
  auto cfg = small_config(4);
  cfg.shuffle_seed = 5;
  const auto oracle = FeedbackOracle::reference_based(syn.reference);
  const auto a = run_session(syn.corpus, syn.seeds, cfg, fixtures::resources(), oracle, &syn.reference);
  const auto b = run_session(syn.corpus, syn.seeds, cfg, fixtures::resources(), oracle, &syn.reference);
  EXPECT_EQ(a.state, b.state);
  EXPECT_EQ(a.report.stats, b.report.stats);
  EXPECT_EQ(a.report.batches, b.report.batches);
  EXPECT_EQ(a.report.stats.size(), 3u);
  EXPECT_FALSE(a.report.window_ranked.empty);
}

TEST(Session, RunSessionWithoutSeedsReturnsEmptyReport) {
  const auto syn = fixtures::synthetic(3);
  const auto out = run_session(syn.corpus, {}, small_config(3), fixtures::resources(),
                               FeedbackOracle::scripted(), &syn.reference);
  EXPECT_TRUE(out.report.stats.empty());
  EXPECT_FALSE(out.report.warnings.empty());
}

TEST(Session, BaselineCountsQuestionsOncePerBatch) {
  const auto syn = fixtures::synthetic(12);
  const auto out = run_session(syn.corpus, syn.seeds, small_config(4), fixtures::resources(),
                               FeedbackOracle::reference_based(syn.reference), &syn.reference);
  ASSERT_FALSE(out.report.batches.empty());
  for (const auto& ev : out.report.batches) {
    ASSERT_EQ(ev.ranked.cuts.size(), ev.random_baseline.cuts.size());
    for (std::size_t i = 0; i < ev.ranked.cuts.size(); ++i)
      EXPECT_EQ(ev.random_baseline.cuts[i].used, ev.ranked.cuts[i].used);
  }
  for (std::size_t i = 0; i < out.report.window_ranked.cuts.size(); ++i)
    EXPECT_EQ(out.report.window_baseline.cuts[i].used, out.report.window_ranked.cuts[i].used);
}
