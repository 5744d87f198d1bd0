#pragma once

// The online-learning loop: batches of sentences are turned into ranked
// questions, reviewed, and the review feeds new seeds, pattern weights and
// pruning back into the pattern pool.

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "gen/feedback.hpp"
#include "gen/generation.hpp"
#include "gen/metrics.hpp"
#include "gen/pattern.hpp"

namespace gen {

// Acceptable questions per sentence id.
using Reference = std::map<std::string, std::vector<Words>>;

struct BatchPlan {
  std::size_t batch_size = 1;
  std::optional<std::uint64_t> shuffle_seed;
  std::vector<std::vector<std::string>> batches;

  friend bool operator==(const BatchPlan&, const BatchPlan&) = default;
};

// Throws std::invalid_argument on an empty corpus or a zero batch size.
BatchPlan plan_batches(const std::vector<std::string>& sentence_ids, std::size_t batch_size,
                       std::optional<std::uint64_t> shuffle_seed = std::nullopt);

// Deterministic Fisher-Yates permutation driven by a 64-bit Mersenne Twister.
template <typename T>
void seeded_shuffle(std::vector<T>& v, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[static_cast<std::size_t>(rng() % i)]);
}

enum class RankingMode { Weighted, Random };

// Weighted: stable sort by descending pattern weight, so equal weights keep
// generation order. Random: seeded permutation. rank_score is refreshed from
// the pool.
std::vector<GeneratedQuestion> rank_questions(std::vector<GeneratedQuestion> questions, const PatternPool& pool,
                                              RankingMode mode = RankingMode::Weighted, std::uint64_t seed = 0);

struct SessionConfig {
  std::size_t batch_size = 10;
  std::optional<std::uint64_t> shuffle_seed;
  std::vector<MatchStrategy> strategies = all_strategies();
  WeighingConfig weighing;
  bool harvest = true;   // learn new seeds from reviewed questions
  bool weigh = true;     // update pattern weights
  bool prune = true;     // drop patterns whose batch output was all discarded
  RankingMode ranking = RankingMode::Weighted;
  std::uint64_t ranking_seed = 0;
  EquivConfig equiv;

  friend bool operator==(const SessionConfig&, const SessionConfig&) = default;
};

std::vector<std::string> validate(const SessionConfig& cfg);

struct BatchStats {
  std::size_t batch = 0;  // 1-based
  std::size_t patterns = 0;
  std::size_t new_patterns = 0;
  std::size_t questions = 0;
  std::size_t unique = 0;
  std::size_t discarded = 0;
  double discarded_pct = 0.0;
  double edit_avg = 0.0;  // mean 1 - sim_levenshtein over non-discarded questions

  friend bool operator==(const BatchStats&, const BatchStats&) = default;
};

struct BatchRecord {
  std::size_t index = 0;  // 0-based position in the plan
  std::vector<std::string> sentence_ids;
  std::vector<std::string> new_patterns;
  std::size_t pool_size = 0;
  std::vector<GeneratedQuestion> questions;  // ranked
  std::vector<ReviewDecision> decisions;     // submission order
  std::vector<std::string> pruned;
  std::size_t harvested = 0;
  bool closed = false;
  std::optional<BatchStats> stats;

  const GeneratedQuestion* question(const std::string& id) const;
  const ReviewDecision* decision(const std::string& id) const;
  std::vector<std::string> undecided() const;

  friend bool operator==(const BatchRecord&, const BatchRecord&) = default;
};

enum class SessionStatus { Created, Reviewing, Complete };

std::string to_string(SessionStatus s);

struct SessionState {
  SessionConfig config;
  BatchPlan plan;
  SessionStatus status = SessionStatus::Created;
  PatternPool pool;
  std::vector<Seed> seeds;  // awaiting acquisition at the next batch
  std::vector<BatchRecord> batches;
  std::vector<std::string> warnings;

  std::size_t iteration() const;  // closed batches
  BatchRecord* pending();
  const BatchRecord* pending() const;
  std::vector<BatchStats> stats() const;

  friend bool operator==(const SessionState&, const SessionState&) = default;
};

class SessionError : public std::runtime_error {
 public:
  enum class Kind { NotFound, Conflict, Invalid };

  SessionError(Kind kind, const std::string& what, std::vector<std::string> ids = {})
      : std::runtime_error(what), kind_(kind), ids_(std::move(ids)) {}

  Kind kind() const { return kind_; }
  const std::vector<std::string>& ids() const { return ids_; }

 private:
  Kind kind_;
  std::vector<std::string> ids_;
};

// Everything a session needs besides its own state.
struct SessionContext {
  const std::vector<AnnotatedSentence>* corpus = nullptr;
  const ResourceBundle* resources = nullptr;

  const AnnotatedSentence* sentence(const std::string& id) const;
};

SessionState start_session(const std::vector<AnnotatedSentence>& corpus, std::vector<Seed> seeds,
                           const SessionConfig& cfg);

// Acquires pending seeds, generates and ranks the next batch's questions.
// No-op when a batch is already pending or the plan is exhausted.
void open_batch(SessionState& state, const SessionContext& ctx);

// Records one decision for the pending batch. Resubmitting an identical
// decision is a no-op; a different one is a Conflict.
void submit_decision(SessionState& state, ReviewDecision decision);

// Harvest, weigh, prune and compute stats for the pending batch. Throws a
// Conflict listing undecided questions.
BatchStats close_batch(SessionState& state, const SessionContext& ctx);

// close_batch followed by open_batch of the next batch.
BatchStats advance(SessionState& state, const SessionContext& ctx);

// True when the Wh-word of the corrected text differs from the generated one.
bool type_changed(const std::vector<std::string>& generated, const std::vector<std::string>& corrected);

// Stand-in reviewer used for unattended runs.
class FeedbackOracle {
 public:
  enum class Mode { ReferenceBased, Scripted };

  static FeedbackOracle reference_based(Reference reference, double accept_threshold = 0.6);
  static FeedbackOracle scripted(ReviewAction fallback = ReviewAction::Kept);

  // Scripted rules; the most specific one wins (question, then pattern).
  FeedbackOracle& on_question(const std::string& question_id, ReviewDecision d);
  FeedbackOracle& on_pattern(const std::string& pattern_id, ReviewAction action);
  FeedbackOracle& on_pattern_seed(const std::string& seed_id, ReviewAction action);

  ReviewDecision review(const GeneratedQuestion& q, const PatternPool& pool) const;

  Mode mode() const { return mode_; }
  double accept_threshold() const { return accept_threshold_; }
  const Reference& reference() const { return reference_; }

 private:
  Mode mode_ = Mode::Scripted;
  Reference reference_;
  double accept_threshold_ = 0.6;
  ReviewAction fallback_ = ReviewAction::Kept;
  std::map<std::string, ReviewDecision> by_question_;
  std::map<std::string, ReviewAction> by_pattern_;
  std::map<std::string, ReviewAction> by_seed_;
};

// One loop body: open (if needed), review every pending question with the
// oracle, close.
BatchStats run_iteration(SessionState& state, const SessionContext& ctx, const FeedbackOracle& oracle);

struct BatchEvaluation {
  std::size_t batch = 0;  // 1-based
  MetricReport ranked;
  MetricReport random_baseline;  // mean over the random orderings

  friend bool operator==(const BatchEvaluation&, const BatchEvaluation&) = default;
};

struct SessionReport {
  std::vector<BatchStats> stats;
  std::vector<BatchEvaluation> batches;
  MetricReport window_ranked;    // batches 2..end
  MetricReport window_baseline;
  std::vector<std::string> warnings;
};

struct ReportOptions {
  std::vector<std::size_t> cuts = {5, 10, 20};
  std::size_t baseline_orderings = 3;
  std::uint64_t baseline_seed = 1;
  std::size_t skip_batches = 1;
};

SessionReport build_report(const SessionState& state, const Reference* reference, const EmbeddingTable* table,
                           const ReportOptions& opts = {});

std::string format_stats_table(const std::vector<BatchStats>& stats);
std::string format_report(const SessionReport& report);

struct SessionOutcome {
  SessionState state;
  SessionReport report;
};

SessionOutcome run_session(const std::vector<AnnotatedSentence>& corpus, std::vector<Seed> seeds,
                           const SessionConfig& cfg, const ResourceBundle& resources, const FeedbackOracle& oracle,
                           const Reference* reference = nullptr, const ReportOptions& opts = {});

}  // namespace gen
