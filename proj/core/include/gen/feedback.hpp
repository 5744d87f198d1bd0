#pragma once

// Reviewer feedback: question similarity, pattern weight updates, seed
// harvesting from corrected questions, and pruning.

#include <optional>
#include <string>
#include <vector>

#include "gen/generation.hpp"
#include "gen/pattern.hpp"

namespace gen {

enum class ReviewAction { Kept, Edited, Discarded };

std::string to_string(ReviewAction a);
ReviewAction review_action_from_string(const std::string& s);  // throws std::invalid_argument

struct ReviewDecision {
  std::string question_id;
  ReviewAction action = ReviewAction::Kept;
  std::optional<std::vector<std::string>> corrected_text;  // absent iff discarded
  bool type_changed = false;

  friend bool operator==(const ReviewDecision&, const ReviewDecision&) = default;
};

// Throws std::invalid_argument when corrected_text presence disagrees with the action.
void validate(const ReviewDecision& d);

enum class WeighingStrategy { WMA, EWAF };
enum class SimilarityKind { Overlap, Levenshtein };

std::string to_string(WeighingStrategy s);
std::string to_string(SimilarityKind s);
WeighingStrategy weighing_strategy_from_string(const std::string& s);
SimilarityKind similarity_kind_from_string(const std::string& s);

struct WeighingConfig {
  WeighingStrategy strategy = WeighingStrategy::WMA;
  SimilarityKind sim = SimilarityKind::Levenshtein;
  double th = 0.9;
  double penalty = 0.2;
  double bonus = 0.3;
  double epsilon = 0.05;  // EWAF similarity floor

  friend bool operator==(const WeighingConfig&, const WeighingConfig&) = default;
};

// Throws std::invalid_argument for out-of-range parameters; returns warnings
// for parameters the strategy ignores.
std::vector<std::string> validate(const WeighingConfig& cfg);

// Overlap coefficient of the lowercased token sets.
double sim_overlap(const std::vector<std::string>& a, const std::vector<std::string>& b);
// 1 - word edit distance / longer length.
double sim_levenshtein(const std::vector<std::string>& a, const std::vector<std::string>& b);
std::size_t word_edit_distance(const std::vector<std::string>& a, const std::vector<std::string>& b);
double similarity(SimilarityKind kind, const std::vector<std::string>& a, const std::vector<std::string>& b);

bool successful(const std::vector<std::string>& generated, const std::vector<std::string>& corrected,
                const WeighingConfig& cfg);

// `corrected` absent means the question was discarded.
PatternWeight update_wma(const PatternWeight& w, const std::string& question_id,
                         const std::vector<std::string>& generated,
                         const std::optional<std::vector<std::string>>& corrected, const WeighingConfig& cfg);
PatternWeight update_ewaf(const PatternWeight& w, const std::string& question_id,
                          const std::vector<std::string>& generated,
                          const std::optional<std::vector<std::string>>& corrected, const WeighingConfig& cfg);
PatternWeight update_weight(const PatternWeight& w, const std::string& question_id,
                            const std::vector<std::string>& generated,
                            const std::optional<std::vector<std::string>>& corrected, const WeighingConfig& cfg);

// Text the decision stands for when weighing: nullopt for discarded and
// type-changed questions.
std::optional<std::vector<std::string>> weighing_correction(const ReviewDecision& d, const GeneratedQuestion& q);

// Applies one update per decision, in decision order. Decisions for unknown
// questions or pruned patterns are skipped.
void apply_weights(PatternPool& pool, const std::vector<GeneratedQuestion>& questions,
                   const std::vector<ReviewDecision>& decisions, const WeighingConfig& cfg);

struct HarvestResult {
  std::vector<Seed> seeds;
  std::vector<std::string> warnings;
};

// One seed per kept or edited question (type changes included), pairing the
// corrected text with its source sentence.
HarvestResult harvest_seeds(const std::vector<ReviewDecision>& decisions,
                            const std::vector<GeneratedQuestion>& questions,
                            const std::vector<AnnotatedSentence>& sentences, const PatternPool& pool,
                            const Stopwords& stopwords);

// Removes patterns that produced at least one question in the batch and had
// every one of them discarded. Returns the removed ids.
std::vector<std::string> prune_patterns(PatternPool& pool, const std::vector<GeneratedQuestion>& questions,
                                        const std::vector<ReviewDecision>& decisions);

}  // namespace gen
