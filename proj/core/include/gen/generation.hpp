#pragma once

// Applying patterns to new sentences: predicate-argument matching under the
// four tree-matching strategies, then token replacement into the pattern's
// question.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gen/pattern.hpp"
#include "gen/tree_match.hpp"

namespace gen {

enum class MatchStrategy { Strict, Subtree, SubtreeFlex, Argument };

inline const std::vector<MatchStrategy>& all_strategies() {
  static const std::vector<MatchStrategy> all = {MatchStrategy::Strict, MatchStrategy::Subtree,
                                                 MatchStrategy::SubtreeFlex, MatchStrategy::Argument};
  return all;
}

std::string to_string(MatchStrategy s);
MatchStrategy strategy_from_string(const std::string& s);  // throws std::invalid_argument

struct ArgumentMatch {
  std::string label;
  std::vector<std::size_t> chunk;  // candidate sentence tokens standing in for the argument
  LeafAlignment pairs;             // pattern sentence token -> candidate token (Strict/Subtree)
};

struct MatchBundle {
  MatchStrategy strategy = MatchStrategy::Strict;
  std::size_t frame_index = 0;
  std::size_t predicate_index = 0;
  std::vector<ArgumentMatch> arguments;  // pattern argument order
  bool dependencies_match = false;       // recorded, never required

  const ArgumentMatch* find(const std::string& label) const;
};

// Whole-chunk pairing: always succeeds.
ArgumentMatch match_argument(const ArgumentStructure& pattern_arg, const ArgumentStructure& candidate_arg);

// Predicate equivalence, argument-label inclusion, per-argument subtree
// matching under `strategy`, and the answer-argument NE type guard.
std::optional<MatchBundle> pa_matches(const Pattern& p, const PredicateArgument& candidate,
                                      const AnnotatedSentence& s, MatchStrategy strategy,
                                      const Equivalence& equiv);

struct GeneratedQuestion {
  std::string id;
  std::vector<std::string> text;
  std::vector<std::string> answer_text;
  std::string pattern_id;
  MatchStrategy strategy = MatchStrategy::Strict;
  std::string source_sentence_id;
  std::size_t frame_index = 0;
  // Pattern question token -> new sentence token.
  std::vector<std::pair<std::size_t, std::size_t>> alignment_trace;
  double rank_score = 1.0;

  std::string question_string() const { return render(text); }
  std::string answer_string() const { return render(answer_text); }

  friend bool operator==(const GeneratedQuestion&, const GeneratedQuestion&) = default;
};

enum class Tense { Past, PresentThirdSingular, Present, Future, Unknown };

// Tense of the verb at `index`, from its tag and its auxiliaries.
Tense verb_tense(const AnnotatedSentence& s, std::size_t index);

// Questions for every frame of `s` and every strategy, deduplicated by text
// (first strategy wins).
std::vector<GeneratedQuestion> generate(const Pattern& p, const AnnotatedSentence& s,
                                        const std::vector<MatchStrategy>& strategies, const Equivalence& equiv);
std::vector<GeneratedQuestion> generate(const Pattern& p, const AnnotatedSentence& s,
                                        const ExtractionResult& extracted,
                                        const std::vector<MatchStrategy>& strategies, const Equivalence& equiv);

// Sentence-major, then pool order.
std::vector<GeneratedQuestion> generate_batch(const std::vector<Pattern>& pool,
                                              const std::vector<AnnotatedSentence>& sentences,
                                              const std::vector<MatchStrategy>& strategies,
                                              const Equivalence& equiv);

}  // namespace gen
