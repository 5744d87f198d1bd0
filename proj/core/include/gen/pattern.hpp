#pragma once

// Pattern acquisition: predicate-argument extraction and the
// <Q/A, predicate-argument, alignment> tuples learned from seeds.

#include <map>
#include <string>
#include <vector>

#include "gen/alignment.hpp"
#include "gen/annotation.hpp"
#include "gen/similarity.hpp"

namespace gen {

struct ArgumentStructure {
  std::string label;
  std::vector<std::size_t> tokens;          // sorted sentence token indices
  std::vector<ConstituencyNode> cover;      // maximal subtrees tiling the argument
  std::vector<ConstituencyNode> nested;     // proper descendants of `cover`, pre-order
  std::vector<DependencyEdge> dependencies; // induced sub-graph (head may be the predicate)

  bool contains(std::size_t i) const;

  friend bool operator==(const ArgumentStructure&, const ArgumentStructure&) = default;
};

struct PredicateArgument {
  std::size_t frame_index = 0;
  std::size_t predicate_index = 0;
  Token predicate;
  std::vector<ArgumentStructure> arguments;  // frame order

  const ArgumentStructure* find(const std::string& label) const;
  // Label of the argument containing sentence token `i`, if any.
  const ArgumentStructure* argument_of(std::size_t i) const;

  friend bool operator==(const PredicateArgument&, const PredicateArgument&) = default;
};

struct ExtractionResult {
  std::vector<PredicateArgument> structures;
  std::vector<std::string> warnings;
};

ExtractionResult extract_predicate_arguments(const AnnotatedSentence& s);

struct WeightUpdate {
  std::string question_id;
  double sim = 0.0;
  double weight = 1.0;

  friend bool operator==(const WeightUpdate&, const WeightUpdate&) = default;
};

struct PatternWeight {
  double w = 1.0;
  std::vector<WeightUpdate> history;

  friend bool operator==(const PatternWeight&, const PatternWeight&) = default;
};

struct Pattern {
  std::string id;            // "i<iteration>-<content hash>"
  std::string content_hash;
  std::string seed_id;
  int iteration = 0;
  AnnotatedSentence sentence;
  std::vector<Token> question;
  std::vector<Token> answer;
  std::size_t wh_index = 0;
  PredicateArgument pa;
  Alignment alignment;               // qa index: question first, then answer
  std::string answer_argument;       // label of the argument aligned to the answer, if any
  PatternWeight weight;

  std::size_t qa_size() const { return question.size() + answer.size(); }
  const Token& qa_token(std::size_t qa_index) const;
  bool is_answer_index(std::size_t qa_index) const { return qa_index >= question.size(); }

  friend bool operator==(const Pattern&, const Pattern&) = default;
};

struct Rejection {
  std::string seed_id;
  std::optional<std::size_t> predicate_index;
  std::string reason;
};

struct AcquisitionResult {
  std::vector<Pattern> patterns;
  std::vector<Rejection> rejected;
  std::vector<std::string> warnings;
};

// Checks both validity conditions of a candidate pattern; returns the reason
// for rejection, or an empty string when valid.
std::string check_pattern_validity(const Pattern& p, const Stopwords& stopwords);

AcquisitionResult acquire_patterns(const std::vector<Seed>& seeds, const Equivalence& equiv, int iteration = 0);

// Ordered pattern collection keyed by content hash; duplicates keep the
// earliest entry.
class PatternPool {
 public:
  // Returns true when the pattern was new.
  bool add(Pattern p);
  std::size_t add_all(std::vector<Pattern> ps);
  bool remove(const std::string& id);

  const std::vector<Pattern>& patterns() const { return patterns_; }
  std::vector<Pattern>& patterns() { return patterns_; }
  Pattern* find(const std::string& id);
  const Pattern* find(const std::string& id) const;
  std::size_t size() const { return patterns_.size(); }
  bool empty() const { return patterns_.empty(); }

  friend bool operator==(const PatternPool&, const PatternPool&) = default;

 private:
  std::vector<Pattern> patterns_;
};

std::string content_hash(const Pattern& p);

}  // namespace gen
