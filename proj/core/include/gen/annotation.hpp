#pragma once

// Annotated-sentence data model: tokens, constituency and dependency trees,
// SRL frames, and seed triples. All values are plain aggregates and are
// treated as immutable once loaded.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gen {

struct Token {
  std::size_t index = 0;
  std::string surface;  // multi-word when an NE mention is collapsed
  std::string lemma;
  std::string pos;
  std::optional<std::string> ne_type;
  std::vector<std::string> synset_ids;
  std::vector<std::string> verb_sense_ids;
  std::optional<std::string> embedding_key;
  bool is_stopword = false;

  bool is_verb() const { return pos.rfind("VB", 0) == 0; }
  bool is_named_entity() const { return ne_type.has_value() && !ne_type->empty(); }

  friend bool operator==(const Token&, const Token&) = default;
};

struct ConstituencyNode {
  std::string label;
  std::vector<ConstituencyNode> children;
  std::optional<std::size_t> token_index;  // present iff leaf

  bool is_leaf() const { return children.empty(); }

  // Token indices of the leaves, left to right.
  std::vector<std::size_t> leaves() const;
  // Inclusive [first, last] token span; nullopt for an empty tree.
  std::optional<std::pair<std::size_t, std::size_t>> span() const;
  std::size_t node_count() const;
  // Bracketed rendering, e.g. "(NP (DT the) (NN telephone))" when tokens given.
  std::string to_bracketed(const std::vector<Token>* tokens = nullptr) const;

  friend bool operator==(const ConstituencyNode&, const ConstituencyNode&) = default;
};

struct DependencyEdge {
  std::size_t head = 0;
  std::size_t dependent = 0;
  std::string relation;

  friend bool operator==(const DependencyEdge&, const DependencyEdge&) = default;
};

// Inclusive token span.
struct TokenSpan {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - start + 1; }
  bool contains(std::size_t i) const { return i >= start && i <= end; }

  friend bool operator==(const TokenSpan&, const TokenSpan&) = default;
};

struct SrlArgument {
  std::string label;  // "A0", "A1", "AM-TMP", ...
  std::vector<TokenSpan> spans;

  bool covers(std::size_t i) const;
  std::vector<std::size_t> token_indices() const;

  friend bool operator==(const SrlArgument&, const SrlArgument&) = default;
};

struct SrlFrame {
  std::size_t predicate_index = 0;
  std::vector<SrlArgument> arguments;

  const SrlArgument* find(const std::string& label) const;

  friend bool operator==(const SrlFrame&, const SrlFrame&) = default;
};

struct AnnotatedSentence {
  std::string id;
  std::vector<Token> tokens;
  ConstituencyNode constituency;
  std::vector<DependencyEdge> dependencies;
  std::vector<SrlFrame> srl_frames;

  std::string text() const;

  friend bool operator==(const AnnotatedSentence&, const AnnotatedSentence&) = default;
};

struct Seed {
  std::string id;
  AnnotatedSentence sentence;
  std::vector<Token> question;        // question[wh_index] is the Wh-word
  std::vector<Token> answer;          // answer tokens (copied from the sentence when a span is given)
  std::optional<TokenSpan> answer_span;  // into sentence.tokens
  std::size_t wh_index = 0;

  friend bool operator==(const Seed&, const Seed&) = default;
};

// Raised for any schema or invariant violation; the message names the
// sentence (or seed) id and the offending field.
class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::string record_id, std::string field, const std::string& detail);

  const std::string& record_id() const { return record_id_; }
  const std::string& field() const { return field_; }

 private:
  std::string record_id_;
  std::string field_;
};

// Default interrogative openers; only the first question token is checked.
const std::vector<std::string>& default_wh_words();

// Validate every invariant of the data model. Throws ValidationError.
void validate(const AnnotatedSentence& s);
void validate(const Seed& seed, const std::vector<std::string>& wh_words = default_wh_words());

// Join token surfaces with spaces, attaching closing punctuation.
std::string render(const std::vector<Token>& tokens);
std::string render(const std::vector<std::string>& words);

// Whitespace + punctuation tokenizer shared by the corpus and correction inputs.
std::vector<std::string> tokenize(const std::string& text);

std::string to_lower(std::string s);

}  // namespace gen
