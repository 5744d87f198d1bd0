#include "gen/annotation.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace gen {

namespace {

void collect_leaves(const ConstituencyNode& n, std::vector<std::size_t>& out) {
  if (n.is_leaf()) {
    if (n.token_index) out.push_back(*n.token_index);
    return;
  }
  for (const auto& c : n.children) collect_leaves(c, out);
}

bool is_closing_punct(const std::string& s) {
  static const std::set<std::string> kClosing = {"?", ".", ",", "!", ";", ":", ")", "'s"};
  return kClosing.count(s) > 0;
}

bool is_punct_char(char c) {
  switch (c) {
    case '?': case '.': case ',': case '!': case ';': case ':':
    case '"': case '(': case ')':
      return true;
    default:
      return false;
  }
}

void validate_tree(const ConstituencyNode& n, const AnnotatedSentence& s) {
  const bool has_index = n.token_index.has_value();
  if (n.is_leaf() != has_index) {
    throw ValidationError(s.id, "constituency",
                          "node '" + n.label + "' must have either children or token_index");
  }
  if (n.label.empty()) throw ValidationError(s.id, "constituency", "empty node label");
  if (has_index && *n.token_index >= s.tokens.size()) {
    throw ValidationError(s.id, "constituency.token_index",
                          "leaf index " + std::to_string(*n.token_index) + " out of range (" +
                              std::to_string(s.tokens.size()) + " tokens)");
  }
  for (const auto& c : n.children) validate_tree(c, s);
}

}  // namespace

std::vector<std::size_t> ConstituencyNode::leaves() const {
  std::vector<std::size_t> out;
  collect_leaves(*this, out);
  return out;
}

std::optional<std::pair<std::size_t, std::size_t>> ConstituencyNode::span() const {
  auto l = leaves();
  if (l.empty()) return std::nullopt;
  return std::make_pair(l.front(), l.back());
}

std::size_t ConstituencyNode::node_count() const {
  std::size_t n = 1;
  for (const auto& c : children) n += c.node_count();
  return n;
}

std::string ConstituencyNode::to_bracketed(const std::vector<Token>* tokens) const {
  std::ostringstream os;
  os << '(' << label;
  if (is_leaf()) {
    os << ' ';
    if (tokens && token_index && *token_index < tokens->size()) {
      os << (*tokens)[*token_index].surface;
    } else if (token_index) {
      os << *token_index;
    }
  } else {
    for (const auto& c : children) os << ' ' << c.to_bracketed(tokens);
  }
  os << ')';
  return os.str();
}

bool SrlArgument::covers(std::size_t i) const {
  return std::any_of(spans.begin(), spans.end(), [i](const TokenSpan& s) { return s.contains(i); });
}

std::vector<std::size_t> SrlArgument::token_indices() const {
  std::set<std::size_t> out;
  for (const auto& s : spans)
    for (std::size_t i = s.start; i <= s.end; ++i) out.insert(i);
  return {out.begin(), out.end()};
}

const SrlArgument* SrlFrame::find(const std::string& label) const {
  for (const auto& a : arguments)
    if (a.label == label) return &a;
  return nullptr;
}

std::string AnnotatedSentence::text() const { return render(tokens); }

ValidationError::ValidationError(std::string record_id, std::string field, const std::string& detail)
    : std::runtime_error("record '" + record_id + "', field '" + field + "': " + detail),
      record_id_(std::move(record_id)),
      field_(std::move(field)) {}

const std::vector<std::string>& default_wh_words() {
  static const std::vector<std::string> kWords = {"who",  "what",  "when", "where", "why",
                                                  "how",  "which", "whom", "whose"};
  return kWords;
}

void validate(const AnnotatedSentence& s) {
  if (s.id.empty()) throw ValidationError("<unnamed>", "id", "sentence id must be non-empty");
  if (s.tokens.empty()) throw ValidationError(s.id, "tokens", "sentence has no tokens");
  for (std::size_t i = 0; i < s.tokens.size(); ++i) {
    const auto& t = s.tokens[i];
    if (t.index != i) {
      throw ValidationError(s.id, "tokens[" + std::to_string(i) + "].index",
                            "indices must be contiguous from 0");
    }
    if (t.surface.empty()) {
      throw ValidationError(s.id, "tokens[" + std::to_string(i) + "].surface", "empty surface");
    }
    if (t.pos.empty()) {
      throw ValidationError(s.id, "tokens[" + std::to_string(i) + "].pos", "empty POS tag");
    }
  }

  validate_tree(s.constituency, s);
  auto leaves = s.constituency.leaves();
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    if (leaves[i] != i) {
      throw ValidationError(s.id, "constituency",
                            "in-order leaves must enumerate token indices 0.." +
                                std::to_string(s.tokens.size() - 1));
    }
  }
  if (leaves.size() != s.tokens.size()) {
    throw ValidationError(s.id, "constituency", "tree does not cover every token");
  }

  for (std::size_t i = 0; i < s.dependencies.size(); ++i) {
    const auto& e = s.dependencies[i];
    const std::string field = "dependencies[" + std::to_string(i) + "]";
    if (e.head >= s.tokens.size() || e.dependent >= s.tokens.size()) {
      throw ValidationError(s.id, field, "dangling token index");
    }
    if (e.head == e.dependent) throw ValidationError(s.id, field, "head equals dependent");
  }

  for (std::size_t f = 0; f < s.srl_frames.size(); ++f) {
    const auto& frame = s.srl_frames[f];
    const std::string field = "srl[" + std::to_string(f) + "]";
    if (frame.predicate_index >= s.tokens.size()) {
      throw ValidationError(s.id, field + ".predicate_index", "dangling token index");
    }
    if (!s.tokens[frame.predicate_index].is_verb()) {
      throw ValidationError(s.id, field + ".predicate_index",
                            "predicate token '" + s.tokens[frame.predicate_index].surface +
                                "' is not verbal");
    }
    std::set<std::string> labels;
    for (const auto& arg : frame.arguments) {
      if (!labels.insert(arg.label).second) {
        throw ValidationError(s.id, field + ".args", "duplicate label " + arg.label);
      }
      if (arg.spans.empty()) throw ValidationError(s.id, field + ".args." + arg.label, "no spans");
      for (const auto& sp : arg.spans) {
        if (sp.start > sp.end || sp.end >= s.tokens.size()) {
          throw ValidationError(s.id, field + ".args." + arg.label + ".span", "span outside sentence");
        }
      }
    }
  }
}

void validate(const Seed& seed, const std::vector<std::string>& wh_words) {
  validate(seed.sentence);
  const std::string& id = seed.id.empty() ? seed.sentence.id : seed.id;
  if (seed.question.empty()) throw ValidationError(id, "question", "missing question tokens");
  if (seed.answer.empty()) throw ValidationError(id, "answer", "missing answer");
  for (std::size_t i = 0; i < seed.question.size(); ++i) {
    if (seed.question[i].index != i) {
      throw ValidationError(id, "question.tokens[" + std::to_string(i) + "].index",
                            "indices must be contiguous from 0");
    }
  }
  const auto first = to_lower(seed.question.front().surface);
  if (std::find(wh_words.begin(), wh_words.end(), first) == wh_words.end()) {
    throw ValidationError(id, "question", "question does not open with a Wh-word ('" +
                                              seed.question.front().surface + "')");
  }
  if (seed.wh_index != 0) throw ValidationError(id, "question", "Wh-word must be the first token");
  if (seed.answer_span) {
    const auto& sp = *seed.answer_span;
    if (sp.start > sp.end || sp.end >= seed.sentence.tokens.size()) {
      throw ValidationError(id, "answer_span", "answer span outside the sentence");
    }
    if (sp.size() != seed.answer.size()) {
      throw ValidationError(id, "answer_span", "answer tokens do not match the span");
    }
  }
}

std::string render(const std::vector<Token>& tokens) {
  std::vector<std::string> words;
  words.reserve(tokens.size());
  for (const auto& t : tokens) words.push_back(t.surface);
  return render(words);
}

std::string render(const std::vector<std::string>& words) {
  std::string out;
  for (const auto& w : words) {
    if (!out.empty() && !is_closing_punct(w)) out += ' ';
    out += w;
  }
  return out;
}

std::vector<std::string> tokenize(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  std::string word;
  while (is >> word) {
    std::vector<std::string> tail;
    std::size_t b = 0;
    std::size_t e = word.size();
    while (b < e && is_punct_char(word[b])) out.emplace_back(1, word[b++]);
    while (e > b && is_punct_char(word[e - 1])) tail.emplace_back(1, word[--e]);
    if (b < e) out.push_back(word.substr(b, e - b));
    out.insert(out.end(), tail.rbegin(), tail.rend());
  }
  return out;
}

std::string to_lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

}  // namespace gen
