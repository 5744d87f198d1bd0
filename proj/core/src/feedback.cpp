#include "gen/feedback.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace gen {

namespace {

std::vector<std::string> flatten(const std::vector<std::string>& words) {
  std::string joined;
  for (const auto& w : words) {
    joined += w;
    joined += ' ';
  }
  return tokenize(joined);
}

std::vector<std::string> split_words(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  std::string w;
  while (is >> w) out.push_back(to_lower(w));
  return out;
}

// Re-annotates free text against the tokens it most likely came from.
std::vector<Token> annotate(const std::vector<std::string>& raw, const std::vector<Token>& sentence,
                            const std::vector<Token>& pattern_question, const Stopwords& stopwords) {
  const auto words = flatten(raw);
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < words.size()) {
    const Token* multi = nullptr;
    std::size_t multi_len = 1;
    for (const auto& t : sentence) {
      const auto parts = split_words(t.surface);
      if (parts.size() <= multi_len || i + parts.size() > words.size()) continue;
      bool same = true;
      for (std::size_t k = 0; k < parts.size() && same; ++k) same = to_lower(words[i + k]) == parts[k];
      if (same) {
        multi = &t;
        multi_len = parts.size();
      }
    }
    Token tok;
    if (multi) {
      tok = *multi;
    } else {
      const auto lw = to_lower(words[i]);
      auto same_word = [&](const Token& t) { return to_lower(t.surface) == lw; };
      auto qit = std::find_if(pattern_question.begin(), pattern_question.end(), same_word);
      auto sit = std::find_if(sentence.begin(), sentence.end(), same_word);
      if (qit != pattern_question.end()) {
        tok = *qit;
      } else if (sit != sentence.end()) {
        tok = *sit;
      } else {
        tok.lemma = lw;
        tok.pos = "UNK";
        tok.is_stopword = stopwords.contains(lw);
      }
      tok.surface = words[i];
    }
    tok.index = out.size();
    out.push_back(std::move(tok));
    i += multi_len;
  }
  return out;
}

std::optional<TokenSpan> find_span(const std::vector<std::string>& answer, const std::vector<Token>& sentence) {
  std::vector<std::string> target;
  for (const auto& w : flatten(answer)) target.push_back(to_lower(w));
  if (target.empty()) return std::nullopt;
  for (std::size_t b = 0; b < sentence.size(); ++b) {
    std::vector<std::string> acc;
    for (std::size_t e = b; e < sentence.size() && acc.size() < target.size(); ++e) {
      for (const auto& w : split_words(sentence[e].surface)) acc.push_back(w);
      if (acc == target) return TokenSpan{b, e};
    }
  }
  return std::nullopt;
}

}  // namespace

std::string to_string(ReviewAction a) {
  switch (a) {
    case ReviewAction::Kept: return "kept";
    case ReviewAction::Edited: return "edited";
    case ReviewAction::Discarded: return "discarded";
  }
  return "unknown";
}

ReviewAction review_action_from_string(const std::string& s) {
  if (s == "kept" || s == "keep") return ReviewAction::Kept;
  if (s == "edited" || s == "edit") return ReviewAction::Edited;
  if (s == "discarded" || s == "discard") return ReviewAction::Discarded;
  throw std::invalid_argument("unknown review action '" + s + "'");
}

void validate(const ReviewDecision& d) {
  if (d.question_id.empty()) throw std::invalid_argument("decision without question id");
  const bool discarded = d.action == ReviewAction::Discarded;
  if (discarded && d.corrected_text) {
    throw std::invalid_argument("decision for " + d.question_id + ": discarded questions carry no corrected text");
  }
  if (!discarded && !d.corrected_text) {
    throw std::invalid_argument("decision for " + d.question_id + ": corrected text required");
  }
  if (d.corrected_text && d.corrected_text->empty()) {
    throw std::invalid_argument("decision for " + d.question_id + ": corrected text is empty");
  }
}

std::string to_string(WeighingStrategy s) { return s == WeighingStrategy::WMA ? "wma" : "ewaf"; }
std::string to_string(SimilarityKind s) { return s == SimilarityKind::Overlap ? "overlap" : "lev"; }

WeighingStrategy weighing_strategy_from_string(const std::string& s) {
  const auto l = to_lower(s);
  if (l == "wma") return WeighingStrategy::WMA;
  if (l == "ewaf") return WeighingStrategy::EWAF;
  throw std::invalid_argument("unknown weighing strategy '" + s + "'");
}

SimilarityKind similarity_kind_from_string(const std::string& s) {
  const auto l = to_lower(s);
  if (l == "overlap") return SimilarityKind::Overlap;
  if (l == "lev" || l == "levenshtein") return SimilarityKind::Levenshtein;
  throw std::invalid_argument("unknown similarity '" + s + "'");
}

std::vector<std::string> validate(const WeighingConfig& cfg) {
  std::vector<std::string> warnings;
  if (!(cfg.penalty > 0.0 && cfg.penalty < 1.0)) throw std::invalid_argument("penalty must lie in (0, 1)");
  if (!(cfg.epsilon > 0.0 && cfg.epsilon <= 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1]");
  if (cfg.strategy == WeighingStrategy::WMA) {
    if (!(cfg.th > 0.0 && cfg.th <= 1.0)) throw std::invalid_argument("threshold must lie in (0, 1]");
    if (!(cfg.bonus >= 0.0 && cfg.bonus < 1.0)) throw std::invalid_argument("bonus must lie in [0, 1)");
  } else {
    warnings.push_back("threshold and bonus are not used by EWAF and are ignored");
  }
  return warnings;
}

double sim_overlap(const std::vector<std::string>& a_in, const std::vector<std::string>& b_in) {
  const auto a = flatten(a_in);
  const auto b = flatten(b_in);
  if (a.empty() && b.empty()) return 1.0;
  if (a.empty() || b.empty()) return 0.0;
  std::set<std::string> sa, sb;
  for (const auto& w : a) sa.insert(to_lower(w));
  for (const auto& w : b) sb.insert(to_lower(w));
  std::size_t common = 0;
  for (const auto& w : sa) common += sb.count(w);
  return static_cast<double>(common) / static_cast<double>(std::min(sa.size(), sb.size()));
}

std::size_t word_edit_distance(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (to_lower(a[i - 1]) == to_lower(b[j - 1]) ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

double sim_levenshtein(const std::vector<std::string>& a_in, const std::vector<std::string>& b_in) {
  const auto a = flatten(a_in);
  const auto b = flatten(b_in);
  const std::size_t longest = std::max(a.size(), b.size());
  if (longest == 0) return 1.0;
  return 1.0 - static_cast<double>(word_edit_distance(a, b)) / static_cast<double>(longest);
}

double similarity(SimilarityKind kind, const std::vector<std::string>& a, const std::vector<std::string>& b) {
  return kind == SimilarityKind::Overlap ? sim_overlap(a, b) : sim_levenshtein(a, b);
}

bool successful(const std::vector<std::string>& generated, const std::vector<std::string>& corrected,
                const WeighingConfig& cfg) {
  return similarity(cfg.sim, generated, corrected) > cfg.th;
}

PatternWeight update_wma(const PatternWeight& w, const std::string& question_id,
                         const std::vector<std::string>& generated,
                         const std::optional<std::vector<std::string>>& corrected, const WeighingConfig& cfg) {
  PatternWeight out = w;
  const double sim = corrected ? similarity(cfg.sim, generated, *corrected) : 0.0;
  const bool ok = corrected && sim > cfg.th;
  out.w = ok ? w.w / (1.0 - cfg.bonus) : w.w * (1.0 - cfg.penalty);
  out.history.push_back({question_id, sim, out.w});
  return out;
}

PatternWeight update_ewaf(const PatternWeight& w, const std::string& question_id,
                          const std::vector<std::string>& generated,
                          const std::optional<std::vector<std::string>>& corrected, const WeighingConfig& cfg) {
  PatternWeight out = w;
  const double raw = corrected ? similarity(cfg.sim, generated, *corrected) : 0.0;
  const double sim = std::max(raw, cfg.epsilon);
  out.w = w.w * std::exp(-cfg.penalty / sim);
  out.history.push_back({question_id, raw, out.w});
  return out;
}

PatternWeight update_weight(const PatternWeight& w, const std::string& question_id,
                            const std::vector<std::string>& generated,
                            const std::optional<std::vector<std::string>>& corrected, const WeighingConfig& cfg) {
  return cfg.strategy == WeighingStrategy::WMA ? update_wma(w, question_id, generated, corrected, cfg)
                                               : update_ewaf(w, question_id, generated, corrected, cfg);
}

std::optional<std::vector<std::string>> weighing_correction(const ReviewDecision& d, const GeneratedQuestion& q) {
  if (d.action == ReviewAction::Discarded || d.type_changed) return std::nullopt;
  if (d.corrected_text) return d.corrected_text;
  return q.text;
}

void apply_weights(PatternPool& pool, const std::vector<GeneratedQuestion>& questions,
                   const std::vector<ReviewDecision>& decisions, const WeighingConfig& cfg) {
  std::map<std::string, const GeneratedQuestion*> by_id;
  for (const auto& q : questions) by_id[q.id] = &q;
  for (const auto& d : decisions) {
    auto it = by_id.find(d.question_id);
    if (it == by_id.end()) continue;
    Pattern* p = pool.find(it->second->pattern_id);
    if (!p) continue;
    p->weight = update_weight(p->weight, d.question_id, it->second->text, weighing_correction(d, *it->second), cfg);
  }
}

HarvestResult harvest_seeds(const std::vector<ReviewDecision>& decisions,
                            const std::vector<GeneratedQuestion>& questions,
                            const std::vector<AnnotatedSentence>& sentences, const PatternPool& pool,
                            const Stopwords& stopwords) {
  HarvestResult out;
  std::map<std::string, const GeneratedQuestion*> by_id;
  for (const auto& q : questions) by_id[q.id] = &q;
  std::map<std::string, const AnnotatedSentence*> sentence_by_id;
  for (const auto& s : sentences) sentence_by_id[s.id] = &s;

  for (const auto& d : decisions) {
    if (d.action == ReviewAction::Discarded) continue;
    auto qit = by_id.find(d.question_id);
    if (qit == by_id.end()) {
      out.warnings.push_back("decision for unknown question " + d.question_id);
      continue;
    }
    const GeneratedQuestion& q = *qit->second;
    auto sit = sentence_by_id.find(q.source_sentence_id);
    if (sit == sentence_by_id.end()) {
      out.warnings.push_back("question " + q.id + " refers to unknown sentence " + q.source_sentence_id);
      continue;
    }
    const auto text = d.corrected_text ? *d.corrected_text : q.text;
    const Pattern* p = pool.find(q.pattern_id);
    static const std::vector<Token> none;

    Seed seed;
    seed.id = "h-" + q.id;
    seed.sentence = *sit->second;
    seed.question = annotate(text, seed.sentence.tokens, p ? p->question : none, stopwords);
    if (auto span = find_span(q.answer_text, seed.sentence.tokens)) {
      seed.answer_span = span;
      seed.answer.assign(seed.sentence.tokens.begin() + static_cast<std::ptrdiff_t>(span->start),
                         seed.sentence.tokens.begin() + static_cast<std::ptrdiff_t>(span->end) + 1);
    } else {
      seed.answer = annotate(q.answer_text, seed.sentence.tokens, p ? p->answer : none, stopwords);
    }
    try {
      validate(seed);
    } catch (const ValidationError& e) {
      out.warnings.push_back("question " + q.id + " not harvested: " + e.what());
      continue;
    }
    out.seeds.push_back(std::move(seed));
  }
  return out;
}

std::vector<std::string> prune_patterns(PatternPool& pool, const std::vector<GeneratedQuestion>& questions,
                                        const std::vector<ReviewDecision>& decisions) {
  std::map<std::string, ReviewAction> action;
  for (const auto& d : decisions) action[d.question_id] = d.action;
  std::map<std::string, bool> all_discarded;
  for (const auto& q : questions) {
    auto it = action.find(q.id);
    const bool discarded = it != action.end() && it->second == ReviewAction::Discarded;
    auto [slot, inserted] = all_discarded.emplace(q.pattern_id, discarded);
    if (!inserted) slot->second = slot->second && discarded;
  }
  std::vector<std::string> removed;
  for (const auto& p : pool.patterns()) {
    auto it = all_discarded.find(p.id);
    if (it != all_discarded.end() && it->second) removed.push_back(p.id);
  }
  for (const auto& id : removed) pool.remove(id);
  return removed;
}

}  // namespace gen
