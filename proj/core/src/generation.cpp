#include "gen/generation.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <stdexcept>

namespace gen {

namespace {

const std::set<std::string>& do_forms() {
  static const std::set<std::string> s = {"do", "does", "did"};
  return s;
}

const std::set<std::string>& be_forms() {
  static const std::set<std::string> s = {"is", "are", "am", "was", "were", "be", "been", "being"};
  return s;
}

const std::set<std::string>& have_forms() {
  static const std::set<std::string> s = {"has", "have", "had"};
  return s;
}

bool is_aux_word(const Token& t) {
  const auto w = to_lower(t.surface);
  return do_forms().count(w) || be_forms().count(w) || have_forms().count(w) || t.pos == "MD";
}

// Tense signalled by a single auxiliary; Unknown for anything else.
Tense aux_tense(const Token& t) {
  const auto w = to_lower(t.surface);
  if (w == "will" || w == "shall" || w == "'ll") return Tense::Future;
  if (w == "did" || w == "was" || w == "were" || w == "had") return Tense::Past;
  if (w == "does" || w == "is" || w == "has") return Tense::PresentThirdSingular;
  if (w == "do" || w == "are" || w == "am" || w == "have") return Tense::Present;
  return Tense::Unknown;
}

Tense tag_tense(const std::string& pos) {
  if (pos == "VBD") return Tense::Past;
  if (pos == "VBZ") return Tense::PresentThirdSingular;
  if (pos == "VBP") return Tense::Present;
  return Tense::Unknown;
}

std::vector<const ConstituencyNode*> pointers(const std::vector<ConstituencyNode>& v) {
  std::vector<const ConstituencyNode*> out;
  for (const auto& n : v) out.push_back(&n);
  return out;
}

std::optional<std::string> first_ne_type(const std::vector<Token>& tokens, const std::vector<std::size_t>& idx) {
  for (auto i : idx)
    if (tokens.at(i).is_named_entity()) return tokens[i].ne_type;
  return std::nullopt;
}

bool dependencies_subset(const ArgumentStructure& p, const ArgumentStructure& c) {
  std::multiset<std::string> have;
  for (const auto& e : c.dependencies) have.insert(e.relation);
  for (const auto& e : p.dependencies) {
    auto it = have.find(e.relation);
    if (it == have.end()) return false;
    have.erase(it);
  }
  return true;
}

std::optional<ArgumentMatch> match_one(const ArgumentStructure& pa, const ArgumentStructure& ca,
                                       const std::vector<Token>& ptoks, const std::vector<Token>& ctoks,
                                       MatchStrategy strategy, const Equivalence& equiv) {
  ArgumentMatch m;
  m.label = pa.label;
  switch (strategy) {
    case MatchStrategy::Strict: {
      if (pa.cover.size() != ca.cover.size()) return std::nullopt;
      std::set<std::size_t> chunk;
      for (std::size_t i = 0; i < pa.cover.size(); ++i) {
        auto a = match_trees_strict({&pa.cover[i], &ptoks}, {&ca.cover[i], &ctoks}, equiv);
        if (!a) return std::nullopt;
        m.pairs.insert(m.pairs.end(), a->begin(), a->end());
        for (auto l : ca.cover[i].leaves()) chunk.insert(l);
      }
      m.chunk.assign(chunk.begin(), chunk.end());
      return m;
    }
    case MatchStrategy::Subtree: {
      std::set<std::size_t> chunk;
      for (const auto& pt : pa.cover) {
        std::optional<LeafAlignment> found;
        for (const auto* ct : pointers(ca.cover)) {
          found = match_subtree({&pt, &ptoks}, {ct, &ctoks}, equiv);
          if (found) break;
        }
        if (!found) return std::nullopt;
        m.pairs.insert(m.pairs.end(), found->begin(), found->end());
        for (const auto& pr : *found) chunk.insert(pr.second);
      }
      m.chunk.assign(chunk.begin(), chunk.end());
      return m;
    }
    case MatchStrategy::SubtreeFlex: {
      std::set<std::size_t> chunk;
      for (const auto& pt : pa.cover) {
        const auto tmpl = compile_template(pt);
        std::optional<FlexMatch> found;
        for (const auto& ct : ca.cover) {
          found = match_flex(tmpl, ct);
          if (found) break;
        }
        if (!found) return std::nullopt;
        m.pairs.insert(m.pairs.end(), found->pairs.begin(), found->pairs.end());
        chunk.insert(found->chunk.begin(), found->chunk.end());
      }
      m.chunk.assign(chunk.begin(), chunk.end());
      return m;
    }
    case MatchStrategy::Argument:
      return match_argument(pa, ca);
  }
  return std::nullopt;
}

std::string capitalize(std::string w) {
  if (!w.empty()) w[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(w[0])));
  return w;
}

bool proper_noun(const Token& t) { return t.pos == "NNP" || t.pos == "NNPS" || t.is_named_entity(); }

// Surface of a new-sentence token placed inside a question.
std::string placed_surface(const Token& t) {
  if (t.index == 0 && !proper_noun(t)) return to_lower(t.surface);
  return t.surface;
}

struct VerbRewrite {
  std::optional<std::size_t> aux;  // question index of the auxiliary
  std::string aux_text;
  std::string verb_text;
};

Tense question_tense(const std::vector<Token>& q, std::size_t verb, std::optional<std::size_t> aux) {
  if (aux) return aux_tense(q[*aux]);
  if (verb > 0 && aux_tense(q[verb - 1]) == Tense::Future) return Tense::Future;
  return tag_tense(q[verb].pos);
}

VerbRewrite rewrite_verb(const Pattern& p, const AnnotatedSentence& s, std::size_t new_pred, std::size_t q_verb,
                         const VerbLexicon& lexicon) {
  const auto& q = p.question;
  VerbRewrite out;
  for (std::size_t i = q_verb; i-- > 0;) {
    if (i == p.wh_index) break;
    if (p.alignment.sentence_index_of(i)) continue;
    const auto w = to_lower(q[i].surface);
    if (do_forms().count(w) || be_forms().count(w)) {
      out.aux = i;
      break;
    }
  }
  const Token& qv = q[q_verb];
  const Token& old_pred = p.sentence.tokens[p.pa.predicate_index];
  const Token& new_tok = s.tokens[new_pred];
  const std::string lemma = to_lower(new_tok.lemma) == to_lower(old_pred.lemma) ? qv.lemma : new_tok.lemma;

  const Tense q_tense = question_tense(q, q_verb, out.aux);
  Tense tense = verb_tense(s, new_pred);
  if (tense == Tense::Unknown) tense = q_tense;

  out.aux_text = out.aux ? q[*out.aux].surface : std::string();
  if (to_lower(lemma) == to_lower(qv.lemma) && tense == q_tense) {
    out.verb_text = qv.surface;
    return out;
  }
  const auto forms = lexicon.forms(lemma);
  if (out.aux) {
    const auto aux = to_lower(q[*out.aux].surface);
    if (do_forms().count(aux)) {
      switch (tense) {
        case Tense::Past: out.aux_text = "did"; break;
        case Tense::PresentThirdSingular: out.aux_text = "does"; break;
        case Tense::Present: out.aux_text = "do"; break;
        case Tense::Future: out.aux_text = "will"; break;
        case Tense::Unknown: break;
      }
      out.verb_text = forms.base;
    } else {
      const bool plural = aux == "were" || aux == "are" || aux == "am";
      switch (tense) {
        case Tense::Past: out.aux_text = plural ? "were" : "was"; break;
        case Tense::PresentThirdSingular: out.aux_text = "is"; break;
        case Tense::Present: out.aux_text = plural ? "are" : "is"; break;
        case Tense::Future:
        case Tense::Unknown: break;
      }
      out.verb_text = qv.pos == "VBG" ? forms.gerund : forms.participle;
    }
    return out;
  }
  switch (tense) {
    case Tense::Past: out.verb_text = forms.past; break;
    case Tense::PresentThirdSingular: out.verb_text = forms.third_singular; break;
    case Tense::Present: out.verb_text = forms.base; break;
    case Tense::Future: out.verb_text = "will " + forms.base; break;
    case Tense::Unknown:
      if (qv.pos == "VBN") out.verb_text = forms.participle;
      else if (qv.pos == "VBG") out.verb_text = forms.gerund;
      else out.verb_text = forms.base;
      break;
  }
  return out;
}

std::optional<GeneratedQuestion> realize(const Pattern& p, const AnnotatedSentence& s, const MatchBundle& m,
                                         const VerbLexicon& lexicon, const Stopwords& stopwords) {
  const auto& q = p.question;
  const ArgumentMatch* answer_match = p.answer_argument.empty() ? nullptr : m.find(p.answer_argument);
  if (!answer_match) return std::nullopt;

  // Each question slot holds the words replacing it; nullopt keeps the original.
  std::vector<std::optional<std::vector<std::string>>> slots(q.size());
  std::vector<std::pair<std::size_t, std::size_t>> trace;
  std::vector<std::string> answer;

  const bool chunked = m.strategy == MatchStrategy::SubtreeFlex || m.strategy == MatchStrategy::Argument;

  if (!chunked) {
    std::map<std::size_t, std::size_t> to_new;
    for (const auto& am : m.arguments)
      for (const auto& [from, to] : am.pairs) to_new[from] = to;
    for (std::size_t i = 0; i < q.size(); ++i) {
      const auto j = p.alignment.sentence_index_of(i);
      if (!j || *j == p.pa.predicate_index) continue;
      auto it = to_new.find(*j);
      if (it == to_new.end()) continue;
      slots[i] = std::vector<std::string>{placed_surface(s.tokens[it->second])};
      trace.emplace_back(i, it->second);
    }
    for (std::size_t k = 0; k < p.answer.size(); ++k) {
      const auto j = p.alignment.sentence_index_of(q.size() + k);
      auto it = j ? to_new.find(*j) : to_new.end();
      answer.push_back(it == to_new.end() ? p.answer[k].surface : s.tokens[it->second].surface);
    }
  } else {
    std::vector<bool> taken(q.size(), false);
    for (const auto& am : m.arguments) {
      if (am.chunk.empty()) return std::nullopt;
      const auto* parg = p.pa.find(am.label);
      if (am.label == p.answer_argument) {
        for (auto t : am.chunk) answer.push_back(s.tokens[t].surface);
        continue;
      }
      std::vector<std::size_t> region;
      for (std::size_t i = 0; i < q.size(); ++i) {
        const auto j = p.alignment.sentence_index_of(i);
        if (j && parg->contains(*j)) region.push_back(i);
      }
      if (region.empty()) continue;
      std::set<std::string> arg_words;
      for (auto t : parg->tokens) arg_words.insert(to_lower(p.sentence.tokens[t].surface));
      auto absorbable = [&](std::size_t i) {
        return i != p.wh_index && !taken[i] && !p.alignment.sentence_index_of(i) &&
               (q[i].is_stopword || stopwords.contains(q[i].surface)) &&
               arg_words.count(to_lower(q[i].surface)) > 0;
      };
      std::size_t lo = region.front();
      std::size_t hi = region.back();
      while (lo > 0 && absorbable(lo - 1)) region.push_back(--lo);
      while (hi + 1 < q.size() && absorbable(hi + 1)) region.push_back(++hi);
      std::sort(region.begin(), region.end());
      std::vector<std::string> words;
      for (auto t : am.chunk) {
        words.push_back(placed_surface(s.tokens[t]));
        trace.emplace_back(region.front(), t);
      }
      slots[region.front()] = std::move(words);
      taken[region.front()] = true;
      for (std::size_t r = 1; r < region.size(); ++r) {
        slots[region[r]] = std::vector<std::string>{};
        taken[region[r]] = true;
      }
    }
  }
  if (answer.empty()) return std::nullopt;

  if (auto qv = p.alignment.qa_index_of(p.pa.predicate_index); qv && *qv < q.size()) {
    const auto vr = rewrite_verb(p, s, m.predicate_index, *qv, lexicon);
    slots[*qv] = std::vector<std::string>{vr.verb_text};
    trace.emplace_back(*qv, m.predicate_index);
    if (vr.aux) slots[*vr.aux] = std::vector<std::string>{vr.aux_text};
  }

  GeneratedQuestion g;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (slots[i]) {
      g.text.insert(g.text.end(), slots[i]->begin(), slots[i]->end());
    } else {
      g.text.push_back(q[i].surface);
    }
  }
  if (g.text.empty()) return std::nullopt;
  g.text.front() = capitalize(g.text.front());
  g.answer_text = std::move(answer);
  g.pattern_id = p.id;
  g.strategy = m.strategy;
  g.source_sentence_id = s.id;
  g.frame_index = m.frame_index;
  std::sort(trace.begin(), trace.end());
  g.alignment_trace = std::move(trace);
  g.rank_score = p.weight.w;
  return g;
}

char strategy_code(MatchStrategy s) {
  switch (s) {
    case MatchStrategy::Strict: return 's';
    case MatchStrategy::Subtree: return 't';
    case MatchStrategy::SubtreeFlex: return 'f';
    case MatchStrategy::Argument: return 'a';
  }
  return '?';
}

}  // namespace

std::string to_string(MatchStrategy s) {
  switch (s) {
    case MatchStrategy::Strict: return "strict";
    case MatchStrategy::Subtree: return "subtree";
    case MatchStrategy::SubtreeFlex: return "subtree_flex";
    case MatchStrategy::Argument: return "argument";
  }
  return "unknown";
}

MatchStrategy strategy_from_string(const std::string& s) {
  for (auto m : all_strategies())
    if (to_string(m) == s) return m;
  throw std::invalid_argument("unknown match strategy '" + s + "'");
}

const ArgumentMatch* MatchBundle::find(const std::string& label) const {
  for (const auto& a : arguments)
    if (a.label == label) return &a;
  return nullptr;
}

ArgumentMatch match_argument(const ArgumentStructure& pattern_arg, const ArgumentStructure& candidate_arg) {
  ArgumentMatch m;
  m.label = pattern_arg.label;
  m.chunk = candidate_arg.tokens;
  return m;
}

std::optional<MatchBundle> pa_matches(const Pattern& p, const PredicateArgument& candidate,
                                      const AnnotatedSentence& s, MatchStrategy strategy,
                                      const Equivalence& equiv_in) {
  const auto equiv = equiv_in.with_mode(EquivMode::Generation);
  if (equiv(p.pa.predicate, candidate.predicate) <= 0.0) return std::nullopt;

  for (const auto& a : p.pa.arguments)
    if (!candidate.find(a.label)) return std::nullopt;

  if (!p.answer_argument.empty()) {
    const auto* pa = p.pa.find(p.answer_argument);
    const auto* ca = candidate.find(p.answer_argument);
    const auto pt = first_ne_type(p.sentence.tokens, pa->tokens);
    const auto ct = first_ne_type(s.tokens, ca->tokens);
    if (pt && ct && *pt != *ct) return std::nullopt;
  }

  MatchBundle out;
  out.strategy = strategy;
  out.frame_index = candidate.frame_index;
  out.predicate_index = candidate.predicate_index;
  bool deps = true;
  for (const auto& a : p.pa.arguments) {
    const auto* ca = candidate.find(a.label);
    auto m = match_one(a, *ca, p.sentence.tokens, s.tokens, strategy, equiv);
    if (!m) return std::nullopt;
    deps = deps && dependencies_subset(a, *ca);
    out.arguments.push_back(std::move(*m));
  }
  out.dependencies_match = deps;
  return out;
}

Tense verb_tense(const AnnotatedSentence& s, std::size_t index) {
  const Token& v = s.tokens.at(index);
  if (auto t = tag_tense(v.pos); t != Tense::Unknown) return t;
  if (v.pos == "MD") return aux_tense(v) == Tense::Future ? Tense::Future : Tense::Unknown;

  std::vector<std::size_t> auxes;
  for (const auto& e : s.dependencies)
    if (e.head == index && (e.relation == "aux" || e.relation == "auxpass") && e.dependent < index)
      auxes.push_back(e.dependent);
  if (auxes.empty()) {
    for (std::size_t i = index; i-- > 0;) {
      const Token& t = s.tokens[i];
      if (t.pos.rfind("RB", 0) == 0) continue;
      if (!is_aux_word(t)) break;
      auxes.push_back(i);
    }
  }
  std::sort(auxes.begin(), auxes.end());
  // The leftmost auxiliary carries the finite tense ("will have been", "had been").
  for (auto i : auxes) {
    const Token& t = s.tokens[i];
    if (t.pos == "MD" && aux_tense(t) != Tense::Future) return Tense::Unknown;
    if (auto tense = aux_tense(t); tense != Tense::Unknown) return tense;
  }
  return Tense::Unknown;
}

std::vector<GeneratedQuestion> generate(const Pattern& p, const AnnotatedSentence& s,
                                        const std::vector<MatchStrategy>& strategies, const Equivalence& equiv) {
  return generate(p, s, extract_predicate_arguments(s), strategies, equiv);
}

std::vector<GeneratedQuestion> generate(const Pattern& p, const AnnotatedSentence& s,
                                        const ExtractionResult& extracted,
                                        const std::vector<MatchStrategy>& strategies, const Equivalence& equiv) {
  std::vector<GeneratedQuestion> out;
  std::set<std::string> seen;
  std::vector<MatchStrategy> ordered;
  for (auto st : all_strategies())
    if (std::find(strategies.begin(), strategies.end(), st) != strategies.end()) ordered.push_back(st);

  const auto& lexicon = equiv.resources().verbs;
  const auto& stopwords = equiv.resources().stopwords;
  for (const auto& cand : extracted.structures) {
    for (auto st : ordered) {
      auto m = pa_matches(p, cand, s, st, equiv);
      if (!m) continue;
      auto g = realize(p, s, *m, lexicon, stopwords);
      if (!g) continue;
      if (!seen.insert(g->question_string()).second) continue;
      g->id = s.id + "-" + p.content_hash + "-" + std::to_string(cand.frame_index) + strategy_code(st);
      out.push_back(std::move(*g));
    }
  }
  return out;
}

std::vector<GeneratedQuestion> generate_batch(const std::vector<Pattern>& pool,
                                              const std::vector<AnnotatedSentence>& sentences,
                                              const std::vector<MatchStrategy>& strategies,
                                              const Equivalence& equiv) {
  std::vector<GeneratedQuestion> out;
  for (const auto& s : sentences) {
    const auto extracted = extract_predicate_arguments(s);
    for (const auto& p : pool) {
      auto qs = generate(p, s, extracted, strategies, equiv);
      out.insert(out.end(), std::make_move_iterator(qs.begin()), std::make_move_iterator(qs.end()));
    }
  }
  return out;
}

}  // namespace gen
