#include "gen/similarity.hpp"

#include <algorithm>
#include <sstream>

namespace gen {

void validate(const EquivConfig& cfg) {
  if (cfg.enabled.empty()) throw std::invalid_argument("EquivConfig: no equivalence function enabled");
  if (cfg.w2v_floor < 0.0 || cfg.w2v_floor > 1.0) {
    throw std::invalid_argument("EquivConfig: w2v_floor must lie in [0, 1]");
  }
}

double equiv_lexical(const Token& a, const Token& b) {
  if (to_lower(a.surface) == to_lower(b.surface)) return kLexicalExact;
  if (!a.lemma.empty() && to_lower(a.lemma) == to_lower(b.lemma)) return kLexicalLemma;
  return 0.0;
}

double equiv_verbsense(const SenseInventory& inv, const Token& a, const Token& b) {
  if (!a.is_verb() || !b.is_verb()) return 0.0;
  auto senses = [&inv](const Token& t) {
    std::set<std::string> s(t.verb_sense_ids.begin(), t.verb_sense_ids.end());
    const auto& cls = inv.classes_of(t.lemma.empty() ? t.surface : t.lemma);
    s.insert(cls.begin(), cls.end());
    return s;
  };
  const auto sa = senses(a);
  const auto sb = senses(b);
  for (const auto& s : sa)
    if (sb.count(s)) return kVerbSense;
  return 0.0;
}

double equiv_ne(const NeInclusionRules& rules, const Token& a, const Token& b, EquivMode mode) {
  if (!a.is_named_entity() || !b.is_named_entity() || *a.ne_type != *b.ne_type) return 0.0;
  if (mode == EquivMode::Generation) return 1.0;
  if (to_lower(a.surface) == to_lower(b.surface)) return 1.0;
  if (rules.includes(a.surface, b.surface, *a.ne_type)) return kNamedEntityIncludes;
  return 0.0;
}

double equiv_wordnet(const SynsetGraph& graph, const Token& a, const Token& b, int hop_cap) {
  if (a.synset_ids.empty() || b.synset_ids.empty()) return 0.0;
  for (const auto& s : a.synset_ids)
    if (std::find(b.synset_ids.begin(), b.synset_ids.end(), s) != b.synset_ids.end()) return 1.0;

  auto known = [&graph](const std::vector<std::string>& ids) {
    std::vector<std::string> out;
    for (const auto& id : ids)
      if (graph.contains(id)) out.push_back(id);
    return out;
  };
  const auto ka = known(a.synset_ids);
  const auto kb = known(b.synset_ids);
  if (ka.empty() || kb.empty()) return 0.0;
  const auto hops = graph.least_common_subsumer(ka, kb, hop_cap);
  if (!hops) return 0.0;
  const double x = 1.0 - std::max(hops->from_a * kWordNetHopPenalty, hops->from_b * kWordNetHopPenalty);
  return std::max(0.0, x);
}

std::optional<std::vector<double>> token_vector(const EmbeddingTable& table, const Token& t) {
  if (table.empty()) return std::nullopt;
  if (t.embedding_key) {
    if (const auto* v = table.find(*t.embedding_key)) return *v;
  }
  std::istringstream is(t.surface);
  std::string word;
  std::vector<double> sum(table.dim(), 0.0);
  bool found = false;
  while (is >> word) {
    if (const auto* v = table.find(word)) {
      for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += (*v)[i];
      found = true;
    }
  }
  if (!found) return std::nullopt;
  return sum;
}

double equiv_w2v(const EmbeddingTable& table, const Token& a, const Token& b) {
  const auto va = token_vector(table, a);
  const auto vb = token_vector(table, b);
  if (!va || !vb) return 0.0;
  return cosine(*va, *vb);
}

Equivalence::Equivalence(const ResourceBundle& resources, EquivConfig cfg)
    : resources_(&resources), cfg_(std::move(cfg)) {
  validate(cfg_);
}

Equivalence Equivalence::with_mode(EquivMode mode) const {
  auto cfg = cfg_;
  cfg.mode = mode;
  return Equivalence(*resources_, cfg);
}

double Equivalence::operator()(const Token& a, const Token& b) const {
  double best = 0.0;
  for (auto f : cfg_.enabled) {
    double s = 0.0;
    switch (f) {
      case EquivFunction::Lexical:
        s = equiv_lexical(a, b);
        break;
      case EquivFunction::VerbSense:
        s = equiv_verbsense(resources_->senses, a, b);
        break;
      case EquivFunction::NamedEntity:
        s = equiv_ne(resources_->ne_rules, a, b, cfg_.mode);
        break;
      case EquivFunction::WordNet:
        s = equiv_wordnet(resources_->synsets, a, b);
        break;
      case EquivFunction::Embedding:
        s = equiv_w2v(resources_->embeddings, a, b);
        s = s < cfg_.w2v_floor ? 0.0 : std::min(s, 1.0);
        break;
    }
    best = std::max(best, s);
    if (best >= 1.0) break;
  }
  return std::clamp(best, 0.0, 1.0);
}

}  // namespace gen
