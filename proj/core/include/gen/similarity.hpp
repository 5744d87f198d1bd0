#pragma once

// Token equivalence functions. Each returns a score in [0, 1] (cosine may be
// negative before composition); `equiv` takes the maximum over the enabled
// functions.

#include <set>

#include "gen/annotation.hpp"
#include "gen/resources.hpp"

namespace gen {

enum class EquivMode { Acquisition, Generation };

enum class EquivFunction { Lexical, VerbSense, NamedEntity, WordNet, Embedding };

struct EquivConfig {
  EquivMode mode = EquivMode::Acquisition;
  std::set<EquivFunction> enabled = {EquivFunction::Lexical, EquivFunction::VerbSense,
                                     EquivFunction::NamedEntity, EquivFunction::WordNet,
                                     EquivFunction::Embedding};
  double w2v_floor = 0.5;

  static EquivConfig acquisition() { return {}; }
  static EquivConfig generation() {
    EquivConfig c;
    c.mode = EquivMode::Generation;
    return c;
  }

  friend bool operator==(const EquivConfig&, const EquivConfig&) = default;
};

void validate(const EquivConfig& cfg);

inline constexpr double kLexicalExact = 1.0;
inline constexpr double kLexicalLemma = 0.75;
inline constexpr double kVerbSense = 0.75;
inline constexpr double kNamedEntityIncludes = 0.9;
inline constexpr double kWordNetHopPenalty = 0.1;

double equiv_lexical(const Token& a, const Token& b);
double equiv_verbsense(const SenseInventory& inv, const Token& a, const Token& b);
double equiv_ne(const NeInclusionRules& rules, const Token& a, const Token& b, EquivMode mode);
double equiv_wordnet(const SynsetGraph& graph, const Token& a, const Token& b,
                     int hop_cap = SynsetGraph::kDefaultHopCap);
double equiv_w2v(const EmbeddingTable& table, const Token& a, const Token& b);

// Vector for a token: its embedding key, else the sum of its surface words.
std::optional<std::vector<double>> token_vector(const EmbeddingTable& table, const Token& t);

// Composite score over the enabled functions.
class Equivalence {
 public:
  Equivalence(const ResourceBundle& resources, EquivConfig cfg);

  double operator()(const Token& a, const Token& b) const;
  const EquivConfig& config() const { return cfg_; }
  const ResourceBundle& resources() const { return *resources_; }
  Equivalence with_mode(EquivMode mode) const;

 private:
  const ResourceBundle* resources_;
  EquivConfig cfg_;
};

}  // namespace gen
