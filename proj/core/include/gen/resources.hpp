#pragma once

// Lexical resources behind the equivalence functions. Every resource is
// loaded once from a flat text file and is read-only afterwards.

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gen {

class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Verb-sense classes (frame / class names) mapped to their member lemmas.
// File: one line per class, `class_id<TAB>lemma1 lemma2 ...`.
class SenseInventory {
 public:
  SenseInventory() = default;
  explicit SenseInventory(std::map<std::string, std::set<std::string>> classes);

  static SenseInventory load(const std::filesystem::path& path);
  static SenseInventory parse(const std::string& text);

  const std::set<std::string>& classes_of(const std::string& lemma) const;
  const std::map<std::string, std::set<std::string>>& classes() const { return classes_; }
  bool empty() const { return classes_.empty(); }

 private:
  std::map<std::string, std::set<std::string>> classes_;
  std::map<std::string, std::set<std::string>> by_lemma_;
};

struct SubsumerHops {
  int from_a = 0;
  int from_b = 0;
  std::string subsumer;

  friend bool operator==(const SubsumerHops&, const SubsumerHops&) = default;
};

// Hypernym DAG over synset ids.
// File: `child<TAB>parent` lines; a `#blocklist:` line switches to one
// generic synset id per line.
class SynsetGraph {
 public:
  static constexpr int kDefaultHopCap = 5;

  SynsetGraph() = default;
  SynsetGraph(std::vector<std::pair<std::string, std::string>> edges, std::set<std::string> blocklist);

  static SynsetGraph load(const std::filesystem::path& path);
  static SynsetGraph parse(const std::string& text);

  bool contains(const std::string& id) const { return nodes_.count(id) > 0; }
  const std::set<std::string>& nodes() const { return nodes_; }
  const std::vector<std::string>& parents(const std::string& id) const;
  const std::set<std::string>& blocklist() const { return blocklist_; }

  // Upward hop pair to the least common subsumer minimizing max(n, m), then
  // n + m, then subsumer id. Blocklisted synsets never qualify. Throws
  // ResourceError on unknown ids.
  std::optional<SubsumerHops> least_common_subsumer(const std::vector<std::string>& a,
                                                    const std::vector<std::string>& b,
                                                    int hop_cap = kDefaultHopCap) const;

 private:
  std::map<std::string, int> upward_distances(const std::vector<std::string>& start, int cap) const;

  std::set<std::string> nodes_;
  std::map<std::string, std::vector<std::string>> parents_;
  std::set<std::string> blocklist_;
};

// Dense embedding vectors. File: header `count dim`, then `key v1 .. vdim`.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  EmbeddingTable(std::size_t dim, std::map<std::string, std::vector<double>> vectors);

  static EmbeddingTable load(const std::filesystem::path& path);
  static EmbeddingTable parse(const std::string& text);

  std::size_t dim() const { return dim_; }
  bool empty() const { return vectors_.empty(); }
  const std::vector<double>* find(const std::string& key) const;
  const std::map<std::string, std::vector<double>>& vectors() const { return vectors_; }

 private:
  std::size_t dim_ = 0;
  std::map<std::string, std::vector<double>> vectors_;
};

double cosine(const std::vector<double>& a, const std::vector<double>& b);

// Containment rules deciding whether two NE surfaces name the same entity.
enum class InclusionRule { TokenSubsequence, DateFields };

class NeInclusionRules {
 public:
  NeInclusionRules() = default;
  explicit NeInclusionRules(std::vector<std::pair<std::string, InclusionRule>> rules);

  // Person/Organization/Location: whitespace-token subsequence; Date: D/M/Y field subset.
  static NeInclusionRules defaults();
  // File: `ne_type<TAB>token_subsequence|date_fields` lines.
  static NeInclusionRules load(const std::filesystem::path& path);

  // Symmetric; false for unknown NE types.
  bool includes(const std::string& a, const std::string& b, const std::string& ne_type) const;

  const std::vector<std::pair<std::string, InclusionRule>>& rules() const { return rules_; }

 private:
  std::vector<std::pair<std::string, InclusionRule>> rules_;
};

// Date surfaces follow the collapsed `D01 M01 Y2014` form.
std::set<std::string> date_fields(const std::string& surface);

class Stopwords {
 public:
  Stopwords() = default;
  explicit Stopwords(std::set<std::string> words);

  static Stopwords load(const std::filesystem::path& path);
  static Stopwords defaults();

  bool contains(const std::string& word) const;
  std::size_t size() const { return words_.size(); }

 private:
  std::set<std::string> words_;
};

// Inflected forms used when re-conjugating question verbs.
// File: `lemma<TAB>past<TAB>participle<TAB>third_singular<TAB>gerund`.
struct VerbForms {
  std::string base;
  std::string past;
  std::string participle;
  std::string third_singular;
  std::string gerund;
};

class VerbLexicon {
 public:
  VerbLexicon() = default;
  explicit VerbLexicon(std::map<std::string, VerbForms> irregular);

  static VerbLexicon load(const std::filesystem::path& path);

  // Irregular table first, then regular English inflection.
  VerbForms forms(const std::string& lemma) const;

 private:
  std::map<std::string, VerbForms> forms_;
};

struct ResourceBundle {
  SenseInventory senses;
  SynsetGraph synsets;
  EmbeddingTable embeddings;
  NeInclusionRules ne_rules = NeInclusionRules::defaults();
  Stopwords stopwords = Stopwords::defaults();
  VerbLexicon verbs;

  // Loads whichever of senses.tsv, synsets.tsv, embeddings.txt, ne_rules.tsv,
  // stopwords.txt, verbs.tsv exist in `dir`.
  static ResourceBundle load_directory(const std::filesystem::path& dir);
};

}  // namespace gen
