#include "gen/resources.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <regex>
#include <sstream>

#include "gen/annotation.hpp"

namespace gen {

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ResourceError("cannot open resource file " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  std::string w;
  while (is >> w) out.push_back(w);
  return out;
}

std::vector<std::string> split_tab(const std::string& s) {
  std::vector<std::string> out;
  std::size_t b = 0;
  while (true) {
    auto e = s.find('\t', b);
    out.push_back(trim(s.substr(b, e == std::string::npos ? std::string::npos : e - b)));
    if (e == std::string::npos) break;
    b = e + 1;
  }
  return out;
}

bool token_subsequence(const std::vector<std::string>& small, const std::vector<std::string>& big) {
  if (small.empty() || small.size() > big.size()) return false;
  for (std::size_t i = 0; i + small.size() <= big.size(); ++i) {
    if (std::equal(small.begin(), small.end(), big.begin() + static_cast<std::ptrdiff_t>(i)))
      return true;
  }
  return false;
}

}  // namespace

// ---- SenseInventory --------------------------------------------------------

SenseInventory::SenseInventory(std::map<std::string, std::set<std::string>> classes)
    : classes_(std::move(classes)) {
  for (const auto& [cls, lemmas] : classes_)
    for (const auto& l : lemmas) by_lemma_[to_lower(l)].insert(cls);
}

SenseInventory SenseInventory::load(const std::filesystem::path& path) { return parse(read_file(path)); }

SenseInventory SenseInventory::parse(const std::string& text) {
  std::map<std::string, std::set<std::string>> classes;
  std::istringstream is(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw ResourceError("sense inventory line " + std::to_string(lineno) + ": expected class<TAB>lemmas");
    }
    auto cls = trim(line.substr(0, tab));
    for (auto& l : split_ws(line.substr(tab + 1))) classes[cls].insert(to_lower(l));
  }
  return SenseInventory(std::move(classes));
}

const std::set<std::string>& SenseInventory::classes_of(const std::string& lemma) const {
  static const std::set<std::string> kNone;
  auto it = by_lemma_.find(to_lower(lemma));
  return it == by_lemma_.end() ? kNone : it->second;
}

// ---- SynsetGraph -----------------------------------------------------------

SynsetGraph::SynsetGraph(std::vector<std::pair<std::string, std::string>> edges,
                         std::set<std::string> blocklist)
    : blocklist_(std::move(blocklist)) {
  for (auto& [child, parent] : edges) {
    if (child == parent) throw ResourceError("synset graph: self loop at " + child);
    nodes_.insert(child);
    nodes_.insert(parent);
    auto& ps = parents_[child];
    if (std::find(ps.begin(), ps.end(), parent) == ps.end()) ps.push_back(parent);
  }
  for (const auto& b : blocklist_) nodes_.insert(b);

  // Kahn-style acyclicity check over child -> parent edges.
  std::map<std::string, int> indegree;
  for (const auto& n : nodes_) indegree[n] = 0;
  for (const auto& [c, ps] : parents_)
    for (const auto& p : ps) ++indegree[p];
  std::deque<std::string> ready;
  for (const auto& [n, d] : indegree)
    if (d == 0) ready.push_back(n);
  std::size_t seen = 0;
  while (!ready.empty()) {
    auto n = ready.front();
    ready.pop_front();
    ++seen;
    auto it = parents_.find(n);
    if (it == parents_.end()) continue;
    for (const auto& p : it->second)
      if (--indegree[p] == 0) ready.push_back(p);
  }
  if (seen != nodes_.size()) throw ResourceError("synset graph contains a cycle");
}

SynsetGraph SynsetGraph::load(const std::filesystem::path& path) { return parse(read_file(path)); }

SynsetGraph SynsetGraph::parse(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> edges;
  std::set<std::string> blocklist;
  bool in_blocklist = false;
  std::istringstream is(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty()) continue;
    if (line.rfind("#blocklist:", 0) == 0) {
      in_blocklist = true;
      for (auto& w : split_ws(line.substr(11))) blocklist.insert(w);
      continue;
    }
    if (line[0] == '#') continue;
    if (in_blocklist) {
      blocklist.insert(line);
      continue;
    }
    auto cols = split_tab(line);
    if (cols.size() != 2 || cols[0].empty() || cols[1].empty()) {
      throw ResourceError("synset graph line " + std::to_string(lineno) + ": expected child<TAB>parent");
    }
    edges.emplace_back(cols[0], cols[1]);
  }
  return SynsetGraph(std::move(edges), std::move(blocklist));
}

const std::vector<std::string>& SynsetGraph::parents(const std::string& id) const {
  static const std::vector<std::string> kNone;
  auto it = parents_.find(id);
  return it == parents_.end() ? kNone : it->second;
}

std::map<std::string, int> SynsetGraph::upward_distances(const std::vector<std::string>& start,
                                                         int cap) const {
  std::map<std::string, int> dist;
  std::deque<std::string> queue;
  for (const auto& s : start) {
    if (!contains(s)) throw ResourceError("unknown synset id '" + s + "'");
    if (dist.emplace(s, 0).second) queue.push_back(s);
  }
  while (!queue.empty()) {
    auto n = queue.front();
    queue.pop_front();
    const int d = dist[n];
    if (d >= cap) continue;
    for (const auto& p : parents(n)) {
      if (dist.emplace(p, d + 1).second) queue.push_back(p);
    }
  }
  return dist;
}

std::optional<SubsumerHops> SynsetGraph::least_common_subsumer(const std::vector<std::string>& a,
                                                               const std::vector<std::string>& b,
                                                               int hop_cap) const {
  const auto da = upward_distances(a, hop_cap);
  const auto db = upward_distances(b, hop_cap);
  std::optional<SubsumerHops> best;
  for (const auto& [node, n] : da) {
    auto it = db.find(node);
    if (it == db.end() || blocklist_.count(node)) continue;
    const int m = it->second;
    const auto key = std::make_tuple(std::max(n, m), n + m, node);
    if (!best || key < std::make_tuple(std::max(best->from_a, best->from_b),
                                       best->from_a + best->from_b, best->subsumer)) {
      best = SubsumerHops{n, m, node};
    }
  }
  return best;
}

// ---- EmbeddingTable --------------------------------------------------------

EmbeddingTable::EmbeddingTable(std::size_t dim, std::map<std::string, std::vector<double>> vectors)
    : dim_(dim), vectors_(std::move(vectors)) {
  if (dim_ == 0 && !vectors_.empty()) throw ResourceError("embedding dimension must be positive");
  for (const auto& [key, v] : vectors_) {
    if (v.size() != dim_) throw ResourceError("embedding '" + key + "' has wrong dimension");
    for (double x : v)
      if (!std::isfinite(x)) throw ResourceError("embedding '" + key + "' has a non-finite component");
  }
}

EmbeddingTable EmbeddingTable::load(const std::filesystem::path& path) { return parse(read_file(path)); }

EmbeddingTable EmbeddingTable::parse(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line)) return {};
  auto header = split_ws(line);
  if (header.size() != 2) throw ResourceError("embedding header must be `count dim`");
  const auto count = std::stoul(header[0]);
  const auto dim = std::stoul(header[1]);
  std::map<std::string, std::vector<double>> vectors;
  while (std::getline(is, line)) {
    auto cols = split_ws(line);
    if (cols.empty()) continue;
    if (cols.size() != dim + 1) {
      throw ResourceError("embedding '" + cols[0] + "': expected " + std::to_string(dim) + " values");
    }
    std::vector<double> v;
    v.reserve(dim);
    for (std::size_t i = 1; i < cols.size(); ++i) v.push_back(std::stod(cols[i]));
    vectors[cols[0]] = std::move(v);
  }
  if (vectors.size() != count) {
    throw ResourceError("embedding file declares " + std::to_string(count) + " vectors, found " +
                        std::to_string(vectors.size()));
  }
  return EmbeddingTable(dim, std::move(vectors));
}

const std::vector<double>* EmbeddingTable::find(const std::string& key) const {
  auto it = vectors_.find(key);
  if (it != vectors_.end()) return &it->second;
  it = vectors_.find(to_lower(key));
  return it == vectors_.end() ? nullptr : &it->second;
}

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.empty()) return 0.0;
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

// ---- NeInclusionRules ------------------------------------------------------

NeInclusionRules::NeInclusionRules(std::vector<std::pair<std::string, InclusionRule>> rules)
    : rules_(std::move(rules)) {}

NeInclusionRules NeInclusionRules::defaults() {
  return NeInclusionRules({{"Person", InclusionRule::TokenSubsequence},
                           {"Organization", InclusionRule::TokenSubsequence},
                           {"Location", InclusionRule::TokenSubsequence},
                           {"Date", InclusionRule::DateFields}});
}

NeInclusionRules NeInclusionRules::load(const std::filesystem::path& path) {
  std::vector<std::pair<std::string, InclusionRule>> rules;
  std::istringstream is(read_file(path));
  std::string line;
  while (std::getline(is, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    auto cols = split_tab(line);
    if (cols.size() != 2) throw ResourceError("NE rule line must be ne_type<TAB>rule: " + line);
    if (cols[1] == "token_subsequence") {
      rules.emplace_back(cols[0], InclusionRule::TokenSubsequence);
    } else if (cols[1] == "date_fields") {
      rules.emplace_back(cols[0], InclusionRule::DateFields);
    } else {
      throw ResourceError("unknown NE inclusion rule '" + cols[1] + "'");
    }
  }
  return NeInclusionRules(std::move(rules));
}

std::set<std::string> date_fields(const std::string& surface) {
  static const std::regex kField(R"((?:^|\s)([DMY]\d+)(?=\s|$))");
  std::set<std::string> out;
  for (auto it = std::sregex_iterator(surface.begin(), surface.end(), kField); it != std::sregex_iterator();
       ++it) {
    out.insert((*it)[1].str());
  }
  return out;
}

bool NeInclusionRules::includes(const std::string& a, const std::string& b, const std::string& ne_type) const {
  for (const auto& [type, rule] : rules_) {
    if (type != ne_type) continue;
    switch (rule) {
      case InclusionRule::TokenSubsequence: {
        auto wa = split_ws(to_lower(a));
        auto wb = split_ws(to_lower(b));
        return token_subsequence(wa, wb) || token_subsequence(wb, wa);
      }
      case InclusionRule::DateFields: {
        auto fa = date_fields(a);
        auto fb = date_fields(b);
        if (fa.empty() || fb.empty()) return false;
        return std::includes(fa.begin(), fa.end(), fb.begin(), fb.end()) ||
               std::includes(fb.begin(), fb.end(), fa.begin(), fa.end());
      }
    }
  }
  return false;
}

// ---- Stopwords -------------------------------------------------------------

Stopwords::Stopwords(std::set<std::string> words) {
  for (const auto& w : words) words_.insert(to_lower(w));
}

Stopwords Stopwords::load(const std::filesystem::path& path) {
  std::set<std::string> words;
  std::istringstream is(read_file(path));
  std::string line;
  while (std::getline(is, line)) {
    line = trim(line);
    if (!line.empty() && line[0] != '#') words.insert(line);
  }
  return Stopwords(std::move(words));
}

Stopwords Stopwords::defaults() {
  return Stopwords({"a",     "an",    "the",   "is",    "was",   "were",  "are",   "am",    "be",
                    "been",  "being", "of",    "in",    "on",    "at",    "by",    "for",   "with",
                    "from",  "to",    "into",  "and",   "or",    "but",   "that",  "this",  "these",
                    "those", "it",    "its",   "as",    "do",    "does",  "did",   "has",   "have",
                    "had",   "will",  "would", "shall", "should", "can",  "could", "may",   "might",
                    "must",  "what",  "who",   "whom",  "whose", "which", "when",  "where", "why",
                    "how",   "there", "their", "they",  "he",    "she",   "his",   "her",   "we",
                    "?",     ".",     ",",     "!",     ";",     ":",     "'s",    "\"",    "(",
                    ")"});
}

bool Stopwords::contains(const std::string& word) const { return words_.count(to_lower(word)) > 0; }

// ---- VerbLexicon -----------------------------------------------------------

VerbLexicon::VerbLexicon(std::map<std::string, VerbForms> irregular) : forms_(std::move(irregular)) {}

VerbLexicon VerbLexicon::load(const std::filesystem::path& path) {
  std::map<std::string, VerbForms> forms;
  std::istringstream is(read_file(path));
  std::string line;
  while (std::getline(is, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    auto cols = split_tab(line);
    if (cols.size() != 5) throw ResourceError("verb lexicon line needs 5 columns: " + line);
    forms[cols[0]] = VerbForms{cols[0], cols[1], cols[2], cols[3], cols[4]};
  }
  return VerbLexicon(std::move(forms));
}

VerbForms VerbLexicon::forms(const std::string& lemma_in) const {
  const auto lemma = to_lower(lemma_in);
  if (auto it = forms_.find(lemma); it != forms_.end()) return it->second;

  auto is_vowel = [](char c) { return std::string_view("aeiou").find(c) != std::string_view::npos; };
  VerbForms f;
  f.base = lemma;
  if (lemma.empty()) return f;
  const char last = lemma.back();
  if (last == 'e') {
    f.past = lemma + "d";
    f.gerund = lemma.substr(0, lemma.size() - 1) + "ing";
  } else if (last == 'y' && lemma.size() > 1 && !is_vowel(lemma[lemma.size() - 2])) {
    f.past = lemma.substr(0, lemma.size() - 1) + "ied";
    f.gerund = lemma + "ing";
  } else {
    f.past = lemma + "ed";
    f.gerund = lemma + "ing";
  }
  f.participle = f.past;
  if (last == 's' || last == 'x' || last == 'z' || lemma.ends_with("ch") || lemma.ends_with("sh") ||
      last == 'o') {
    f.third_singular = lemma + "es";
  } else if (last == 'y' && lemma.size() > 1 && !is_vowel(lemma[lemma.size() - 2])) {
    f.third_singular = lemma.substr(0, lemma.size() - 1) + "ies";
  } else {
    f.third_singular = lemma + "s";
  }
  return f;
}

// ---- ResourceBundle --------------------------------------------------------

ResourceBundle ResourceBundle::load_directory(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw ResourceError("resource directory not found: " + dir.string());
  ResourceBundle r;
  if (fs::exists(dir / "senses.tsv")) r.senses = SenseInventory::load(dir / "senses.tsv");
  if (fs::exists(dir / "synsets.tsv")) r.synsets = SynsetGraph::load(dir / "synsets.tsv");
  if (fs::exists(dir / "embeddings.txt")) r.embeddings = EmbeddingTable::load(dir / "embeddings.txt");
  if (fs::exists(dir / "ne_rules.tsv")) r.ne_rules = NeInclusionRules::load(dir / "ne_rules.tsv");
  if (fs::exists(dir / "stopwords.txt")) r.stopwords = Stopwords::load(dir / "stopwords.txt");
  if (fs::exists(dir / "verbs.tsv")) r.verbs = VerbLexicon::load(dir / "verbs.tsv");
  return r;
}

}  // namespace gen
