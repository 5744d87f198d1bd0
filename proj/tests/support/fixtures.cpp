#include "fixtures.hpp"

#include <atomic>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unistd.h>

#include "gen/json_io.hpp"

namespace fixtures {

namespace fs = std::filesystem;
using gen::AnnotatedSentence;
using gen::ConstituencyNode;
using gen::Token;
using gen::TokenSpan;

namespace {

std::vector<std::string> lex(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == '(' || c == ')' || std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) out.push_back(cur), cur.clear();
      if (c == '(' || c == ')') out.emplace_back(1, c);
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string part;
  std::istringstream is(s);
  while (std::getline(is, part, sep)) out.push_back(part);
  return out;
}

Token make_token(std::size_t index, const std::string& item, const std::string& pos) {
  const auto parts = split(item, '/');
  Token t;
  t.index = index;
  t.surface = parts.at(0);
  for (auto& c : t.surface)
    if (c == '_') c = ' ';
  t.pos = pos;
  t.lemma = parts.size() > 1 && !parts[1].empty() ? parts[1] : gen::to_lower(t.surface);
  if (parts.size() > 2 && !parts[2].empty()) t.ne_type = parts[2];
  t.is_stopword = gen::Stopwords::defaults().contains(t.surface);
  static const std::map<std::string, std::vector<std::string>> synsets = {
      {"cat", {"cat.n.01"}}, {"dog", {"dog.n.01"}}, {"feline", {"feline.n.01"}}};
  if (auto it = synsets.find(t.lemma); it != synsets.end()) t.synset_ids = it->second;
  return t;
}

ConstituencyNode parse_node(const std::vector<std::string>& toks, std::size_t& pos, std::vector<Token>& out) {
  if (toks.at(pos) != "(") throw std::runtime_error("expected '(' in fixture tree");
  ++pos;
  ConstituencyNode n;
  n.label = toks.at(pos++);
  if (toks.at(pos) != "(") {
    out.push_back(make_token(out.size(), toks.at(pos++), n.label));
    n.token_index = out.size() - 1;
  } else {
    while (toks.at(pos) == "(") n.children.push_back(parse_node(toks, pos, out));
  }
  if (toks.at(pos) != ")") throw std::runtime_error("expected ')' in fixture tree");
  ++pos;
  return n;
}

void write(const fs::path& p, const std::string& text) {
  std::ofstream os(p, std::ios::binary);
  os << text;
}

const char* const kSenses =
    "Creating\tcreate invent\n"
    "Achieving_first\tinvent discover\n"
    "Becoming_aware\tdiscover notice\n"
    "Perception_active\tnotice observe\n"
    "Building\tmake build\n"
    "Cooking_creation\tbake cook\n"
    "Killing\tkill assassinate\n"
    "Being_located\tlocate situate\n"
    "Giving_birth\tbear\n"
    "Removing\ttake remove\n";

const char* const kSynsets =
    "cat.n.01\tfeline.n.01\n"
    "feline.n.01\tcarnivore.n.01\n"
    "dog.n.01\tcanine.n.02\n"
    "canine.n.02\tcarnivore.n.01\n"
    "carnivore.n.01\tplacental.n.01\n"
    "placental.n.01\tmammal.n.01\n"
    "mammal.n.01\tanimal.n.01\n"
    "animal.n.01\torganism.n.01\n"
    "organism.n.01\tentity.n.01\n"
    "#blocklist:\n"
    "entity.n.01\n"
    "organism.n.01\n";

const char* const kEmbeddings =
    "12 8\n"
    "cat 0.9 0.1 0.3 0.0 0.2 0.1 0.0 0.4\n"
    "dog 0.5 0.6 0.0 0.3 0.1 0.2 0.5 0.1\n"
    "feline 0.8 0.2 0.4 0.1 0.2 0.0 0.1 0.3\n"
    "telephone 0.0 0.1 0.9 0.7 0.0 0.3 0.2 0.0\n"
    "radio 0.1 0.0 0.8 0.8 0.1 0.2 0.3 0.1\n"
    "comet 0.2 0.0 0.1 0.0 0.9 0.6 0.0 0.2\n"
    "who 0.3 0.3 0.3 0.3 0.3 0.3 0.3 0.3\n"
    "discovered 0.1 0.8 0.2 0.1 0.3 0.0 0.6 0.1\n"
    "invented 0.2 0.7 0.3 0.2 0.2 0.1 0.5 0.0\n"
    "the 0.1 0.1 0.1 0.1 0.1 0.1 0.1 0.1\n"
    "route 0.0 0.3 0.0 0.6 0.4 0.1 0.2 0.7\n"
    "sea 0.1 0.2 0.0 0.5 0.6 0.2 0.1 0.6\n";

const char* const kNeRules =
    "Person\ttoken_subsequence\n"
    "Organization\ttoken_subsequence\n"
    "Location\ttoken_subsequence\n"
    "Date\tdate_fields\n";

const char* const kVerbs =
    "be\twas\tbeen\tis\tbeing\n"
    "bear\tbore\tborn\tbears\tbearing\n"
    "take\ttook\ttaken\ttakes\ttaking\n"
    "make\tmade\tmade\tmakes\tmaking\n"
    "build\tbuilt\tbuilt\tbuilds\tbuilding\n"
    "find\tfound\tfound\tfinds\tfinding\n";

}  // namespace

AnnotatedSentence sentence(const std::string& id, const std::string& bracketed, const std::vector<FrameSpec>& frames) {
  AnnotatedSentence s;
  s.id = id;
  const auto toks = lex(bracketed);
  std::size_t pos = 0;
  s.constituency = parse_node(toks, pos, s.tokens);
  for (const auto& f : frames) {
    gen::SrlFrame frame;
    frame.predicate_index = f.predicate;
    for (const auto& [label, span] : f.args) frame.arguments.push_back({label, {span}});
    s.srl_frames.push_back(frame);
  }
  gen::validate(s);
  return s;
}

std::vector<Token> tokens(const std::string& spec) {
  std::vector<Token> out;
  std::istringstream is(spec);
  std::string item;
  while (is >> item) {
    const auto slash = item.find('/');
    if (slash == std::string::npos) throw std::runtime_error("token needs surface/POS: " + item);
    const auto rest = item.substr(slash + 1);
    const auto next = rest.find('/');
    const auto pos = rest.substr(0, next);
    std::string shaped = item.substr(0, slash);
    if (next != std::string::npos) shaped += rest.substr(next);
    out.push_back(make_token(out.size(), shaped, pos));
  }
  return out;
}

gen::Seed seed(const std::string& id, const AnnotatedSentence& s, const std::string& question, TokenSpan answer) {
  gen::Seed out;
  out.id = id;
  out.sentence = s;
  out.question = tokens(question);
  out.answer_span = answer;
  for (std::size_t i = answer.start; i <= answer.end; ++i) out.answer.push_back(s.tokens[i]);
  for (std::size_t i = 0; i < out.answer.size(); ++i) out.answer[i].index = i;
  gen::validate(out);
  return out;
}

fs::path temp_dir(const std::string& tag) {
  static std::atomic<int> counter{0};
  auto dir = fs::temp_directory_path() /
             ("gen-test-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

const fs::path& resource_dir() {
  static const fs::path dir = [] {
    auto d = temp_dir("resources");
    write(d / "senses.tsv", kSenses);
    write(d / "synsets.tsv", kSynsets);
    write(d / "embeddings.txt", kEmbeddings);
    write(d / "ne_rules.tsv", kNeRules);
    write(d / "verbs.tsv", kVerbs);
    return d;
  }();
  return dir;
}

const gen::ResourceBundle& resources() {
  static const gen::ResourceBundle bundle = gen::ResourceBundle::load_directory(resource_dir());
  return bundle;
}

gen::Seed telephone_seed() {
  const auto s = sentence(
      "telephone",
      "(S (NP (NNP Alexander_Graham_Bell//Person)) (VP (VBZ is/be) (VP (VBN credited/credit)"
      " (PP (IN with) (S (VP (VBG inventing/invent) (NP (DT the) (NN telephone))))))))",
      {{2, {{"A1", {0, 0}}, {"A2", {3, 6}}}}, {4, {{"A0", {0, 0}}, {"A1", {5, 6}}}}});
  return seed("telephone", s, "Who/WP created/VBD/create the/DT telephone/NN ?/.", {0, 0});
}

AnnotatedSentence vasco_sentence() {
  return sentence("vasco",
                  "(S (NP (NNP Vasco_Da_Gama//Person)) (VP (VBD discovered/discover)"
                  " (NP (NP (DT the) (NN sea) (NN route)) (PP (TO to) (NP (NNP India//Location))))))",
                  {{1, {{"A0", {0, 0}}, {"A1", {2, 6}}}}});
}

std::vector<gen::Seed> bootstrap_seeds() {
  std::vector<gen::Seed> out;
  out.push_back(seed("leonardo",
                     sentence("leonardo",
                              "(S (NP (NNP Leonardo_da_Vinci//Person)) (VP (VBD was/be) (VP (VBN born/bear)"
                              " (PP (IN on) (NP (NNP April_15,_1452//Date))))) (. .))",
                              {{2, {{"A1", {0, 0}}, {"AM-TMP", {3, 4}}}}}),
                     "When/WRB was/VBD/be Leonardo_da_Vinci/NNP//Person born/VBN/bear ?/.", {4, 4}));
  out.push_back(seed("oswald",
                     sentence("oswald",
                              "(S (NP (NNP Lee_Harvey_Oswald//Person)) (VP (VBD was/be) (VP (VBN assassinated/assassinate)"
                              " (PP (IN by) (NP (NNP Jack_Ruby//Person))))) (. .))",
                              {{2, {{"A1", {0, 0}}, {"A0", {3, 4}}}}}),
                     "Who/WP killed/VBD/kill Lee_Harvey_Oswald/NNP//Person ?/.", {4, 4}));
  out.push_back(seed("paris",
                     sentence("paris",
                              "(S (NP (NNP Paris//Location)) (VP (VBZ is/be) (VP (VBN located/locate)"
                              " (PP (IN in) (NP (NNP France//Location))))) (. .))",
                              {{2, {{"A1", {0, 0}}, {"AM-LOC", {3, 4}}}}}),
                     "Where/WRB is/VBZ/be Paris/NNP//Location located/VBN/locate ?/.", {4, 4}));
  out.push_back(seed("porto",
                     sentence("porto",
                              "(S (NP (NNP Porto//Location)) (VP (VBZ is/be) (VP (VBN located/locate)"
                              " (NP (CD 313) (NNS km)) (PP (IN from) (NP (NNP Lisbon//Location))))) (. .))",
                              {{2, {{"A1", {0, 0}}, {"AM-EXT", {3, 4}}, {"AM-DIR", {5, 6}}}}}),
                     "How/WRB far/RB is/VBZ/be Lisbon/NNP//Location from/IN Porto/NNP//Location ?/.", {3, 4}));
  out.push_back(seed("bob",
                     sentence("bob",
                              "(S (NP (NN Yesterday)) (, ,) (NP (NNP Bob//Person)) (VP (VBD took/take) (NP (NN butter))"
                              " (PP (IN from) (NP (DT the) (NN fridge)))) (. .))",
                              {{3, {{"AM-TMP", {0, 0}}, {"A0", {2, 2}}, {"A1", {4, 4}}, {"A2", {5, 7}}}}}),
                     "Where/WRB did/VBD/do Bob/NNP//Person take/VB butter/NN from/IN ?/.", {6, 7}));
  out.push_back(seed("john",
                     sentence("john",
                              "(S (NP (NNP John//Person)) (VP (VBD baked/bake) (NP (NNS cookies/cookie))"
                              " (PP (IN in) (NP (DT the) (NN oven)))) (. .))",
                              {{1, {{"A0", {0, 0}}, {"A1", {2, 2}}, {"AM-LOC", {3, 5}}}}}),
                     "What/WP did/VBD/do John/NNP//Person bake/VB in/IN the/DT oven/NN ?/.", {2, 2}));
  out.push_back(seed("cooking",
                     sentence("cooking",
                              "(S (NP (NN Cooking/cooking)) (VP (VBZ is/be) (NP (NP (DT the) (NN art) (, ,) (NN technology)"
                              " (, ,) (NN science) (CC and) (NN craft)) (PP (IN of) (S (VP (VBG preparing/prepare)"
                              " (NP (NN food)) (PP (IN for) (NP (NN consumption)))))))) (. .))",
                              {{1, {{"A1", {0, 0}}, {"A2", {2, 14}}}}, {11, {{"A1", {12, 12}}, {"AM-PNC", {13, 14}}}}}),
                     "What/WP is/VBZ/be cooking/NN ?/.", {2, 14}));
  out.push_back(seed("science",
                     sentence("science",
                              "(S (NP (NN Science/science)) (VP (VBZ is/be) (NP (NP (DT a) (JJ systematic) (NN enterprise))"
                              " (SBAR (WHNP (WDT that)) (S (VP (VP (VBZ builds/build)) (CC and) (VP (VBZ organizes/organize))"
                              " (NP (NP (NN knowledge)) (PP (IN in) (NP (NP (DT the) (NN form)) (PP (IN of) (NP (JJ testable)"
                              " (NNS explanations/explanation) (CC and) (NNS predictions/prediction))))) (PP (IN about)"
                              " (NP (DT the) (NN universe))))))))) (. .))",
                              {{1, {{"A1", {0, 0}}, {"A2", {2, 20}}}},
                               {6, {{"A0", {2, 4}}, {"R-A0", {5, 5}}, {"A1", {9, 20}}}},
                               {8, {{"A0", {2, 4}}, {"R-A0", {5, 5}}, {"A1", {9, 20}}}}}),
                     "What/WP is/VBZ/be a/DT systematic/JJ enterprise/NN that/WDT builds/VBZ/build and/CC"
                     " organizes/VBZ/organize knowledge/NN in/IN the/DT form/NN of/IN testable/JJ"
                     " explanations/NNS/explanation and/CC predictions/NNS/prediction about/IN the/DT universe/NN ?/.",
                     {0, 0}));
  return out;
}

std::vector<AnnotatedSentence> bootstrap_corpus() {
  return {
      vasco_sentence(),
      sentence("marconi",
               "(S (NP (NNP Guglielmo_Marconi//Person)) (VP (VBD invented/invent) (NP (DT the) (NN radio))) (. .))",
               {{1, {{"A0", {0, 0}}, {"A1", {2, 3}}}}}),
      sentence("kennedy",
               "(S (NP (NNP John_F._Kennedy//Person)) (VP (VBD was/be) (VP (VBN assassinated/assassinate)"
               " (PP (IN by) (NP (NNP Lee_Harvey_Oswald//Person))))) (. .))",
               {{2, {{"A1", {0, 0}}, {"A0", {3, 4}}}}}),
      sentence("lisbon",
               "(S (NP (NNP Lisbon//Location)) (VP (VBZ is/be) (VP (VBN situated/situate)"
               " (PP (IN in) (NP (NNP Portugal//Location))))) (. .))",
               {{2, {{"A1", {0, 0}}, {"AM-LOC", {3, 4}}}}}),
      sentence("camoes",
               "(S (NP (NNP Luis_de_Camoes//Person)) (VP (VBD was/be) (VP (VBN born/bear)"
               " (PP (IN in) (NP (NNP 1524//Date))))) (. .))",
               {{2, {{"A1", {0, 0}}, {"AM-TMP", {3, 4}}}}}),
      sentence("mary",
               "(S (NP (NNP Mary//Person)) (VP (VBD cooked/cook) (NP (NN rice))"
               " (PP (IN in) (NP (DT the) (NN pot)))) (. .))",
               {{1, {{"A0", {0, 0}}, {"A1", {2, 2}}, {"AM-LOC", {3, 5}}}}}),
  };
}

Synthetic synthetic(std::size_t n) {
  static const char* const people[] = {
      "Ada_Lovelace", "Johann_Galle",   "Edwin_Hubble",  "Marie_Curie",    "Tycho_Brahe",  "Caroline_Herschel",
      "Henrietta_Leavitt", "Clyde_Tombaugh", "Vera_Rubin", "Jocelyn_Bell", "Annie_Cannon", "Carl_Sagan",
      "Fred_Hoyle",   "Cecilia_Payne",  "Subrahmanyan_Chandrasekhar", "Gerard_Kuiper", "Jan_Oort", "Maria_Mitchell",
      "Percival_Lowell", "Williamina_Fleming", "Nancy_Roman", "Frank_Drake", "Alan_Stern", "Mike_Brown",
      "David_Jewitt", "Jane_Luu", "Carolyn_Shoemaker", "Eugene_Shoemaker", "David_Levy", "Robert_McNaught"};
  static const char* const objects[] = {
      "comet",   "nebula",  "quasar",   "pulsar",  "asteroid", "galaxy",  "moon",    "crater",  "cluster", "planet",
      "star",    "ring",    "binary",   "flare",   "jet",      "void",    "halo",    "filament", "dwarf",  "supernova",
      "meteor",  "eclipse", "aurora",   "transit", "corona",   "belt",    "cloud",   "storm",   "spot",    "wave"};
  static const char* const verbs[3][2] = {{"discovered", "discover"}, {"noticed", "notice"}, {"observed", "observe"}};
  Synthetic out;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& v = verbs[i % 3];
    const std::string person = people[i % 30];
    const std::string object = objects[i % 30];
    const std::string id = "syn" + std::to_string(i + 1);
    out.corpus.push_back(sentence(id,
                                  "(S (NP (NNP " + person + "//Person)) (VP (VBD " + v[0] + "/" + v[1] +
                                      ") (NP (DT the) (NN " + object + "))) (. .))",
                                  {{1, {{"A0", {0, 0}}, {"A1", {2, 3}}}}}));
    out.reference[id] = {gen::tokenize("Who " + std::string(v[0]) + " the " + object + " ?")};
  }
  const auto bell = sentence("bell",
                             "(S (NP (NNP Bell//Person)) (VP (VBD invented/invent) (NP (DT the) (NN telephone))) (. .))",
                             {{1, {{"A0", {0, 0}}, {"A1", {2, 3}}}}});
  out.seeds.push_back(seed("good", bell, "Who/WP invented/VBD/invent the/DT telephone/NN ?/.", {0, 0}));
  out.seeds.push_back(seed("bad", bell, "Who/WP did/VBD/do invent/VB the/DT telephone/NN ?/.", {0, 0}));
  return out;
}

void write_files(const fs::path& dir, const std::vector<AnnotatedSentence>& corpus,
                 const std::vector<gen::Seed>& seeds, const gen::Reference& reference) {
  fs::create_directories(dir / "resources");
  gen::write_text_file(dir / "corpus.json", gen::dump_corpus(corpus));
  gen::write_text_file(dir / "seeds.json", gen::dump_seeds(seeds));
  gen::write_text_file(dir / "reference.json", gen::dump_reference(reference));
  for (const auto& f : fs::directory_iterator(resource_dir()))
    fs::copy_file(f.path(), dir / "resources" / f.path().filename(), fs::copy_options::overwrite_existing);
}

}  // namespace fixtures
