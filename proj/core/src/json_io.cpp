#include "gen/json_io.hpp"

#include <fstream>
#include <sstream>

#include "json_codec.hpp"

namespace gen {

namespace {

template <typename T>
void put_optional(json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

template <typename T>
std::optional<T> get_optional(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return it->get<T>();
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  auto it = j.find(key);
  return it == j.end() || it->is_null() ? fallback : it->get<T>();
}

void check_version(const json& j, const std::string& what) {
  if (!j.is_object()) throw ValidationError(what, "", "top-level value must be an object");
  auto it = j.find("schema_version");
  if (it == j.end()) throw ValidationError(what, "schema_version", "missing");
  if (!it->is_number_integer() || it->get<int>() != kSchemaVersion) {
    throw ValidationError(what, "schema_version", "unsupported version " + it->dump());
  }
}

const json& array_field(const json& j, const char* key, const std::string& what) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_array()) throw ValidationError(what, key, "expected an array");
  return *it;
}

json versioned(const char* key, json payload) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j[key] = std::move(payload);
  return j;
}

std::vector<Token> tokens_from(const json& arr) {
  std::vector<Token> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    Token t = arr[i].get<Token>();
    if (!arr[i].contains("index")) t.index = i;
    out.push_back(std::move(t));
  }
  return out;
}

// Token list given either as {"tokens": [...]}, a bare array, or plain text.
std::vector<Token> token_list(const json& j, const std::string& id, const char* field) {
  if (j.is_string()) {
    std::vector<Token> out;
    for (const auto& w : tokenize(j.get<std::string>())) {
      Token t;
      t.index = out.size();
      t.surface = w;
      t.lemma = to_lower(w);
      t.pos = "UNK";
      out.push_back(std::move(t));
    }
    return out;
  }
  if (j.is_array()) return tokens_from(j);
  if (j.is_object() && j.contains("tokens") && j["tokens"].is_array()) return tokens_from(j["tokens"]);
  throw ValidationError(id, field, "expected text, a token array, or {\"tokens\": [...]}");
}

Words words_from(const json& j) {
  if (j.is_string()) return tokenize(j.get<std::string>());
  return j.get<Words>();
}

template <typename F>
auto with_context(const std::string& id, const std::string& field, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ValidationError&) {
    throw;
  } catch (const json::exception& e) {
    throw ValidationError(id, field, e.what());
  }
}

}  // namespace

// ---- annotation types -----------------------------------------------------

void to_json(json& j, const Token& t) {
  j = json{{"index", t.index}, {"surface", t.surface}, {"lemma", t.lemma}, {"pos", t.pos}};
  put_optional(j, "ne_type", t.ne_type);
  if (!t.synset_ids.empty()) j["synsets"] = t.synset_ids;
  if (!t.verb_sense_ids.empty()) j["verb_senses"] = t.verb_sense_ids;
  put_optional(j, "embedding_key", t.embedding_key);
  if (t.is_stopword) j["stopword"] = true;
}

void from_json(const json& j, Token& t) {
  t = Token{};
  t.index = get_or<std::size_t>(j, "index", 0);
  t.surface = j.at("surface").get<std::string>();
  t.pos = j.at("pos").get<std::string>();
  t.lemma = get_or<std::string>(j, "lemma", to_lower(t.surface));
  t.ne_type = get_optional<std::string>(j, "ne_type");
  t.synset_ids = get_or<std::vector<std::string>>(j, "synsets", {});
  t.verb_sense_ids = get_or<std::vector<std::string>>(j, "verb_senses", {});
  t.embedding_key = get_optional<std::string>(j, "embedding_key");
  t.is_stopword = get_or<bool>(j, "stopword", false);
}

void to_json(json& j, const ConstituencyNode& n) {
  j = json{{"label", n.label}};
  if (n.token_index) j["token_index"] = *n.token_index;
  if (!n.children.empty()) j["children"] = n.children;
}

void from_json(const json& j, ConstituencyNode& n) {
  n = ConstituencyNode{};
  n.label = j.at("label").get<std::string>();
  n.token_index = get_optional<std::size_t>(j, "token_index");
  if (auto it = j.find("children"); it != j.end()) n.children = it->get<std::vector<ConstituencyNode>>();
}

void to_json(json& j, const DependencyEdge& e) {
  j = json{{"head", e.head}, {"dependent", e.dependent}, {"relation", e.relation}};
}

void from_json(const json& j, DependencyEdge& e) {
  e.head = j.at("head").get<std::size_t>();
  e.dependent = j.at("dependent").get<std::size_t>();
  e.relation = j.at("relation").get<std::string>();
}

void to_json(json& j, const TokenSpan& s) { j = json::array({s.start, s.end}); }

void from_json(const json& j, TokenSpan& s) {
  if (!j.is_array() || j.size() != 2) throw ValidationError("", "span", "expected [start, end]");
  s.start = j[0].get<std::size_t>();
  s.end = j[1].get<std::size_t>();
}

void to_json(json& j, const SrlArgument& a) {
  j = json{{"label", a.label}};
  if (a.spans.size() == 1) {
    j["span"] = a.spans.front();
  } else {
    j["spans"] = a.spans;
  }
}

void from_json(const json& j, SrlArgument& a) {
  a = SrlArgument{};
  a.label = j.at("label").get<std::string>();
  if (auto it = j.find("span"); it != j.end()) a.spans.push_back(it->get<TokenSpan>());
  if (auto it = j.find("spans"); it != j.end()) {
    for (const auto& s : *it) a.spans.push_back(s.get<TokenSpan>());
  }
}

void to_json(json& j, const SrlFrame& f) {
  j = json{{"predicate_index", f.predicate_index}, {"args", f.arguments}};
}

void from_json(const json& j, SrlFrame& f) {
  f.predicate_index = j.at("predicate_index").get<std::size_t>();
  f.arguments = get_or<std::vector<SrlArgument>>(j, "args", {});
}

void to_json(json& j, const AnnotatedSentence& s) {
  j = json{{"id", s.id},
           {"tokens", s.tokens},
           {"constituency", s.constituency},
           {"dependencies", s.dependencies},
           {"srl", s.srl_frames}};
}

void from_json(const json& j, AnnotatedSentence& s) {
  s = AnnotatedSentence{};
  s.id = j.at("id").get<std::string>();
  with_context(s.id, "tokens", [&] {
    s.tokens = tokens_from(j.at("tokens"));
    return 0;
  });
  with_context(s.id, "constituency", [&] {
    s.constituency = j.at("constituency").get<ConstituencyNode>();
    return 0;
  });
  with_context(s.id, "dependencies", [&] {
    s.dependencies = get_or<std::vector<DependencyEdge>>(j, "dependencies", {});
    return 0;
  });
  with_context(s.id, "srl", [&] {
    s.srl_frames = get_or<std::vector<SrlFrame>>(j, "srl", {});
    return 0;
  });
}

void to_json(json& j, const Seed& s) {
  j = json{{"id", s.id}, {"sentence", s.sentence}, {"question", {{"tokens", s.question}}},
           {"answer", {{"tokens", s.answer}}}, {"wh_index", s.wh_index}};
  if (s.answer_span) j["answer_span"] = *s.answer_span;
}

Seed seed_from_json(const json& j, const std::vector<AnnotatedSentence>* corpus, std::size_t position) {
  Seed seed;
  seed.id = get_or<std::string>(j, "id", "seed-" + std::to_string(position));
  const auto& id = seed.id;
  if (auto it = j.find("sentence"); it != j.end()) {
    seed.sentence = with_context(id, "sentence", [&] { return it->get<AnnotatedSentence>(); });
  } else if (auto ref = j.find("sentence_ref"); ref != j.end()) {
    const auto sid = ref->get<std::string>();
    const AnnotatedSentence* found = nullptr;
    if (corpus)
      for (const auto& s : *corpus)
        if (s.id == sid) found = &s;
    if (!found) throw ValidationError(id, "sentence_ref", "unknown sentence '" + sid + "'");
    seed.sentence = *found;
  } else {
    throw ValidationError(id, "sentence", "missing sentence or sentence_ref");
  }
  if (!j.contains("question")) throw ValidationError(id, "question", "missing");
  seed.question = with_context(id, "question", [&] { return token_list(j["question"], id, "question"); });
  seed.wh_index = get_or<std::size_t>(j, "wh_index", 0);
  if (auto it = j.find("answer_span"); it != j.end()) {
    seed.answer_span = with_context(id, "answer_span", [&] { return it->get<TokenSpan>(); });
    const auto& sp = *seed.answer_span;
    if (sp.start > sp.end || sp.end >= seed.sentence.tokens.size())
      throw ValidationError(id, "answer_span", "answer span outside the sentence");
    if (auto a = j.find("answer"); a != j.end()) {
      seed.answer = with_context(id, "answer", [&] { return token_list(*a, id, "answer"); });
    } else {
      seed.answer.assign(seed.sentence.tokens.begin() + static_cast<std::ptrdiff_t>(sp.start),
                         seed.sentence.tokens.begin() + static_cast<std::ptrdiff_t>(sp.end) + 1);
    }
  } else if (auto a = j.find("answer"); a != j.end()) {
    seed.answer = with_context(id, "answer", [&] { return token_list(*a, id, "answer"); });
  } else {
    throw ValidationError(id, "answer", "missing answer or answer_span");
  }
  validate(seed);
  return seed;
}

// ---- patterns -------------------------------------------------------------

void to_json(json& j, const ArgumentStructure& a) {
  j = json{{"label", a.label}, {"tokens", a.tokens}, {"cover", a.cover}, {"nested", a.nested},
           {"dependencies", a.dependencies}};
}

void from_json(const json& j, ArgumentStructure& a) {
  a.label = j.at("label").get<std::string>();
  a.tokens = j.at("tokens").get<std::vector<std::size_t>>();
  a.cover = j.at("cover").get<std::vector<ConstituencyNode>>();
  a.nested = j.at("nested").get<std::vector<ConstituencyNode>>();
  a.dependencies = j.at("dependencies").get<std::vector<DependencyEdge>>();
}

void to_json(json& j, const PredicateArgument& p) {
  j = json{{"frame_index", p.frame_index}, {"predicate_index", p.predicate_index}, {"predicate", p.predicate},
           {"arguments", p.arguments}};
}

void from_json(const json& j, PredicateArgument& p) {
  p.frame_index = j.at("frame_index").get<std::size_t>();
  p.predicate_index = j.at("predicate_index").get<std::size_t>();
  p.predicate = j.at("predicate").get<Token>();
  p.arguments = j.at("arguments").get<std::vector<ArgumentStructure>>();
}

void to_json(json& j, const AlignedPair& p) {
  j = json{{"qa", p.qa_index}, {"s", p.s_index}, {"score", p.score}};
}

void from_json(const json& j, AlignedPair& p) {
  p.qa_index = j.at("qa").get<std::size_t>();
  p.s_index = j.at("s").get<std::size_t>();
  p.score = j.at("score").get<double>();
}

void to_json(json& j, const Alignment& a) { j = json{{"pairs", a.pairs}, {"total", a.total_score}}; }

void from_json(const json& j, Alignment& a) {
  a.pairs = j.at("pairs").get<std::vector<AlignedPair>>();
  a.total_score = j.at("total").get<double>();
}

void to_json(json& j, const WeightUpdate& u) {
  j = json{{"question_id", u.question_id}, {"sim", u.sim}, {"weight", u.weight}};
}

void from_json(const json& j, WeightUpdate& u) {
  u.question_id = j.at("question_id").get<std::string>();
  u.sim = j.at("sim").get<double>();
  u.weight = j.at("weight").get<double>();
}

void to_json(json& j, const PatternWeight& w) { j = json{{"w", w.w}, {"history", w.history}}; }

void from_json(const json& j, PatternWeight& w) {
  w.w = j.at("w").get<double>();
  w.history = j.at("history").get<std::vector<WeightUpdate>>();
}

void to_json(json& j, const Pattern& p) {
  j = json{{"id", p.id},
           {"content_hash", p.content_hash},
           {"seed_id", p.seed_id},
           {"iteration", p.iteration},
           {"sentence", p.sentence},
           {"question", p.question},
           {"answer", p.answer},
           {"wh_index", p.wh_index},
           {"predicate_argument", p.pa},
           {"alignment", p.alignment},
           {"answer_argument", p.answer_argument},
           {"weight", p.weight}};
}

void from_json(const json& j, Pattern& p) {
  p.id = j.at("id").get<std::string>();
  p.content_hash = j.at("content_hash").get<std::string>();
  p.seed_id = j.at("seed_id").get<std::string>();
  p.iteration = j.at("iteration").get<int>();
  p.sentence = j.at("sentence").get<AnnotatedSentence>();
  p.question = tokens_from(j.at("question"));
  p.answer = tokens_from(j.at("answer"));
  p.wh_index = j.at("wh_index").get<std::size_t>();
  p.pa = j.at("predicate_argument").get<PredicateArgument>();
  p.alignment = j.at("alignment").get<Alignment>();
  p.answer_argument = j.at("answer_argument").get<std::string>();
  p.weight = j.at("weight").get<PatternWeight>();
}

// ---- questions and decisions ------------------------------------------------

void to_json(json& j, const GeneratedQuestion& q) {
  json trace = json::array();
  for (const auto& [a, b] : q.alignment_trace) trace.push_back(json::array({a, b}));
  j = json{{"id", q.id},
           {"question", q.question_string()},
           {"answer", q.answer_string()},
           {"text", q.text},
           {"answer_text", q.answer_text},
           {"pattern_id", q.pattern_id},
           {"strategy", to_string(q.strategy)},
           {"sentence_id", q.source_sentence_id},
           {"frame_index", q.frame_index},
           {"alignment_trace", trace},
           {"rank_score", q.rank_score}};
}

void from_json(const json& j, GeneratedQuestion& q) {
  q = GeneratedQuestion{};
  q.id = j.at("id").get<std::string>();
  q.text = j.at("text").get<Words>();
  q.answer_text = j.at("answer_text").get<Words>();
  q.pattern_id = j.at("pattern_id").get<std::string>();
  q.strategy = strategy_from_string(j.at("strategy").get<std::string>());
  q.source_sentence_id = j.at("sentence_id").get<std::string>();
  q.frame_index = get_or<std::size_t>(j, "frame_index", 0);
  for (const auto& pr : j.at("alignment_trace"))
    q.alignment_trace.emplace_back(pr.at(0).get<std::size_t>(), pr.at(1).get<std::size_t>());
  q.rank_score = j.at("rank_score").get<double>();
}

void to_json(json& j, const ReviewDecision& d) {
  j = json{{"question_id", d.question_id}, {"action", to_string(d.action)}, {"type_changed", d.type_changed}};
  if (d.corrected_text) j["corrected_text"] = *d.corrected_text;
}

void from_json(const json& j, ReviewDecision& d) {
  d = ReviewDecision{};
  d.question_id = j.at("question_id").get<std::string>();
  d.action = review_action_from_string(j.at("action").get<std::string>());
  if (auto it = j.find("corrected_text"); it != j.end() && !it->is_null()) d.corrected_text = words_from(*it);
  d.type_changed = get_or<bool>(j, "type_changed", false);
}

// ---- configuration and session ------------------------------------------

void to_json(json& j, const WeighingConfig& c) {
  j = json{{"strategy", to_string(c.strategy)}, {"sim", to_string(c.sim)}, {"th", c.th},
           {"penalty", c.penalty}, {"bonus", c.bonus}, {"epsilon", c.epsilon}};
}

void from_json(const json& j, WeighingConfig& c) {
  c = WeighingConfig{};
  if (j.contains("strategy")) c.strategy = weighing_strategy_from_string(j["strategy"].get<std::string>());
  if (j.contains("sim")) c.sim = similarity_kind_from_string(j["sim"].get<std::string>());
  c.th = get_or<double>(j, "th", c.th);
  c.penalty = get_or<double>(j, "penalty", c.penalty);
  c.bonus = get_or<double>(j, "bonus", c.bonus);
  c.epsilon = get_or<double>(j, "epsilon", c.epsilon);
}

namespace {

const std::vector<std::pair<EquivFunction, std::string>>& function_names() {
  static const std::vector<std::pair<EquivFunction, std::string>> names = {
      {EquivFunction::Lexical, "lexical"},     {EquivFunction::VerbSense, "verb_sense"},
      {EquivFunction::NamedEntity, "named_entity"}, {EquivFunction::WordNet, "wordnet"},
      {EquivFunction::Embedding, "embedding"}};
  return names;
}

}  // namespace

void to_json(json& j, const EquivConfig& c) {
  json fns = json::array();
  for (const auto& [f, name] : function_names())
    if (c.enabled.count(f)) fns.push_back(name);
  j = json{{"mode", c.mode == EquivMode::Acquisition ? "acquisition" : "generation"},
           {"functions", fns},
           {"w2v_floor", c.w2v_floor}};
}

void from_json(const json& j, EquivConfig& c) {
  c = EquivConfig{};
  if (j.contains("mode")) {
    const auto m = j["mode"].get<std::string>();
    if (m != "acquisition" && m != "generation") throw std::invalid_argument("unknown equivalence mode '" + m + "'");
    c.mode = m == "acquisition" ? EquivMode::Acquisition : EquivMode::Generation;
  }
  if (j.contains("functions")) {
    c.enabled.clear();
    for (const auto& n : j["functions"]) {
      const auto name = n.get<std::string>();
      bool known = false;
      for (const auto& [f, fname] : function_names()) {
        if (fname == name) {
          c.enabled.insert(f);
          known = true;
        }
      }
      if (!known) throw std::invalid_argument("unknown equivalence function '" + name + "'");
    }
  }
  c.w2v_floor = get_or<double>(j, "w2v_floor", c.w2v_floor);
}

void to_json(json& j, const SessionConfig& c) {
  json strategies = json::array();
  for (auto s : c.strategies) strategies.push_back(to_string(s));
  j = json{{"batch_size", c.batch_size},
           {"strategies", strategies},
           {"weighing", c.weighing},
           {"harvest", c.harvest},
           {"weigh", c.weigh},
           {"prune", c.prune},
           {"ranking", c.ranking == RankingMode::Weighted ? "weighted" : "random"},
           {"ranking_seed", c.ranking_seed},
           {"equiv", c.equiv}};
  put_optional(j, "shuffle_seed", c.shuffle_seed);
}

void from_json(const json& j, SessionConfig& c) {
  c = SessionConfig{};
  c.batch_size = get_or<std::size_t>(j, "batch_size", c.batch_size);
  c.shuffle_seed = get_optional<std::uint64_t>(j, "shuffle_seed");
  if (j.contains("strategies")) {
    c.strategies.clear();
    for (const auto& s : j["strategies"]) c.strategies.push_back(strategy_from_string(s.get<std::string>()));
  }
  if (j.contains("weighing")) c.weighing = j["weighing"].get<WeighingConfig>();
  c.harvest = get_or<bool>(j, "harvest", c.harvest);
  c.weigh = get_or<bool>(j, "weigh", c.weigh);
  c.prune = get_or<bool>(j, "prune", c.prune);
  if (j.contains("ranking")) {
    const auto r = j["ranking"].get<std::string>();
    if (r != "weighted" && r != "random") throw std::invalid_argument("unknown ranking mode '" + r + "'");
    c.ranking = r == "weighted" ? RankingMode::Weighted : RankingMode::Random;
  }
  c.ranking_seed = get_or<std::uint64_t>(j, "ranking_seed", c.ranking_seed);
  if (j.contains("equiv")) c.equiv = j["equiv"].get<EquivConfig>();
}

void to_json(json& j, const BatchPlan& p) {
  j = json{{"batch_size", p.batch_size}, {"batches", p.batches}};
  put_optional(j, "shuffle_seed", p.shuffle_seed);
}

void from_json(const json& j, BatchPlan& p) {
  p.batch_size = j.at("batch_size").get<std::size_t>();
  p.shuffle_seed = get_optional<std::uint64_t>(j, "shuffle_seed");
  p.batches = j.at("batches").get<std::vector<std::vector<std::string>>>();
}

void to_json(json& j, const BatchStats& s) {
  j = json{{"batch", s.batch},         {"patterns", s.patterns},   {"new", s.new_patterns},
           {"questions", s.questions}, {"unique", s.unique},       {"discarded", s.discarded},
           {"discarded_pct", s.discarded_pct}, {"edit_avg", s.edit_avg}};
}

void from_json(const json& j, BatchStats& s) {
  s.batch = j.at("batch").get<std::size_t>();
  s.patterns = j.at("patterns").get<std::size_t>();
  s.new_patterns = j.at("new").get<std::size_t>();
  s.questions = j.at("questions").get<std::size_t>();
  s.unique = j.at("unique").get<std::size_t>();
  s.discarded = j.at("discarded").get<std::size_t>();
  s.discarded_pct = j.at("discarded_pct").get<double>();
  s.edit_avg = j.at("edit_avg").get<double>();
}

void to_json(json& j, const BatchRecord& r) {
  j = json{{"index", r.index},         {"sentence_ids", r.sentence_ids}, {"new_patterns", r.new_patterns},
           {"pool_size", r.pool_size}, {"questions", r.questions},       {"decisions", r.decisions},
           {"pruned", r.pruned},       {"harvested", r.harvested},       {"closed", r.closed}};
  if (r.stats) j["stats"] = *r.stats;
}

void from_json(const json& j, BatchRecord& r) {
  r = BatchRecord{};
  r.index = j.at("index").get<std::size_t>();
  r.sentence_ids = j.at("sentence_ids").get<std::vector<std::string>>();
  r.new_patterns = j.at("new_patterns").get<std::vector<std::string>>();
  r.pool_size = j.at("pool_size").get<std::size_t>();
  r.questions = j.at("questions").get<std::vector<GeneratedQuestion>>();
  r.decisions = j.at("decisions").get<std::vector<ReviewDecision>>();
  r.pruned = j.at("pruned").get<std::vector<std::string>>();
  r.harvested = j.at("harvested").get<std::size_t>();
  r.closed = j.at("closed").get<bool>();
  r.stats = get_optional<BatchStats>(j, "stats");
}

void to_json(json& j, const SessionState& s) {
  json seeds = json::array();
  for (const auto& seed : s.seeds) seeds.push_back(seed);
  j = json{{"schema_version", kSchemaVersion},
           {"config", s.config},
           {"plan", s.plan},
           {"status", to_string(s.status)},
           {"patterns", s.pool.patterns()},
           {"seeds", seeds},
           {"batches", s.batches},
           {"warnings", s.warnings}};
}

void from_json(const json& j, SessionState& s) {
  s = SessionState{};
  s.config = j.at("config").get<SessionConfig>();
  s.plan = j.at("plan").get<BatchPlan>();
  const auto status = j.at("status").get<std::string>();
  if (status == "created") s.status = SessionStatus::Created;
  else if (status == "reviewing") s.status = SessionStatus::Reviewing;
  else if (status == "complete") s.status = SessionStatus::Complete;
  else throw std::invalid_argument("unknown session status '" + status + "'");
  for (const auto& p : j.at("patterns")) s.pool.add(p.get<Pattern>());
  std::size_t i = 0;
  for (const auto& seed : j.at("seeds")) s.seeds.push_back(seed_from_json(seed, nullptr, i++));
  s.batches = j.at("batches").get<std::vector<BatchRecord>>();
  s.warnings = j.at("warnings").get<std::vector<std::string>>();
}

// ---- reports ------------------------------------------------------------

void to_json(json& j, const CutScores& c) {
  j = json{{"top", c.cut},       {"used", c.used},      {"exceeds_list", c.exceeds_list},
           {"bleu1", c.bleu1},   {"bleu4", c.bleu4},    {"bleu1_best_ref", c.bleu1_best},
           {"bleu4_best_ref", c.bleu4_best}, {"rouge_l", c.rouge_l}, {"eacs", c.eacs},
           {"vecs", c.vecs},     {"gms", c.gms},        {"best_lev", c.best_lev}};
}

void to_json(json& j, const MetricReport& r) {
  j = json{{"empty", r.empty}, {"cuts", r.cuts}, {"warnings", r.warnings}};
}

void to_json(json& j, const BatchEvaluation& e) {
  j = json{{"batch", e.batch}, {"ranked", e.ranked}, {"random_baseline", e.random_baseline}};
}

void to_json(json& j, const SessionReport& r) {
  j = json{{"stats", r.stats},
           {"batches", r.batches},
           {"window", {{"ranked", r.window_ranked}, {"random_baseline", r.window_baseline}}},
           {"warnings", r.warnings}};
}

json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(what, "json", e.what());
  }
}

// ---- public API -----------------------------------------------------------

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

std::vector<AnnotatedSentence> parse_corpus(const std::string& text) {
  const auto j = parse_json(text, "corpus");
  check_version(j, "corpus");
  std::vector<AnnotatedSentence> out;
  const auto& arr = array_field(j, "sentences", "corpus");
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string fallback = "sentences[" + std::to_string(i) + "]";
    const std::string id = arr[i].is_object() && arr[i].contains("id") && arr[i]["id"].is_string()
                               ? arr[i]["id"].get<std::string>()
                               : fallback;
    auto s = with_context(id, "sentence", [&] { return arr[i].get<AnnotatedSentence>(); });
    validate(s);
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<AnnotatedSentence> load_corpus(const std::filesystem::path& path) {
  return parse_corpus(read_text_file(path));
}

std::string dump_corpus(const std::vector<AnnotatedSentence>& corpus) {
  return versioned("sentences", corpus).dump(1);
}

std::vector<Seed> parse_seeds(const std::string& text, const std::vector<AnnotatedSentence>* corpus) {
  const auto j = parse_json(text, "seeds");
  check_version(j, "seeds");
  std::vector<Seed> out;
  const auto& arr = array_field(j, "seeds", "seeds");
  for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(seed_from_json(arr[i], corpus, i));
  return out;
}

std::vector<Seed> load_seeds(const std::filesystem::path& path, const std::vector<AnnotatedSentence>* corpus) {
  return parse_seeds(read_text_file(path), corpus);
}

std::string dump_seeds(const std::vector<Seed>& seeds) {
  json arr = json::array();
  for (const auto& s : seeds) arr.push_back(s);
  return versioned("seeds", arr).dump(1);
}

Reference parse_reference(const std::string& text) {
  const auto j = parse_json(text, "reference");
  check_version(j, "reference");
  auto it = j.find("reference");
  if (it == j.end() || !it->is_object()) throw ValidationError("reference", "reference", "expected an object");
  Reference out;
  for (const auto& [sid, list] : it->items()) {
    if (!list.is_array()) throw ValidationError(sid, "reference", "expected a list of questions");
    for (const auto& q : list) out[sid].push_back(with_context(sid, "reference", [&] { return words_from(q); }));
  }
  return out;
}

Reference load_reference(const std::filesystem::path& path) { return parse_reference(read_text_file(path)); }

std::string dump_reference(const Reference& reference) {
  json obj = json::object();
  for (const auto& [sid, list] : reference) {
    json arr = json::array();
    for (const auto& q : list) arr.push_back(render(q));
    obj[sid] = arr;
  }
  return versioned("reference", obj).dump(1);
}

PatternPool parse_pattern_pool(const std::string& text) {
  const auto j = parse_json(text, "patterns");
  check_version(j, "patterns");
  PatternPool pool;
  for (const auto& p : array_field(j, "patterns", "patterns"))
    pool.add(with_context("patterns", "pattern", [&] { return p.get<Pattern>(); }));
  return pool;
}

std::string dump_pattern_pool(const PatternPool& pool) { return versioned("patterns", pool.patterns()).dump(1); }

std::vector<GeneratedQuestion> parse_questions(const std::string& text) {
  const auto j = parse_json(text, "questions");
  check_version(j, "questions");
  return with_context("questions", "questions",
                      [&] { return array_field(j, "questions", "questions").get<std::vector<GeneratedQuestion>>(); });
}

std::string dump_questions(const std::vector<GeneratedQuestion>& questions) {
  return versioned("questions", questions).dump(1);
}

std::vector<ReviewDecision> parse_decisions(const std::string& text) {
  const auto j = parse_json(text, "decisions");
  check_version(j, "decisions");
  return with_context("decisions", "decisions",
                      [&] { return array_field(j, "decisions", "decisions").get<std::vector<ReviewDecision>>(); });
}

std::string dump_decisions(const std::vector<ReviewDecision>& decisions) {
  return versioned("decisions", decisions).dump(1);
}

SessionConfig parse_session_config(const std::string& text) {
  return with_context("config", "config", [&] { return parse_json(text, "config").get<SessionConfig>(); });
}

std::string dump_session_config(const SessionConfig& cfg) { return json(cfg).dump(1); }

SessionState parse_session_state(const std::string& text) {
  const auto j = parse_json(text, "session");
  check_version(j, "session");
  return with_context("session", "session", [&] { return j.get<SessionState>(); });
}

std::string dump_session_state(const SessionState& state) { return json(state).dump(1); }

std::string dump_report(const SessionReport& report) { return json(report).dump(1); }

std::string dump_metric_report(const MetricReport& report) { return json(report).dump(1); }

}  // namespace gen
