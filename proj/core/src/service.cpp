#include "gen/service.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <regex>
#include <sstream>

#include <unistd.h>

#include "json_codec.hpp"

namespace gen {

namespace fs = std::filesystem;

namespace {

const char* const kResourceFiles[] = {"senses.tsv", "synsets.tsv", "embeddings.txt",
                                      "ne_rules.tsv", "stopwords.txt", "verbs.tsv"};

std::string type_name(SessionEvent::Type t) {
  switch (t) {
    case SessionEvent::Type::Create: return "create";
    case SessionEvent::Type::Decision: return "decision";
    case SessionEvent::Type::Advance: return "advance";
  }
  return "unknown";
}

ServiceError from_session_error(const SessionError& e) {
  switch (e.kind()) {
    case SessionError::Kind::NotFound: return ServiceError(404, e.what(), e.ids());
    case SessionError::Kind::Conflict: return ServiceError(409, e.what(), e.ids());
    case SessionError::Kind::Invalid: return ServiceError(422, e.what(), e.ids());
  }
  return ServiceError(500, e.what());
}

void write_atomically(const fs::path& path, const std::string& text) {
  const fs::path tmp = path.string() + ".tmp";
  write_text_file(tmp, text);
  fs::rename(tmp, path);
}

std::string random_id() {
  std::random_device rd;
  std::mt19937_64 rng((static_cast<std::uint64_t>(rd()) << 32) ^ rd());
  char buf[20];
  std::snprintf(buf, sizeof buf, "s-%012llx", static_cast<unsigned long long>(rng() & 0xffffffffffffULL));
  return buf;
}

struct Inputs {
  std::vector<AnnotatedSentence> corpus;
  std::vector<Seed> seeds;
  ResourceBundle resources;
  std::optional<Reference> reference;
};

Inputs load_inputs(const fs::path& dir) {
  Inputs in;
  in.corpus = load_corpus(dir / "corpus.json");
  in.seeds = load_seeds(dir / "seeds.json", &in.corpus);
  in.resources = ResourceBundle::load_directory(dir / "resources");
  if (fs::exists(dir / "reference.json")) in.reference = load_reference(dir / "reference.json");
  return in;
}

void apply_event(SessionState& state, const SessionEvent& ev, const SessionContext& ctx) {
  switch (ev.type) {
    case SessionEvent::Type::Create: throw std::runtime_error("create event in the middle of a log");
    case SessionEvent::Type::Decision: submit_decision(state, *ev.decision); break;
    case SessionEvent::Type::Advance: advance(state, ctx); break;
  }
}

SessionState initial_state(const Inputs& in, const SessionConfig& cfg, const SessionContext& ctx) {
  auto state = start_session(in.corpus, in.seeds, cfg);
  open_batch(state, ctx);
  return state;
}

SessionSummary summarize(const std::string& id, const SessionState& s) {
  SessionSummary out;
  out.id = id;
  out.status = s.status;
  out.iteration = s.iteration();
  out.total_batches = s.plan.batches.size();
  if (const auto* p = s.pending()) {
    out.pending_questions = p->questions.size();
    out.undecided = p->undecided().size();
  }
  out.patterns = s.pool.size();
  out.stats = s.stats();
  out.warnings = s.warnings;
  return out;
}

}  // namespace

// ---- event log ------------------------------------------------------------

std::string encode_event(const SessionEvent& e) {
  json j{{"seq", e.seq}, {"type", type_name(e.type)}};
  if (e.config) j["config"] = *e.config;
  if (e.decision) j["decision"] = *e.decision;
  return j.dump();
}

SessionEvent decode_event(const std::string& line) {
  const auto j = parse_json(line, "event");
  SessionEvent e;
  e.seq = j.at("seq").get<std::uint64_t>();
  const auto t = j.at("type").get<std::string>();
  if (t == "create") {
    e.type = SessionEvent::Type::Create;
    e.config = j.at("config").get<SessionConfig>();
  } else if (t == "decision") {
    e.type = SessionEvent::Type::Decision;
    e.decision = j.at("decision").get<ReviewDecision>();
  } else if (t == "advance") {
    e.type = SessionEvent::Type::Advance;
  } else {
    throw std::runtime_error("unknown event type '" + t + "'");
  }
  return e;
}

void EventLog::append(const SessionEvent& e) const {
  const std::string line = encode_event(e) + "\n";
  std::FILE* f = std::fopen(path_.c_str(), "ab");
  if (!f) throw std::runtime_error("cannot open event log " + path_.string());
  const bool ok = std::fwrite(line.data(), 1, line.size(), f) == line.size() && std::fflush(f) == 0 &&
                  ::fsync(::fileno(f)) == 0;
  std::fclose(f);
  if (!ok) throw std::runtime_error("failed to append to event log " + path_.string());
}

std::vector<SessionEvent> EventLog::read() const {
  std::vector<SessionEvent> out;
  if (!fs::exists(path_)) return out;
  const auto text = read_text_file(path_);
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    if (nl == std::string::npos) break;  // torn trailing write
    const auto line = text.substr(pos, nl - pos);
    pos = nl + 1;
    if (line.empty()) continue;
    try {
      out.push_back(decode_event(line));
    } catch (const std::exception& e) {
      throw std::runtime_error("corrupt event log " + path_.string() + " at event " +
                               std::to_string(out.size() + 1) + ": " + e.what());
    }
    if (out.back().seq != out.size()) {
      throw std::runtime_error("event log " + path_.string() + " is out of sequence at event " +
                               std::to_string(out.size()));
    }
  }
  return out;
}

std::size_t EventLog::truncate_torn_tail() const {
  if (!fs::exists(path_)) return 0;
  const auto text = read_text_file(path_);
  if (text.empty() || text.back() == '\n') return 0;
  const auto nl = text.rfind('\n');
  const std::size_t keep = nl == std::string::npos ? 0 : nl + 1;
  fs::resize_file(path_, keep);
  return text.size() - keep;
}

// ---- service --------------------------------------------------------------

struct ReviewService::Entry {
  std::string id;
  fs::path dir;
  std::shared_mutex mutex;
  Inputs inputs;
  SessionState state;
  std::uint64_t events = 0;
  std::uint64_t since_snapshot = 0;

  SessionContext context() const { return SessionContext{&inputs.corpus, &inputs.resources}; }
};

ReviewService::ReviewService(fs::path data_dir, std::size_t snapshot_every)
    : data_dir_(std::move(data_dir)), snapshot_every_(snapshot_every == 0 ? 1 : snapshot_every) {
  fs::create_directories(data_dir_ / "sessions");
}

fs::path ReviewService::resolve(const std::string& p) const {
  const fs::path path(p);
  return path.is_absolute() ? path : data_dir_ / path;
}

SessionState ReviewService::replay(const fs::path& dir) {
  const auto inputs = load_inputs(dir);
  const SessionContext ctx{&inputs.corpus, &inputs.resources};
  const auto events = EventLog(dir / "events.ndjson").read();
  if (events.empty() || events.front().type != SessionEvent::Type::Create)
    throw std::runtime_error("session log " + dir.string() + " does not start with a create event");

  SessionState state;
  std::size_t next = 0;
  if (fs::exists(dir / "snapshot.json")) {
    const auto snap = parse_json(read_text_file(dir / "snapshot.json"), "snapshot");
    const auto count = snap.at("events").get<std::size_t>();
    if (count >= 1 && count <= events.size()) {
      state = snap.at("state").get<SessionState>();
      next = count;
    }
  }
  if (next == 0) {
    state = initial_state(inputs, *events.front().config, ctx);
    next = 1;
  }
  for (; next < events.size(); ++next) apply_event(state, events[next], ctx);
  return state;
}

std::shared_ptr<ReviewService::Entry> ReviewService::load_entry(const std::string& id) {
  const auto dir = data_dir_ / "sessions" / id;
  if (!fs::exists(dir / "events.ndjson")) return nullptr;
  EventLog(dir / "events.ndjson").truncate_torn_tail();
  auto e = std::make_shared<Entry>();
  e->id = id;
  e->dir = dir;
  e->inputs = load_inputs(dir);
  e->state = replay(dir);
  e->events = EventLog(dir / "events.ndjson").read().size();
  return e;
}

std::shared_ptr<ReviewService::Entry> ReviewService::entry(const std::string& id) {
  std::lock_guard lock(registry_mutex_);
  if (auto it = sessions_.find(id); it != sessions_.end()) return it->second;
  static const std::regex safe("[A-Za-z0-9_.-]+");
  if (!std::regex_match(id, safe) || id == "." || id == "..")
    throw ServiceError(404, "no session '" + id + "'");
  auto e = load_entry(id);
  if (!e) throw ServiceError(404, "no session '" + id + "'");
  sessions_[id] = e;
  return e;
}

void ReviewService::commit(Entry& e, const SessionEvent& ev_in, SessionState next) {
  SessionEvent ev = ev_in;
  ev.seq = e.events + 1;
  EventLog(e.dir / "events.ndjson").append(ev);
  e.state = std::move(next);
  e.events = ev.seq;
  ++e.since_snapshot;
  if (e.since_snapshot >= snapshot_every_ || ev.type != SessionEvent::Type::Decision) {
    try {
      json snap{{"events", e.events}, {"state", e.state}};
      write_atomically(e.dir / "snapshot.json", snap.dump());
      e.since_snapshot = 0;
    } catch (const std::exception&) {
      // The log stays authoritative; a stale snapshot only costs replay time.
    }
  }
}

SessionSummary ReviewService::create_session(const CreateRequest& req) {
  const std::string id = req.session_id.value_or(random_id());
  static const std::regex safe("[A-Za-z0-9_.-]+");
  if (!std::regex_match(id, safe) || id == "." || id == "..")
    throw ServiceError(422, "session id may only contain letters, digits, '.', '_' and '-'");

  try {
    (void)validate(req.config);
  } catch (const std::invalid_argument& e) {
    throw ServiceError(422, std::string("invalid configuration: ") + e.what());
  }

  Inputs in;
  try {
    if (req.corpus.empty() || req.seeds.empty()) throw std::runtime_error("corpus and seeds are required");
    in.corpus = load_corpus(resolve(req.corpus));
    in.seeds = load_seeds(resolve(req.seeds), &in.corpus);
    if (!req.resources.empty()) {
      if (!fs::is_directory(resolve(req.resources)))
        throw std::runtime_error("resource directory " + req.resources + " does not exist");
      in.resources = ResourceBundle::load_directory(resolve(req.resources));
    }
    if (!req.reference.empty()) in.reference = load_reference(resolve(req.reference));
  } catch (const ServiceError&) {
    throw;
  } catch (const std::exception& e) {
    throw ServiceError(422, e.what());
  }

  const auto dir = data_dir_ / "sessions" / id;
  {
    std::lock_guard lock(registry_mutex_);
    if (sessions_.count(id) || fs::exists(dir)) throw ServiceError(409, "session '" + id + "' already exists");
    fs::create_directories(dir / "resources");
  }
  write_text_file(dir / "corpus.json", dump_corpus(in.corpus));
  write_text_file(dir / "seeds.json", dump_seeds(in.seeds));
  if (in.reference) write_text_file(dir / "reference.json", dump_reference(*in.reference));
  if (!req.resources.empty()) {
    for (const char* name : kResourceFiles) {
      const auto src = resolve(req.resources) / name;
      if (fs::exists(src)) fs::copy_file(src, dir / "resources" / name, fs::copy_options::overwrite_existing);
    }
  }

  auto e = std::make_shared<Entry>();
  e->id = id;
  e->dir = dir;
  // Reload the stored copies so the live session sees exactly what replay sees.
  e->inputs = load_inputs(dir);

  SessionEvent ev;
  ev.type = SessionEvent::Type::Create;
  ev.config = req.config;
  {
    std::unique_lock lock(e->mutex);
    commit(*e, ev, initial_state(e->inputs, req.config, e->context()));
  }
  {
    std::lock_guard lock(registry_mutex_);
    sessions_[id] = e;
  }
  return summarize(id, e->state);
}

SessionSummary ReviewService::get_session(const std::string& id) {
  auto e = entry(id);
  std::shared_lock lock(e->mutex);
  return summarize(id, e->state);
}

BatchView ReviewService::get_pending_batch(const std::string& id) {
  auto e = entry(id);
  std::shared_lock lock(e->mutex);
  BatchView v;
  v.status = e->state.status;
  if (const auto* p = e->state.pending()) {
    v.batch = p->index + 1;
    const auto ctx = e->context();
    for (const auto& sid : p->sentence_ids) {
      const auto* s = ctx.sentence(sid);
      v.sentences.push_back({sid, s ? s->text() : std::string()});
    }
    v.questions = p->questions;
    v.decisions = p->decisions;
  }
  return v;
}

DecisionAck ReviewService::submit_decision(const std::string& id, ReviewDecision decision) {
  auto e = entry(id);
  std::unique_lock lock(e->mutex);
  const auto* pending = e->state.pending();
  if (!pending) throw ServiceError(409, "session '" + id + "' has no batch awaiting review");
  const auto* q = pending->question(decision.question_id);
  if (!q) throw ServiceError(404, "question " + decision.question_id + " is not pending review", {decision.question_id});
  if (decision.action == ReviewAction::Kept && !decision.corrected_text) decision.corrected_text = q->text;

  SessionState next = e->state;
  const auto before = pending->decisions.size();
  try {
    gen::submit_decision(next, decision);
  } catch (const SessionError& err) {
    throw from_session_error(err);
  }
  DecisionAck ack;
  ack.question_id = decision.question_id;
  if (next.pending()->decisions.size() == before) {
    ack.duplicate = true;
  } else {
    SessionEvent ev;
    ev.type = SessionEvent::Type::Decision;
    ev.decision = next.pending()->decisions.back();
    commit(*e, ev, std::move(next));
  }
  ack.undecided = e->state.pending() ? e->state.pending()->undecided().size() : 0;
  return ack;
}

AdvanceResult ReviewService::advance(const std::string& id) {
  auto e = entry(id);
  std::unique_lock lock(e->mutex);
  if (!e->state.pending()) throw ServiceError(409, "session '" + id + "' has no batch awaiting review");
  SessionState next = e->state;
  AdvanceResult out;
  try {
    out.stats = gen::advance(next, e->context());
  } catch (const SessionError& err) {
    throw from_session_error(err);
  }
  SessionEvent ev;
  ev.type = SessionEvent::Type::Advance;
  commit(*e, ev, std::move(next));
  out.status = e->state.status;
  if (const auto* p = e->state.pending()) {
    out.next_batch = p->index + 1;
    out.next_questions = p->questions.size();
  }
  if (e->state.status == SessionStatus::Complete) {
    const auto& emb = e->inputs.resources.embeddings;
    out.report = build_report(e->state, e->inputs.reference ? &*e->inputs.reference : nullptr,
                              emb.empty() ? nullptr : &emb);
  }
  return out;
}

std::vector<Pattern> ReviewService::patterns(const std::string& id) {
  auto e = entry(id);
  std::shared_lock lock(e->mutex);
  return e->state.pool.patterns();
}

SessionReport ReviewService::report(const std::string& id, const std::vector<std::size_t>& cuts) {
  auto e = entry(id);
  std::shared_lock lock(e->mutex);
  ReportOptions opts;
  if (!cuts.empty()) opts.cuts = cuts;
  const auto& emb = e->inputs.resources.embeddings;
  return build_report(e->state, e->inputs.reference ? &*e->inputs.reference : nullptr,
                      emb.empty() ? nullptr : &emb, opts);
}

SessionState ReviewService::state(const std::string& id) {
  auto e = entry(id);
  std::shared_lock lock(e->mutex);
  return e->state;
}

std::vector<std::string> ReviewService::session_ids() {
  std::vector<std::string> out;
  for (const auto& d : fs::directory_iterator(data_dir_ / "sessions"))
    if (fs::exists(d.path() / "events.ndjson")) out.push_back(d.path().filename().string());
  std::sort(out.begin(), out.end());
  return out;
}

fs::path resolve_data_dir(const fs::path& fallback) {
  if (const char* env = std::getenv("GEN_DATA_DIR"); env && *env) return fs::path(env);
  return fallback;
}

// ---- HTTP routing -----------------------------------------------------------

namespace {

json summary_json(const SessionSummary& s) {
  return json{{"id", s.id},
              {"status", to_string(s.status)},
              {"iteration", s.iteration},
              {"total_batches", s.total_batches},
              {"pending_questions", s.pending_questions},
              {"undecided", s.undecided},
              {"patterns", s.patterns},
              {"stats", s.stats},
              {"warnings", s.warnings}};
}

json batch_json(const BatchView& v) {
  json sentences = json::array();
  for (const auto& s : v.sentences) sentences.push_back({{"id", s.id}, {"text", s.text}});
  json j{{"status", to_string(v.status)}, {"sentences", sentences}, {"questions", v.questions},
         {"decisions", v.decisions}};
  j["batch"] = v.batch ? json(*v.batch) : json(nullptr);
  return j;
}

json pattern_json(const Pattern& p) {
  return json{{"id", p.id},
              {"seed_id", p.seed_id},
              {"iteration", p.iteration},
              {"question", render(p.question)},
              {"answer", render(p.answer)},
              {"predicate", p.pa.predicate.surface},
              {"weight", p.weight.w},
              {"history", p.weight.history}};
}

HttpResponse error_response(int status, const std::string& message, const std::vector<std::string>& ids = {}) {
  json j{{"error", message}};
  if (!ids.empty()) j["ids"] = ids;
  return {status, j.dump()};
}

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> out;
  std::string part;
  std::istringstream is(path);
  while (std::getline(is, part, '/'))
    if (!part.empty()) out.push_back(part);
  return out;
}

std::vector<std::size_t> parse_cuts(const std::string& s) {
  std::vector<std::size_t> out;
  std::istringstream is(s);
  std::string part;
  while (std::getline(is, part, ',')) {
    if (part.empty()) continue;
    std::size_t used = 0;
    const auto v = std::stoul(part, &used);
    if (used != part.size() || v == 0) throw std::invalid_argument("bad cut '" + part + "'");
    out.push_back(v);
  }
  return out;
}

CreateRequest create_request(const json& j) {
  CreateRequest r;
  r.corpus = j.value("corpus", std::string());
  r.seeds = j.value("seeds", std::string());
  r.resources = j.value("resources", std::string());
  r.reference = j.value("reference", std::string());
  if (j.contains("config")) r.config = j["config"].get<SessionConfig>();
  if (j.contains("id")) r.session_id = j["id"].get<std::string>();
  return r;
}

}  // namespace

HttpResponse handle_request(ReviewService& service, const std::string& method, const std::string& path,
                            const std::map<std::string, std::string>& query, const std::string& body) {
  const auto parts = split_path(path);
  auto body_json = [&]() {
    if (body.empty()) return json::object();
    try {
      auto j = json::parse(body);
      if (!j.is_object()) throw ServiceError(400, "request body must be a JSON object");
      return j;
    } catch (const json::parse_error& e) {
      throw ServiceError(400, std::string("malformed JSON: ") + e.what());
    }
  };
  try {
    if (parts.empty() || parts[0] != "sessions") return error_response(404, "no such resource");
    if (parts.size() == 1) {
      if (method == "POST") {
        const auto req = [&] {
          try {
            return create_request(body_json());
          } catch (const ServiceError&) {
            throw;
          } catch (const std::exception& e) {
            throw ServiceError(422, std::string("invalid request: ") + e.what());
          }
        }();
        return {201, summary_json(service.create_session(req)).dump()};
      }
      if (method == "GET") return {200, json{{"sessions", service.session_ids()}}.dump()};
      return error_response(405, "method not allowed");
    }
    const std::string& id = parts[1];
    if (parts.size() == 2) {
      if (method != "GET") return error_response(405, "method not allowed");
      return {200, summary_json(service.get_session(id)).dump()};
    }
    const std::string& what = parts[2];
    if (parts.size() == 3 && what == "batch") {
      if (method != "GET") return error_response(405, "method not allowed");
      return {200, batch_json(service.get_pending_batch(id)).dump()};
    }
    if (parts.size() == 3 && what == "advance") {
      if (method != "POST") return error_response(405, "method not allowed");
      const auto r = service.advance(id);
      json j{{"stats", r.stats}, {"status", to_string(r.status)}, {"next_questions", r.next_questions}};
      j["next_batch"] = r.next_batch ? json(*r.next_batch) : json(nullptr);
      if (r.report) j["report"] = *r.report;
      return {200, j.dump()};
    }
    if (parts.size() == 3 && what == "patterns") {
      if (method != "GET") return error_response(405, "method not allowed");
      json arr = json::array();
      for (const auto& p : service.patterns(id)) arr.push_back(pattern_json(p));
      return {200, json{{"patterns", arr}}.dump()};
    }
    if (parts.size() == 3 && what == "report") {
      if (method != "GET") return error_response(405, "method not allowed");
      std::vector<std::size_t> cuts;
      if (auto it = query.find("top"); it != query.end()) {
        try {
          cuts = parse_cuts(it->second);
        } catch (const std::exception& e) {
          return error_response(422, std::string("invalid top parameter: ") + e.what());
        }
      }
      const auto report = service.report(id, cuts);
      json j = report;
      j["text"] = format_report(report);
      return {200, j.dump()};
    }
    if (parts.size() == 5 && what == "questions" && parts[4] == "decision") {
      if (method != "POST") return error_response(405, "method not allowed");
      const auto j = body_json();
      ReviewDecision d;
      try {
        d.question_id = parts[3];
        d.action = review_action_from_string(j.at("action").get<std::string>());
        if (auto it = j.find("corrected_text"); it != j.end() && !it->is_null()) {
          d.corrected_text = it->is_string() ? tokenize(it->get<std::string>()) : it->get<Words>();
        }
        d.type_changed = j.value("type_changed", false);
      } catch (const std::exception& e) {
        return error_response(422, std::string("invalid decision: ") + e.what());
      }
      const auto ack = service.submit_decision(id, d);
      return {200, json{{"question_id", ack.question_id}, {"duplicate", ack.duplicate}, {"undecided", ack.undecided}}
                       .dump()};
    }
    return error_response(404, "no such resource");
  } catch (const ServiceError& e) {
    return error_response(e.status(), e.what(), e.ids());
  } catch (const std::exception& e) {
    return error_response(500, e.what());
  }
}

}  // namespace gen
