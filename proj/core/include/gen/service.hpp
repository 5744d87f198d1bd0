#pragma once

// Review service: file-backed sessions driven by reviewer decisions. Every
// state change is one line in an append-only event log; a snapshot of the
// derived state is written alongside and the log is replayed on load.

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "gen/json_io.hpp"
#include "gen/session.hpp"

namespace gen {

class ServiceError : public std::runtime_error {
 public:
  ServiceError(int status, const std::string& what, std::vector<std::string> ids = {})
      : std::runtime_error(what), status_(status), ids_(std::move(ids)) {}

  int status() const { return status_; }  // HTTP-style: 400, 404, 409, 422
  const std::vector<std::string>& ids() const { return ids_; }

 private:
  int status_;
  std::vector<std::string> ids_;
};

// Inputs of a new session. Paths are absolute or relative to the data directory.
struct CreateRequest {
  std::string corpus;
  std::string seeds;
  std::string resources;  // directory; empty for built-in defaults only
  std::string reference;  // optional, enables metric reports
  SessionConfig config;
  std::optional<std::string> session_id;
};

struct SessionSummary {
  std::string id;
  SessionStatus status = SessionStatus::Created;
  std::size_t iteration = 0;
  std::size_t total_batches = 0;
  std::size_t pending_questions = 0;
  std::size_t undecided = 0;
  std::size_t patterns = 0;
  std::vector<BatchStats> stats;
  std::vector<std::string> warnings;
};

struct PendingSentence {
  std::string id;
  std::string text;
};

struct BatchView {
  SessionStatus status = SessionStatus::Created;
  std::optional<std::size_t> batch;  // 1-based; absent when nothing is pending
  std::vector<PendingSentence> sentences;
  std::vector<GeneratedQuestion> questions;
  std::vector<ReviewDecision> decisions;
};

struct DecisionAck {
  std::string question_id;
  bool duplicate = false;
  std::size_t undecided = 0;
};

struct AdvanceResult {
  BatchStats stats;
  SessionStatus status = SessionStatus::Created;
  std::optional<std::size_t> next_batch;
  std::size_t next_questions = 0;
  std::optional<SessionReport> report;  // attached after the final batch
};

// One persisted event.
struct SessionEvent {
  enum class Type { Create, Decision, Advance };
  std::uint64_t seq = 0;
  Type type = Type::Create;
  std::optional<SessionConfig> config;      // Create
  std::optional<ReviewDecision> decision;   // Decision
};

// Append-only NDJSON log. A trailing line without its newline (a torn
// write) is ignored on read; a malformed complete line is an error.
class EventLog {
 public:
  explicit EventLog(std::filesystem::path path) : path_(std::move(path)) {}

  void append(const SessionEvent& e) const;
  std::vector<SessionEvent> read() const;
  // Cuts a torn trailing line so later appends start on a fresh line.
  // Returns the number of bytes removed.
  std::size_t truncate_torn_tail() const;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

std::string encode_event(const SessionEvent& e);
SessionEvent decode_event(const std::string& line);

class ReviewService {
 public:
  explicit ReviewService(std::filesystem::path data_dir, std::size_t snapshot_every = 8);

  SessionSummary create_session(const CreateRequest& req);
  SessionSummary get_session(const std::string& id);
  BatchView get_pending_batch(const std::string& id);
  DecisionAck submit_decision(const std::string& id, ReviewDecision decision);
  AdvanceResult advance(const std::string& id);
  std::vector<Pattern> patterns(const std::string& id);
  SessionReport report(const std::string& id, const std::vector<std::size_t>& cuts);

  // Derived state as currently held in memory.
  SessionState state(const std::string& id);
  std::vector<std::string> session_ids();

  // Rebuilds a session purely from its directory (log + snapshot).
  static SessionState replay(const std::filesystem::path& session_dir);

  const std::filesystem::path& data_dir() const { return data_dir_; }

 private:
  struct Entry;
  std::shared_ptr<Entry> entry(const std::string& id);
  std::shared_ptr<Entry> load_entry(const std::string& id);
  void commit(Entry& e, const SessionEvent& ev, SessionState next);
  std::filesystem::path resolve(const std::string& p) const;

  std::filesystem::path data_dir_;
  std::size_t snapshot_every_;
  std::mutex registry_mutex_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
};

// GEN_DATA_DIR when set, else `fallback`.
std::filesystem::path resolve_data_dir(const std::filesystem::path& fallback);

// Transport-independent HTTP routing over a ReviewService.
struct HttpResponse {
  int status = 200;
  std::string body;  // JSON
};

HttpResponse handle_request(ReviewService& service, const std::string& method, const std::string& path,
                            const std::map<std::string, std::string>& query, const std::string& body);

// Blocking HTTP server. stop() may be called from another thread.
class HttpServer {
 public:
  explicit HttpServer(ReviewService& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Binds and returns the port (0 picks a free one); throws on failure.
  int bind(const std::string& host, int port);
  void listen();  // after bind; returns once stopped
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace gen
