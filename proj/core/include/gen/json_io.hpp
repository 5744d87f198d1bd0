#pragma once

// JSON files: annotated corpora, seeds, references, pattern pools, generated
// questions, review decisions and full session snapshots. Every reader
// rejects schema violations with a ValidationError naming the record and
// field; every writer/reader pair round-trips exactly.

#include <filesystem>
#include <string>
#include <vector>

#include "gen/annotation.hpp"
#include "gen/feedback.hpp"
#include "gen/generation.hpp"
#include "gen/pattern.hpp"
#include "gen/session.hpp"

namespace gen {

inline constexpr int kSchemaVersion = 1;

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

std::vector<AnnotatedSentence> parse_corpus(const std::string& json);
std::vector<AnnotatedSentence> load_corpus(const std::filesystem::path& path);
std::string dump_corpus(const std::vector<AnnotatedSentence>& corpus);

// Seeds may embed their sentence or refer to one in `corpus` by id.
std::vector<Seed> parse_seeds(const std::string& json, const std::vector<AnnotatedSentence>* corpus = nullptr);
std::vector<Seed> load_seeds(const std::filesystem::path& path, const std::vector<AnnotatedSentence>* corpus = nullptr);
std::string dump_seeds(const std::vector<Seed>& seeds);

// {"schema_version": 1, "reference": {"<sentence id>": ["question", ...]}};
// questions may also be token arrays.
Reference parse_reference(const std::string& json);
Reference load_reference(const std::filesystem::path& path);
std::string dump_reference(const Reference& reference);

PatternPool parse_pattern_pool(const std::string& json);
std::string dump_pattern_pool(const PatternPool& pool);

std::vector<GeneratedQuestion> parse_questions(const std::string& json);
std::string dump_questions(const std::vector<GeneratedQuestion>& questions);

std::vector<ReviewDecision> parse_decisions(const std::string& json);
std::string dump_decisions(const std::vector<ReviewDecision>& decisions);

SessionConfig parse_session_config(const std::string& json);
std::string dump_session_config(const SessionConfig& cfg);

SessionState parse_session_state(const std::string& json);
std::string dump_session_state(const SessionState& state);

std::string dump_report(const SessionReport& report);
std::string dump_metric_report(const MetricReport& report);

}  // namespace gen
