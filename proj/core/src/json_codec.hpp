#pragma once

// nlohmann::json conversions shared by the JSON readers/writers and the HTTP
// service. Internal to the library.

#include <json.hpp>

#include "gen/json_io.hpp"

namespace gen {

using json = nlohmann::json;

void to_json(json& j, const Token& t);
void from_json(const json& j, Token& t);
void to_json(json& j, const ConstituencyNode& n);
void from_json(const json& j, ConstituencyNode& n);
void to_json(json& j, const DependencyEdge& e);
void from_json(const json& j, DependencyEdge& e);
void to_json(json& j, const TokenSpan& s);
void from_json(const json& j, TokenSpan& s);
void to_json(json& j, const SrlArgument& a);
void from_json(const json& j, SrlArgument& a);
void to_json(json& j, const SrlFrame& f);
void from_json(const json& j, SrlFrame& f);
void to_json(json& j, const AnnotatedSentence& s);
void from_json(const json& j, AnnotatedSentence& s);
void to_json(json& j, const Seed& s);

void to_json(json& j, const ArgumentStructure& a);
void from_json(const json& j, ArgumentStructure& a);
void to_json(json& j, const PredicateArgument& p);
void from_json(const json& j, PredicateArgument& p);
void to_json(json& j, const AlignedPair& p);
void from_json(const json& j, AlignedPair& p);
void to_json(json& j, const Alignment& a);
void from_json(const json& j, Alignment& a);
void to_json(json& j, const WeightUpdate& u);
void from_json(const json& j, WeightUpdate& u);
void to_json(json& j, const PatternWeight& w);
void from_json(const json& j, PatternWeight& w);
void to_json(json& j, const Pattern& p);
void from_json(const json& j, Pattern& p);

void to_json(json& j, const GeneratedQuestion& q);
void from_json(const json& j, GeneratedQuestion& q);
void to_json(json& j, const ReviewDecision& d);
void from_json(const json& j, ReviewDecision& d);

void to_json(json& j, const WeighingConfig& c);
void from_json(const json& j, WeighingConfig& c);
void to_json(json& j, const EquivConfig& c);
void from_json(const json& j, EquivConfig& c);
void to_json(json& j, const SessionConfig& c);
void from_json(const json& j, SessionConfig& c);
void to_json(json& j, const BatchPlan& p);
void from_json(const json& j, BatchPlan& p);
void to_json(json& j, const BatchStats& s);
void from_json(const json& j, BatchStats& s);
void to_json(json& j, const BatchRecord& r);
void from_json(const json& j, BatchRecord& r);
void to_json(json& j, const SessionState& s);
void from_json(const json& j, SessionState& s);

void to_json(json& j, const CutScores& c);
void to_json(json& j, const MetricReport& r);
void to_json(json& j, const BatchEvaluation& e);
void to_json(json& j, const SessionReport& r);

// Seed with an embedded sentence or a `sentence_ref` resolved in `corpus`.
Seed seed_from_json(const json& j, const std::vector<AnnotatedSentence>* corpus, std::size_t position);

json parse_json(const std::string& text, const std::string& what);

}  // namespace gen
