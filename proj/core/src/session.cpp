#include "gen/session.hpp"

#include <algorithm>
#include <cstdio>
#include <iomanip>
#include <set>
#include <sstream>

namespace gen {

BatchPlan plan_batches(const std::vector<std::string>& sentence_ids, std::size_t batch_size,
                       std::optional<std::uint64_t> shuffle_seed) {
  if (sentence_ids.empty()) throw std::invalid_argument("cannot plan batches over an empty corpus");
  if (batch_size == 0) throw std::invalid_argument("batch size must be at least 1");
  BatchPlan plan;
  plan.batch_size = batch_size;
  plan.shuffle_seed = shuffle_seed;
  auto ids = sentence_ids;
  if (shuffle_seed) seeded_shuffle(ids, *shuffle_seed);
  for (std::size_t i = 0; i < ids.size(); i += batch_size) {
    const auto end = std::min(ids.size(), i + batch_size);
    plan.batches.emplace_back(ids.begin() + static_cast<std::ptrdiff_t>(i),
                              ids.begin() + static_cast<std::ptrdiff_t>(end));
  }
  return plan;
}

std::vector<GeneratedQuestion> rank_questions(std::vector<GeneratedQuestion> questions, const PatternPool& pool,
                                              RankingMode mode, std::uint64_t seed) {
  for (auto& q : questions) {
    if (const auto* p = pool.find(q.pattern_id)) q.rank_score = p->weight.w;
  }
  if (mode == RankingMode::Random) {
    seeded_shuffle(questions, seed);
  } else {
    std::stable_sort(questions.begin(), questions.end(),
                     [](const GeneratedQuestion& a, const GeneratedQuestion& b) { return a.rank_score > b.rank_score; });
  }
  return questions;
}

std::vector<std::string> validate(const SessionConfig& cfg) {
  if (cfg.batch_size == 0) throw std::invalid_argument("batch size must be at least 1");
  if (cfg.strategies.empty()) throw std::invalid_argument("at least one match strategy is required");
  gen::validate(cfg.equiv);
  return validate(cfg.weighing);
}

const GeneratedQuestion* BatchRecord::question(const std::string& id) const {
  for (const auto& q : questions)
    if (q.id == id) return &q;
  return nullptr;
}

const ReviewDecision* BatchRecord::decision(const std::string& id) const {
  for (const auto& d : decisions)
    if (d.question_id == id) return &d;
  return nullptr;
}

std::vector<std::string> BatchRecord::undecided() const {
  std::vector<std::string> out;
  for (const auto& q : questions)
    if (!decision(q.id)) out.push_back(q.id);
  return out;
}

std::string to_string(SessionStatus s) {
  switch (s) {
    case SessionStatus::Created: return "created";
    case SessionStatus::Reviewing: return "reviewing";
    case SessionStatus::Complete: return "complete";
  }
  return "unknown";
}

std::size_t SessionState::iteration() const {
  return static_cast<std::size_t>(
      std::count_if(batches.begin(), batches.end(), [](const BatchRecord& b) { return b.closed; }));
}

BatchRecord* SessionState::pending() {
  return !batches.empty() && !batches.back().closed ? &batches.back() : nullptr;
}

const BatchRecord* SessionState::pending() const {
  return !batches.empty() && !batches.back().closed ? &batches.back() : nullptr;
}

std::vector<BatchStats> SessionState::stats() const {
  std::vector<BatchStats> out;
  for (const auto& b : batches)
    if (b.stats) out.push_back(*b.stats);
  return out;
}

const AnnotatedSentence* SessionContext::sentence(const std::string& id) const {
  if (!corpus) return nullptr;
  for (const auto& s : *corpus)
    if (s.id == id) return &s;
  return nullptr;
}

SessionState start_session(const std::vector<AnnotatedSentence>& corpus, std::vector<Seed> seeds,
                           const SessionConfig& cfg) {
  SessionState state;
  state.warnings = validate(cfg);
  state.config = cfg;
  std::vector<std::string> ids;
  for (const auto& s : corpus) ids.push_back(s.id);
  state.plan = plan_batches(ids, cfg.batch_size, cfg.shuffle_seed);
  if (seeds.empty()) state.warnings.push_back("session started without seeds; no patterns can be learned");
  state.seeds = std::move(seeds);
  return state;
}

void open_batch(SessionState& state, const SessionContext& ctx) {
  if (state.pending() || state.status == SessionStatus::Complete) return;
  const std::size_t index = state.batches.size();
  if (index >= state.plan.batches.size()) {
    state.status = SessionStatus::Complete;
    return;
  }
  const Equivalence equiv(*ctx.resources, state.config.equiv);

  BatchRecord rec;
  rec.index = index;
  rec.sentence_ids = state.plan.batches[index];

  auto acquired = acquire_patterns(state.seeds, equiv, static_cast<int>(index));
  state.seeds.clear();
  for (auto& p : acquired.patterns) {
    const auto id = p.id;
    if (state.pool.add(std::move(p))) rec.new_patterns.push_back(id);
  }
  rec.pool_size = state.pool.size();

  std::vector<AnnotatedSentence> sentences;
  for (const auto& id : rec.sentence_ids) {
    const auto* s = ctx.sentence(id);
    if (!s) throw SessionError(SessionError::Kind::NotFound, "sentence " + id + " is not in the corpus", {id});
    sentences.push_back(*s);
  }
  auto questions = generate_batch(state.pool.patterns(), sentences, state.config.strategies, equiv);
  rec.questions = rank_questions(std::move(questions), state.pool, state.config.ranking,
                                 state.config.ranking_seed + index);
  state.batches.push_back(std::move(rec));
  state.status = SessionStatus::Reviewing;
}

bool type_changed(const std::vector<std::string>& generated, const std::vector<std::string>& corrected) {
  if (generated.empty() || corrected.empty()) return false;
  return to_lower(generated.front()) != to_lower(corrected.front());
}

void submit_decision(SessionState& state, ReviewDecision decision) {
  BatchRecord* rec = state.pending();
  if (!rec) throw SessionError(SessionError::Kind::Conflict, "no batch is awaiting review");
  const auto* q = rec->question(decision.question_id);
  if (!q) {
    throw SessionError(SessionError::Kind::NotFound,
                       "question " + decision.question_id + " is not pending review", {decision.question_id});
  }
  try {
    validate(decision);
  } catch (const std::invalid_argument& e) {
    throw SessionError(SessionError::Kind::Invalid, e.what(), {decision.question_id});
  }
  if (decision.corrected_text && !decision.type_changed)
    decision.type_changed = type_changed(q->text, *decision.corrected_text);
  if (const auto* prior = rec->decision(decision.question_id)) {
    if (*prior == decision) return;
    throw SessionError(SessionError::Kind::Conflict,
                       "question " + decision.question_id + " already has a different decision",
                       {decision.question_id});
  }
  rec->decisions.push_back(std::move(decision));
}

namespace {

BatchStats compute_stats(const BatchRecord& rec) {
  BatchStats s;
  s.batch = rec.index + 1;
  s.patterns = rec.pool_size;
  s.new_patterns = rec.new_patterns.size();
  s.questions = rec.questions.size();
  std::set<std::string> texts;
  for (const auto& q : rec.questions) texts.insert(q.question_string());
  s.unique = texts.size();
  double edit = 0.0;
  std::size_t edited = 0;
  for (const auto& q : rec.questions) {
    const auto* d = rec.decision(q.id);
    if (!d || d->action == ReviewAction::Discarded) {
      ++s.discarded;
      continue;
    }
    edit += 1.0 - sim_levenshtein(q.text, d->corrected_text ? *d->corrected_text : q.text);
    ++edited;
  }
  s.discarded_pct = s.questions ? 100.0 * static_cast<double>(s.discarded) / static_cast<double>(s.questions) : 0.0;
  s.edit_avg = edited ? edit / static_cast<double>(edited) : 0.0;
  return s;
}

}  // namespace

BatchStats close_batch(SessionState& state, const SessionContext& ctx) {
  BatchRecord* rec = state.pending();
  if (!rec) throw SessionError(SessionError::Kind::Conflict, "no batch is awaiting review");
  if (auto open = rec->undecided(); !open.empty()) {
    throw SessionError(SessionError::Kind::Conflict,
                       std::to_string(open.size()) + " question(s) still need a decision", open);
  }
  if (state.config.harvest) {
    std::vector<AnnotatedSentence> sentences;
    for (const auto& id : rec->sentence_ids)
      if (const auto* s = ctx.sentence(id)) sentences.push_back(*s);
    auto h = harvest_seeds(rec->decisions, rec->questions, sentences, state.pool, ctx.resources->stopwords);
    rec->harvested = h.seeds.size();
    state.seeds.insert(state.seeds.end(), std::make_move_iterator(h.seeds.begin()),
                       std::make_move_iterator(h.seeds.end()));
  }
  if (state.config.weigh) apply_weights(state.pool, rec->questions, rec->decisions, state.config.weighing);
  if (state.config.prune) rec->pruned = prune_patterns(state.pool, rec->questions, rec->decisions);
  rec->stats = compute_stats(*rec);
  rec->closed = true;
  if (state.batches.size() >= state.plan.batches.size()) state.status = SessionStatus::Complete;
  return *rec->stats;
}

BatchStats advance(SessionState& state, const SessionContext& ctx) {
  auto stats = close_batch(state, ctx);
  open_batch(state, ctx);
  return stats;
}

FeedbackOracle FeedbackOracle::reference_based(Reference reference, double accept_threshold) {
  FeedbackOracle o;
  o.mode_ = Mode::ReferenceBased;
  o.reference_ = std::move(reference);
  o.accept_threshold_ = accept_threshold;
  return o;
}

FeedbackOracle FeedbackOracle::scripted(ReviewAction fallback) {
  FeedbackOracle o;
  o.mode_ = Mode::Scripted;
  o.fallback_ = fallback;
  return o;
}

FeedbackOracle& FeedbackOracle::on_question(const std::string& question_id, ReviewDecision d) {
  d.question_id = question_id;
  by_question_[question_id] = std::move(d);
  return *this;
}

FeedbackOracle& FeedbackOracle::on_pattern(const std::string& pattern_id, ReviewAction action) {
  by_pattern_[pattern_id] = action;
  return *this;
}

FeedbackOracle& FeedbackOracle::on_pattern_seed(const std::string& seed_id, ReviewAction action) {
  by_seed_[seed_id] = action;
  return *this;
}

ReviewDecision FeedbackOracle::review(const GeneratedQuestion& q, const PatternPool& pool) const {
  ReviewDecision d;
  d.question_id = q.id;
  if (mode_ == Mode::ReferenceBased) {
    const Words* best = nullptr;
    double score = -1.0;
    if (auto it = reference_.find(q.source_sentence_id); it != reference_.end()) {
      for (const auto& r : it->second) {
        const double s = sim_levenshtein(q.text, r);
        if (s > score) {
          score = s;
          best = &r;
        }
      }
    }
    if (!best || score < accept_threshold_) {
      d.action = ReviewAction::Discarded;
      return d;
    }
    d.action = score == 1.0 ? ReviewAction::Kept : ReviewAction::Edited;
    d.corrected_text = d.action == ReviewAction::Kept ? q.text : *best;
    d.type_changed = type_changed(q.text, *d.corrected_text);
    return d;
  }

  ReviewAction action = fallback_;
  if (auto it = by_question_.find(q.id); it != by_question_.end()) return it->second;
  if (auto it = by_pattern_.find(q.pattern_id); it != by_pattern_.end()) {
    action = it->second;
  } else if (const auto* p = pool.find(q.pattern_id)) {
    if (auto s = by_seed_.find(p->seed_id); s != by_seed_.end()) action = s->second;
  }
  d.action = action;
  if (action != ReviewAction::Discarded) d.corrected_text = q.text;
  return d;
}

BatchStats run_iteration(SessionState& state, const SessionContext& ctx, const FeedbackOracle& oracle) {
  open_batch(state, ctx);
  BatchRecord* rec = state.pending();
  if (!rec) throw SessionError(SessionError::Kind::Conflict, "no batch left to run");
  for (const auto& q : rec->questions) {
    if (!rec->decision(q.id)) submit_decision(state, oracle.review(q, state.pool));
  }
  return close_batch(state, ctx);
}

SessionReport build_report(const SessionState& state, const Reference* reference, const EmbeddingTable* table,
                           const ReportOptions& opts) {
  SessionReport report;
  report.stats = state.stats();
  report.warnings = state.warnings;
  if (!reference) return report;

  std::vector<MetricReport> window_ranked, window_baseline;
  for (const auto& rec : state.batches) {
    if (!rec.closed) continue;
    std::vector<Words> refs;
    for (const auto& id : rec.sentence_ids) {
      if (auto it = reference->find(id); it != reference->end()) refs.insert(refs.end(), it->second.begin(), it->second.end());
    }
    std::vector<Words> ranked;
    for (const auto& q : rec.questions) ranked.push_back(q.text);

    BatchEvaluation ev;
    ev.batch = rec.index + 1;
    ev.ranked = evaluate_topn(ranked, refs, opts.cuts, table);
    std::vector<MetricReport> random;
    for (std::size_t k = 0; k < opts.baseline_orderings; ++k) {
      auto shuffled = ranked;
      seeded_shuffle(shuffled, opts.baseline_seed + k);
      random.push_back(evaluate_topn(shuffled, refs, opts.cuts, table));
    }
    ev.random_baseline = average_reports(random);
    ev.random_baseline.warnings.clear();
    // Every ordering scores the same number of questions.
    for (std::size_t i = 0; i < ev.random_baseline.cuts.size() && i < ev.ranked.cuts.size(); ++i)
      ev.random_baseline.cuts[i].used = ev.ranked.cuts[i].used;
    if (rec.index >= opts.skip_batches) {
      window_ranked.push_back(ev.ranked);
      window_baseline.push_back(ev.random_baseline);
    }
    report.batches.push_back(std::move(ev));
  }
  if (window_ranked.empty()) {
    report.warnings.push_back("first batch excluded leaves no data for the evaluation window");
    report.window_ranked.empty = true;
    report.window_baseline.empty = true;
    return report;
  }
  report.window_ranked = average_reports(window_ranked);
  report.window_baseline = average_reports(window_baseline);
  report.window_ranked.warnings.clear();
  report.window_baseline.warnings.clear();
  return report;
}

std::string format_stats_table(const std::vector<BatchStats>& stats) {
  std::ostringstream os;
  os << "batch  patterns  new  questions  unique  discarded      %  edit avg\n";
  char line[128];
  for (const auto& s : stats) {
    std::snprintf(line, sizeof line, "%5zu  %8zu  %3zu  %9zu  %6zu  %9zu  %5.1f  %8.3f\n", s.batch, s.patterns,
                  s.new_patterns, s.questions, s.unique, s.discarded, s.discarded_pct, s.edit_avg);
    os << line;
  }
  return os.str();
}

namespace {

void format_metrics(std::ostringstream& os, const std::string& title, const MetricReport& r) {
  os << title << '\n';
  if (r.empty) {
    os << "  (no data)\n";
    return;
  }
  os << "  top-N  used  bleu1   bleu4   bleu1*  bleu4*  rougeL  eacs    vecs    gms     lev\n";
  char line[192];
  for (const auto& c : r.cuts) {
    std::snprintf(line, sizeof line, "  %5zu%s %4zu  %.4f  %.4f  %.4f  %.4f  %.4f  %.4f  %.4f  %.4f  %.4f\n", c.cut,
                  c.exceeds_list ? "!" : " ", c.used, c.bleu1, c.bleu4, c.bleu1_best, c.bleu4_best, c.rouge_l,
                  c.eacs, c.vecs, c.gms, c.best_lev);
    os << line;
  }
}

}  // namespace

std::string format_report(const SessionReport& report) {
  std::ostringstream os;
  os << format_stats_table(report.stats);
  if (!report.batches.empty()) {
    os << '\n';
    format_metrics(os, "ranked, batches 2..end", report.window_ranked);
    format_metrics(os, "random order (mean of orderings), batches 2..end", report.window_baseline);
    os << "(* scored against the closest single reference; ! cut larger than the batch)\n";
  }
  for (const auto& w : report.warnings) os << "warning: " << w << '\n';
  return os.str();
}

SessionOutcome run_session(const std::vector<AnnotatedSentence>& corpus, std::vector<Seed> seeds,
                           const SessionConfig& cfg, const ResourceBundle& resources, const FeedbackOracle& oracle,
                           const Reference* reference, const ReportOptions& opts) {
  SessionOutcome out;
  const bool no_seeds = seeds.empty();
  out.state = start_session(corpus, std::move(seeds), cfg);
  if (no_seeds) {
    out.report = build_report(out.state, nullptr, nullptr, opts);
    return out;
  }
  const SessionContext ctx{&corpus, &resources};
  while (out.state.batches.size() < out.state.plan.batches.size()) run_iteration(out.state, ctx, oracle);
  out.report = build_report(out.state, reference, resources.embeddings.empty() ? nullptr : &resources.embeddings,
                            opts);
  return out;
}

}  // namespace gen
