// gen: acquire patterns, generate and evaluate questions, simulate review
// sessions and serve the review API.

#include <algorithm>
#include <csignal>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gen/generation.hpp"
#include "gen/json_io.hpp"
#include "gen/metrics.hpp"
#include "gen/pattern.hpp"
#include "gen/service.hpp"
#include "gen/session.hpp"

namespace fs = std::filesystem;
using namespace gen;

namespace {

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');)
    if (!item.empty()) out.push_back(item);
  return out;
}

std::vector<std::size_t> parse_cuts(const std::string& s) {
  std::vector<std::size_t> cuts;
  for (const auto& item : split_list(s)) {
    const long v = std::stol(item);
    if (v <= 0) throw std::invalid_argument("top-N cuts must be positive: '" + item + "'");
    cuts.push_back(static_cast<std::size_t>(v));
  }
  if (cuts.empty()) throw std::invalid_argument("no top-N cuts given");
  return cuts;
}

std::vector<MatchStrategy> parse_strategies(const std::string& s) {
  std::vector<MatchStrategy> out;
  for (const auto& item : split_list(s)) out.push_back(strategy_from_string(item));
  if (out.empty()) throw std::invalid_argument("no match strategies given");
  return out;
}

ResourceBundle load_resources(const std::string& dir) {
  return dir.empty() ? ResourceBundle{} : ResourceBundle::load_directory(dir);
}

void emit(const std::string& out, const std::string& text) {
  if (out.empty() || out == "-") {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
  } else {
    write_text_file(out, text);
  }
}

void warn_all(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

// ---- acquire ----------------------------------------------------------------

struct AcquireOptions {
  std::string corpus, seeds, resources, out;
};

int run_acquire(const AcquireOptions& o) {
  std::vector<AnnotatedSentence> corpus;
  if (!o.corpus.empty()) corpus = load_corpus(o.corpus);
  const auto seeds = load_seeds(o.seeds, o.corpus.empty() ? nullptr : &corpus);
  const auto resources = load_resources(o.resources);
  const Equivalence equiv(resources, EquivConfig::acquisition());
  auto result = acquire_patterns(seeds, equiv);
  warn_all(result.warnings);
  for (const auto& r : result.rejected) {
    std::cerr << "rejected: seed " << r.seed_id;
    if (r.predicate_index) std::cerr << " predicate " << *r.predicate_index;
    std::cerr << ": " << r.reason << '\n';
  }
  PatternPool pool;
  pool.add_all(std::move(result.patterns));
  emit(o.out, dump_pattern_pool(pool));
  std::cerr << pool.size() << " pattern(s) from " << seeds.size() << " seed(s)\n";
  return 0;
}

// ---- generate ---------------------------------------------------------------

struct GenerateOptions {
  std::string patterns, corpus, resources, strategies = "strict,subtree,subtree_flex,argument", out;
};

int run_generate(const GenerateOptions& o) {
  const auto pool = parse_pattern_pool(read_text_file(o.patterns));
  const auto corpus = load_corpus(o.corpus);
  const auto resources = load_resources(o.resources);
  const Equivalence equiv(resources, EquivConfig::generation());
  auto questions = generate_batch(pool.patterns(), corpus, parse_strategies(o.strategies), equiv);
  questions = rank_questions(std::move(questions), pool);
  emit(o.out, dump_questions(questions));
  std::cerr << questions.size() << " question(s) from " << pool.size() << " pattern(s) over " << corpus.size()
            << " sentence(s)\n";
  return 0;
}

// ---- evaluate ---------------------------------------------------------------

struct EvaluateOptions {
  std::string hypotheses, reference, resources, metrics = "bleu1,bleu4,rouge,eacs,vecs,gms", top = "5,10,20", out;
};

std::string format_evaluation(const MetricReport& r, const std::vector<std::string>& metrics) {
  std::ostringstream os;
  if (r.empty) {
    os << "(no data)\n";
    return os.str();
  }
  char cell[32];
  os << "top-N  used";
  for (const auto& m : metrics) {
    std::snprintf(cell, sizeof cell, "  %-7s", m.c_str());
    os << cell;
  }
  os << '\n';
  for (const auto& c : r.cuts) {
    std::snprintf(cell, sizeof cell, "%5zu%s %4zu", c.cut, c.exceeds_list ? "!" : " ", c.used);
    os << cell;
    for (const auto& m : metrics) {
      double v = 0.0;
      if (m == "bleu1") v = c.bleu1;
      else if (m == "bleu4") v = c.bleu4;
      else if (m == "bleu1_best") v = c.bleu1_best;
      else if (m == "bleu4_best") v = c.bleu4_best;
      else if (m == "rouge") v = c.rouge_l;
      else if (m == "eacs") v = c.eacs;
      else if (m == "vecs") v = c.vecs;
      else if (m == "gms") v = c.gms;
      else if (m == "lev") v = c.best_lev;
      std::snprintf(cell, sizeof cell, "  %.4f ", v);
      os << cell;
    }
    os << '\n';
  }
  os << "(! cut larger than the list)\n";
  for (const auto& w : r.warnings) os << "warning: " << w << '\n';
  return os.str();
}

int run_evaluate(const EvaluateOptions& o) {
  static const std::vector<std::string> known = {"bleu1", "bleu4", "bleu1_best", "bleu4_best", "rouge",
                                                 "eacs",  "vecs",  "gms",        "lev"};
  const auto metrics = split_list(o.metrics);
  for (const auto& m : metrics)
    if (std::find(known.begin(), known.end(), m) == known.end()) throw std::invalid_argument("unknown metric '" + m + "'");
  const auto questions = parse_questions(read_text_file(o.hypotheses));
  const auto reference = load_reference(o.reference);
  const auto resources = load_resources(o.resources);

  // Hypotheses are scored in file order against the references of every
  // sentence they came from.
  std::vector<Words> ranked;
  std::vector<std::string> sentences;
  for (const auto& q : questions) {
    ranked.push_back(q.text);
    if (std::find(sentences.begin(), sentences.end(), q.source_sentence_id) == sentences.end())
      sentences.push_back(q.source_sentence_id);
  }
  std::vector<Words> refs;
  for (const auto& id : sentences)
    if (auto it = reference.find(id); it != reference.end()) refs.insert(refs.end(), it->second.begin(), it->second.end());

  const auto report = evaluate_topn(ranked, refs, parse_cuts(o.top),
                                    resources.embeddings.empty() ? nullptr : &resources.embeddings);
  std::cout << format_evaluation(report, metrics);
  if (!o.out.empty()) write_text_file(o.out, dump_metric_report(report));
  return 0;
}

// ---- simulate ---------------------------------------------------------------

struct SimulateOptions {
  std::string corpus, seeds, resources, reference, out;
  std::size_t batch_size = 10;
  std::string strategy = "ewaf", sim = "overlap", oracle = "reference", top = "5,10,20";
  std::string match_strategies = "strict,subtree,subtree_flex,argument";
  double th = 0.9, penalty = 0.2, bonus = 0.3, accept = 0.6;
  std::optional<std::uint64_t> shuffle_seed;
  bool no_harvest = false, no_weigh = false, no_prune = false, random_ranking = false;
};

int run_simulate(const SimulateOptions& o) {
  const auto corpus = load_corpus(o.corpus);
  const auto seeds = load_seeds(o.seeds, &corpus);
  const auto resources = load_resources(o.resources);
  Reference reference;
  if (!o.reference.empty()) reference = load_reference(o.reference);

  SessionConfig cfg;
  cfg.batch_size = o.batch_size;
  cfg.shuffle_seed = o.shuffle_seed;
  cfg.strategies = parse_strategies(o.match_strategies);
  cfg.weighing.strategy = weighing_strategy_from_string(o.strategy);
  cfg.weighing.sim = similarity_kind_from_string(o.sim);
  cfg.weighing.th = o.th;
  cfg.weighing.penalty = o.penalty;
  cfg.weighing.bonus = o.bonus;
  cfg.harvest = !o.no_harvest;
  cfg.weigh = !o.no_weigh;
  cfg.prune = !o.no_prune;
  cfg.ranking = o.random_ranking ? RankingMode::Random : RankingMode::Weighted;

  FeedbackOracle oracle = FeedbackOracle::scripted(ReviewAction::Kept);
  if (o.oracle == "reference") {
    if (o.reference.empty()) throw std::invalid_argument("--oracle reference needs --reference");
    oracle = FeedbackOracle::reference_based(reference, o.accept);
  } else if (o.oracle != "keep") {
    throw std::invalid_argument("unknown oracle '" + o.oracle + "'");
  }

  ReportOptions opts;
  opts.cuts = parse_cuts(o.top);
  const auto outcome = run_session(corpus, seeds, cfg, resources, oracle, o.reference.empty() ? nullptr : &reference, opts);
  std::cout << format_report(outcome.report);
  if (!o.out.empty()) write_text_file(o.out, dump_report(outcome.report));
  return 0;
}

// ---- serve ------------------------------------------------------------------

HttpServer* g_server = nullptr;

extern "C" void handle_signal(int) {
  if (g_server) g_server->stop();
}

int run_serve(const std::string& host, int port, const std::string& data_dir) {
  ReviewService service(resolve_data_dir(data_dir));
  HttpServer server(service);
  const int bound = server.bind(host, port);
  std::cerr << "serving " << service.data_dir().string() << " on http://" << host << ':' << bound << '\n';
  g_server = &server;
  std::signal(SIGINT, handle_signal);
  std::signal(SIGTERM, handle_signal);
  server.listen();
  g_server = nullptr;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pattern-based question generation"};
  app.require_subcommand(1);

  AcquireOptions acq;
  auto* acquire = app.add_subcommand("acquire", "Learn patterns from seed questions");
  acquire->add_option("--seeds", acq.seeds, "Seed file")->required()->check(CLI::ExistingFile);
  acquire->add_option("--corpus", acq.corpus, "Corpus the seeds refer to")->check(CLI::ExistingFile);
  acquire->add_option("--resources", acq.resources, "Lexical resource directory")->check(CLI::ExistingDirectory);
  acquire->add_option("--out", acq.out, "Pattern pool file (default stdout)");

  GenerateOptions gen_opts;
  auto* generate = app.add_subcommand("generate", "Generate questions from a pattern pool");
  generate->add_option("--patterns", gen_opts.patterns, "Pattern pool file")->required()->check(CLI::ExistingFile);
  generate->add_option("--corpus", gen_opts.corpus, "Corpus file")->required()->check(CLI::ExistingFile);
  generate->add_option("--resources", gen_opts.resources, "Lexical resource directory")->check(CLI::ExistingDirectory);
  generate->add_option("--strategies", gen_opts.strategies, "Comma-separated match strategies")->capture_default_str();
  generate->add_option("--out", gen_opts.out, "Question file (default stdout)");

  EvaluateOptions ev;
  auto* evaluate = app.add_subcommand("evaluate", "Score ranked questions against references");
  evaluate->add_option("--hypotheses", ev.hypotheses, "Question file, best first")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--reference", ev.reference, "Reference file")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--resources", ev.resources, "Resource directory with embeddings")->check(CLI::ExistingDirectory);
  evaluate->add_option("--metrics", ev.metrics, "Comma-separated metrics")->capture_default_str();
  evaluate->add_option("--top", ev.top, "Comma-separated top-N cuts")->capture_default_str();
  evaluate->add_option("--out", ev.out, "Also write the scores as JSON");

  SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "Run a review session with an automatic reviewer");
  simulate->add_option("--corpus", sim.corpus, "Corpus file")->required()->check(CLI::ExistingFile);
  simulate->add_option("--seeds", sim.seeds, "Seed file")->required()->check(CLI::ExistingFile);
  simulate->add_option("--resources", sim.resources, "Lexical resource directory")->check(CLI::ExistingDirectory);
  simulate->add_option("--batch-size", sim.batch_size, "Sentences per batch")->capture_default_str()->check(
      CLI::PositiveNumber);
  simulate->add_option("--strategy", sim.strategy, "Weighing strategy")->capture_default_str()->check(
      CLI::IsMember({"wma", "ewaf"}, CLI::ignore_case));
  simulate->add_option("--sim", sim.sim, "Question similarity")->capture_default_str()->check(
      CLI::IsMember({"overlap", "lev", "levenshtein"}, CLI::ignore_case));
  simulate->add_option("--th", sim.th, "Success threshold")->capture_default_str();
  simulate->add_option("--penalty", sim.penalty, "Loss rate")->capture_default_str();
  simulate->add_option("--bonus", sim.bonus, "Bonus rate (WMA)")->capture_default_str();
  simulate->add_option("--shuffle-seed", sim.shuffle_seed, "Shuffle the corpus before batching");
  simulate->add_option("--oracle", sim.oracle, "Automatic reviewer: reference or keep")->capture_default_str();
  simulate->add_option("--accept", sim.accept, "Reference oracle acceptance threshold")->capture_default_str();
  simulate->add_option("--reference", sim.reference, "Reference file")->check(CLI::ExistingFile);
  simulate->add_option("--match-strategies", sim.match_strategies, "Comma-separated match strategies")
      ->capture_default_str();
  simulate->add_option("--top", sim.top, "Comma-separated top-N cuts")->capture_default_str();
  simulate->add_flag("--no-harvest", sim.no_harvest, "Do not learn new seeds from reviews");
  simulate->add_flag("--no-weigh", sim.no_weigh, "Do not update pattern weights");
  simulate->add_flag("--no-prune", sim.no_prune, "Do not drop failing patterns");
  simulate->add_flag("--random-ranking", sim.random_ranking, "Rank questions randomly");
  simulate->add_option("--out", sim.out, "Also write the report as JSON");

  std::string host = "127.0.0.1", data_dir = "gen-data";
  int port = 8080;
  auto* serve = app.add_subcommand("serve", "Serve the review API");
  serve->add_option("--port", port, "Port (0 picks a free one)")->capture_default_str()->check(CLI::Range(0, 65535));
  serve->add_option("--host", host, "Address to bind")->capture_default_str();
  serve->add_option("--data-dir", data_dir, "Session directory; GEN_DATA_DIR overrides it")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*acquire) return run_acquire(acq);
    if (*generate) return run_generate(gen_opts);
    if (*evaluate) return run_evaluate(ev);
    if (*simulate) return run_simulate(sim);
    if (*serve) return run_serve(host, port, data_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
