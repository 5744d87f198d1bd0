#pragma once

// Reference-based evaluation of generated questions: corpus BLEU, ROUGE-L,
// embedding-based scores, and top-N cuts over a ranked list.

#include <string>
#include <vector>

#include "gen/resources.hpp"

namespace gen {

using Words = std::vector<std::string>;

// Corpus-level BLEU-n with uniform weights. references[i] are the acceptable
// texts for candidates[i]; counts are clipped by the maximum count in any
// reference and the brevity penalty uses the closest reference length
// (shorter on ties). Throws std::invalid_argument on an empty candidate set
// or n outside 1..4.
double bleu(const std::vector<Words>& candidates, const std::vector<std::vector<Words>>& references, int n);

// Same candidates, each scored against only the reference closest to it by
// word-level Levenshtein similarity.
double bleu_best_reference(const std::vector<Words>& candidates, const std::vector<std::vector<Words>>& references,
                           int n);

inline constexpr double kRougeBeta = 1.2;

std::size_t lcs_length(const Words& a, const Words& b);
// LCS F-measure, maximum over references.
double rouge_l(const Words& candidate, const std::vector<Words>& references, double beta = kRougeBeta);

struct EmbeddingScores {
  double eacs = 0.0;  // cosine of mean vectors
  double vecs = 0.0;  // cosine of per-dimension extrema
  double gms = 0.0;   // greedy matching, averaged in both directions
  bool out_of_vocabulary = false;
};

// Maximum over references, per score.
EmbeddingScores embedding_metrics(const Words& candidate, const std::vector<Words>& references,
                                  const EmbeddingTable& table);

struct CutScores {
  std::size_t cut = 0;
  std::size_t used = 0;          // questions actually scored
  bool exceeds_list = false;     // cut larger than the ranked list
  double bleu1 = 0.0;
  double bleu4 = 0.0;
  double bleu1_best = 0.0;
  double bleu4_best = 0.0;
  double rouge_l = 0.0;
  double eacs = 0.0;
  double vecs = 0.0;
  double gms = 0.0;
  double best_lev = 0.0;         // mean similarity to the closest reference

  friend bool operator==(const CutScores&, const CutScores&) = default;
};

struct MetricReport {
  bool empty = false;
  std::vector<CutScores> cuts;
  std::vector<std::string> warnings;

  friend bool operator==(const MetricReport&, const MetricReport&) = default;
};

// Scores the top `cut` entries of `ranked` against a pooled reference list.
// `table` may be null, in which case embedding scores stay 0. Embedding
// scores average only the questions with at least one known word.
MetricReport evaluate_topn(const std::vector<Words>& ranked, const std::vector<Words>& reference,
                           const std::vector<std::size_t>& cuts, const EmbeddingTable* table);

// Element-wise mean of several reports with identical cuts.
MetricReport average_reports(const std::vector<MetricReport>& reports);

}  // namespace gen
