#pragma once

// Token alignment between a Q/A pair and its answer sentence, solved as an
// assignment problem.

#include <cstddef>
#include <optional>
#include <vector>

#include "gen/annotation.hpp"
#include "gen/similarity.hpp"

namespace gen {

struct ScoreMatrix {
  std::vector<std::size_t> rows;  // indices into the Q/A token list
  std::vector<std::size_t> cols;  // indices into the sentence tokens
  std::vector<std::vector<double>> cells;

  std::size_t row_count() const { return rows.size(); }
  std::size_t col_count() const { return cols.size(); }
  double at(std::size_t r, std::size_t c) const { return cells[r][c]; }

  static ScoreMatrix from_cells(std::vector<std::vector<double>> cells);
};

struct AlignedPair {
  std::size_t qa_index = 0;
  std::size_t s_index = 0;
  double score = 0.0;

  friend bool operator==(const AlignedPair&, const AlignedPair&) = default;
};

struct Alignment {
  std::vector<AlignedPair> pairs;  // ordered by qa_index
  double total_score = 0.0;

  std::optional<std::size_t> sentence_index_of(std::size_t qa_index) const;
  std::optional<std::size_t> qa_index_of(std::size_t s_index) const;
  bool injective() const;

  friend bool operator==(const Alignment&, const Alignment&) = default;
};

// Row i of the Q/A list is dropped when it is a stopword or equals `skip_row`
// (the Wh-word); sentence stopwords are dropped from the columns.
ScoreMatrix build_score_matrix(const std::vector<Token>& qa, const AnnotatedSentence& s,
                               const Equivalence& equiv, const Stopwords& stopwords,
                               std::optional<std::size_t> skip_row = std::nullopt);

// Minimum-cost square assignment (Hungarian method). Returns the column
// assigned to each row.
std::vector<std::size_t> solve_assignment(const std::vector<std::vector<double>>& cost);

// Maximum-score injective alignment. Scores are converted to costs
// `max - M_ij`, padded square with cost `max`, and solved; among optimal
// assignments the lexicographically smallest row->column vector is chosen.
// Zero-score pairs are dropped.
Alignment best_alignment(const ScoreMatrix& m);

// True iff every row of `m` (i.e. every content token) appears in `a`.
bool alignment_complete(const Alignment& a, const ScoreMatrix& m);

}  // namespace gen
