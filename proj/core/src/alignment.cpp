#include "gen/alignment.hpp"

#include <algorithm>
#include <limits>
#include <set>

namespace gen {

namespace {

constexpr double kTieEpsilon = 1e-9;

double assignment_cost(const std::vector<std::vector<double>>& cost, const std::vector<std::size_t>& col_of) {
  double total = 0.0;
  for (std::size_t r = 0; r < col_of.size(); ++r) total += cost[r][col_of[r]];
  return total;
}

}  // namespace

ScoreMatrix ScoreMatrix::from_cells(std::vector<std::vector<double>> cells) {
  ScoreMatrix m;
  m.cells = std::move(cells);
  for (std::size_t r = 0; r < m.cells.size(); ++r) m.rows.push_back(r);
  if (!m.cells.empty())
    for (std::size_t c = 0; c < m.cells.front().size(); ++c) m.cols.push_back(c);
  return m;
}

std::optional<std::size_t> Alignment::sentence_index_of(std::size_t qa_index) const {
  for (const auto& p : pairs)
    if (p.qa_index == qa_index) return p.s_index;
  return std::nullopt;
}

std::optional<std::size_t> Alignment::qa_index_of(std::size_t s_index) const {
  for (const auto& p : pairs)
    if (p.s_index == s_index) return p.qa_index;
  return std::nullopt;
}

bool Alignment::injective() const {
  std::set<std::size_t> q, s;
  for (const auto& p : pairs) {
    if (!q.insert(p.qa_index).second || !s.insert(p.s_index).second) return false;
  }
  return true;
}

ScoreMatrix build_score_matrix(const std::vector<Token>& qa, const AnnotatedSentence& s,
                               const Equivalence& equiv, const Stopwords& stopwords,
                               std::optional<std::size_t> skip_row) {
  ScoreMatrix m;
  for (std::size_t i = 0; i < qa.size(); ++i) {
    if (skip_row && *skip_row == i) continue;
    if (qa[i].is_stopword || stopwords.contains(qa[i].surface)) continue;
    m.rows.push_back(i);
  }
  for (std::size_t j = 0; j < s.tokens.size(); ++j) {
    if (s.tokens[j].is_stopword || stopwords.contains(s.tokens[j].surface)) continue;
    m.cols.push_back(j);
  }
  m.cells.assign(m.rows.size(), std::vector<double>(m.cols.size(), 0.0));
  for (std::size_t r = 0; r < m.rows.size(); ++r)
    for (std::size_t c = 0; c < m.cols.size(); ++c) m.cells[r][c] = equiv(qa[m.rows[r]], s.tokens[m.cols[c]]);
  return m;
}

std::vector<std::size_t> solve_assignment(const std::vector<std::vector<double>>& cost) {
  // Potentials-based Hungarian method over a square matrix, 1-based internally.
  const std::size_t n = cost.size();
  if (n == 0) return {};
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    match[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = match[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> col_of(n, 0);
  for (std::size_t j = 1; j <= n; ++j) col_of[match[j] - 1] = j - 1;
  return col_of;
}

Alignment best_alignment(const ScoreMatrix& m) {
  Alignment out;
  const std::size_t rows = m.row_count();
  const std::size_t cols = m.col_count();
  if (rows == 0 || cols == 0) return out;

  double max_score = 0.0;
  for (const auto& row : m.cells)
    for (double x : row) max_score = std::max(max_score, x);

  const std::size_t n = std::max(rows, cols);
  std::vector<std::vector<double>> cost(n, std::vector<double>(n, max_score));
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) cost[r][c] = max_score - m.cells[r][c];

  const double optimum = assignment_cost(cost, solve_assignment(cost));
  const double forbidden = (max_score + 1.0) * static_cast<double>(n + 1) * 4.0;

  // Fix rows one at a time to the smallest column that keeps the optimum reachable.
  std::vector<std::size_t> fixed_col(rows, n);
  auto constrained = cost;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      if (constrained[r][c] >= forbidden) continue;
      auto trial = constrained;
      for (std::size_t k = 0; k < n; ++k) {
        if (k != c) trial[r][k] = forbidden;
        if (k != r) trial[k][c] = forbidden;
      }
      const auto assignment = solve_assignment(trial);
      if (assignment_cost(trial, assignment) <= optimum + kTieEpsilon) {
        fixed_col[r] = c;
        constrained = std::move(trial);
        break;
      }
    }
  }

  for (std::size_t r = 0; r < rows; ++r) {
    const std::size_t c = fixed_col[r];
    if (c >= cols) continue;
    const double score = m.cells[r][c];
    if (score <= 0.0) continue;
    out.pairs.push_back({m.rows[r], m.cols[c], score});
    out.total_score += score;
  }
  std::sort(out.pairs.begin(), out.pairs.end(),
            [](const AlignedPair& a, const AlignedPair& b) { return a.qa_index < b.qa_index; });
  return out;
}

bool alignment_complete(const Alignment& a, const ScoreMatrix& m) {
  for (auto row : m.rows)
    if (!a.sentence_index_of(row)) return false;
  return true;
}

}  // namespace gen
