#include "gen/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <stdexcept>

#include "gen/annotation.hpp"
#include "gen/feedback.hpp"

namespace gen {

namespace {

Words normalize(const Words& in) {
  std::string joined;
  for (const auto& w : in) joined += w + ' ';
  Words out;
  for (auto& w : tokenize(joined)) out.push_back(to_lower(std::move(w)));
  return out;
}

std::map<Words, std::size_t> ngram_counts(const Words& w, int n) {
  std::map<Words, std::size_t> out;
  const auto k = static_cast<std::size_t>(n);
  for (std::size_t i = 0; i + k <= w.size(); ++i) ++out[Words(w.begin() + i, w.begin() + i + k)];
  return out;
}

std::size_t closest_length(std::size_t c, const std::vector<Words>& refs) {
  std::size_t best = refs.front().size();
  for (const auto& r : refs) {
    const auto d = static_cast<long>(r.size()) - static_cast<long>(c);
    const auto bd = static_cast<long>(best) - static_cast<long>(c);
    if (std::labs(d) < std::labs(bd) || (std::labs(d) == std::labs(bd) && r.size() < best)) best = r.size();
  }
  return best;
}

double cos_exact(const std::vector<double>& a, const std::vector<double>& b) {
  if (a == b) {
    for (double x : a)
      if (x != 0.0) return 1.0;
    return 0.0;
  }
  return cosine(a, b);
}

std::vector<std::vector<double>> vectors_of(const Words& w, const EmbeddingTable& table) {
  std::vector<std::vector<double>> out;
  for (const auto& t : w)
    if (const auto* v = table.find(t)) out.push_back(*v);
  return out;
}

EmbeddingScores score_pair(const std::vector<std::vector<double>>& a, const std::vector<std::vector<double>>& b,
                           std::size_t dim) {
  EmbeddingScores s;
  if (a.empty() || b.empty()) {
    s.out_of_vocabulary = true;
    return s;
  }
  auto mean = [dim](const std::vector<std::vector<double>>& vs) {
    std::vector<double> m(dim, 0.0);
    for (const auto& v : vs)
      for (std::size_t d = 0; d < dim; ++d) m[d] += v[d];
    for (auto& x : m) x /= static_cast<double>(vs.size());
    return m;
  };
  auto extrema = [dim](const std::vector<std::vector<double>>& vs) {
    std::vector<double> m(dim, 0.0);
    for (const auto& v : vs)
      for (std::size_t d = 0; d < dim; ++d)
        if (std::fabs(v[d]) > std::fabs(m[d])) m[d] = v[d];
    return m;
  };
  auto greedy = [](const std::vector<std::vector<double>>& from, const std::vector<std::vector<double>>& to) {
    double total = 0.0;
    for (const auto& v : from) {
      double best = -1.0;
      for (const auto& u : to) best = std::max(best, cos_exact(v, u));
      total += best;
    }
    return total / static_cast<double>(from.size());
  };
  s.eacs = cos_exact(mean(a), mean(b));
  s.vecs = cos_exact(extrema(a), extrema(b));
  s.gms = (greedy(a, b) + greedy(b, a)) / 2.0;
  return s;
}

}  // namespace

double bleu(const std::vector<Words>& candidates_in, const std::vector<std::vector<Words>>& references_in, int n) {
  if (n < 1 || n > 4) throw std::invalid_argument("BLEU order must lie in 1..4");
  if (candidates_in.empty()) throw std::invalid_argument("BLEU needs at least one candidate");
  if (references_in.size() != candidates_in.size())
    throw std::invalid_argument("BLEU needs one reference list per candidate");

  std::vector<std::size_t> matched(static_cast<std::size_t>(n), 0), total(static_cast<std::size_t>(n), 0);
  std::size_t cand_len = 0, ref_len = 0;
  for (std::size_t i = 0; i < candidates_in.size(); ++i) {
    const auto cand = normalize(candidates_in[i]);
    std::vector<Words> refs;
    for (const auto& r : references_in[i]) refs.push_back(normalize(r));
    if (refs.empty()) throw std::invalid_argument("BLEU candidate without references");
    cand_len += cand.size();
    ref_len += closest_length(cand.size(), refs);
    for (int k = 1; k <= n; ++k) {
      const auto counts = ngram_counts(cand, k);
      std::map<Words, std::size_t> max_ref;
      for (const auto& r : refs)
        for (const auto& [g, c] : ngram_counts(r, k)) max_ref[g] = std::max(max_ref[g], c);
      for (const auto& [g, c] : counts) {
        auto it = max_ref.find(g);
        matched[static_cast<std::size_t>(k - 1)] += std::min(c, it == max_ref.end() ? 0 : it->second);
        total[static_cast<std::size_t>(k - 1)] += c;
      }
    }
  }
  double log_sum = 0.0;
  for (int k = 0; k < n; ++k) {
    const auto m = matched[static_cast<std::size_t>(k)];
    const auto t = total[static_cast<std::size_t>(k)];
    if (m == 0 || t == 0) return 0.0;
    log_sum += std::log(static_cast<double>(m) / static_cast<double>(t));
  }
  const double bp = cand_len > ref_len ? 1.0
                                       : std::exp(1.0 - static_cast<double>(ref_len) / static_cast<double>(cand_len));
  return bp * std::exp(log_sum / n);
}

double bleu_best_reference(const std::vector<Words>& candidates, const std::vector<std::vector<Words>>& references,
                           int n) {
  if (references.size() != candidates.size())
    throw std::invalid_argument("BLEU needs one reference list per candidate");
  std::vector<std::vector<Words>> best(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const Words* pick = nullptr;
    double score = -1.0;
    for (const auto& r : references[i]) {
      const double s = sim_levenshtein(candidates[i], r);
      if (s > score) {
        score = s;
        pick = &r;
      }
    }
    if (pick) best[i].push_back(*pick);
  }
  return bleu(candidates, best, n);
}

std::size_t lcs_length(const Words& a, const Words& b) {
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j)
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

double rouge_l(const Words& candidate_in, const std::vector<Words>& references, double beta) {
  const auto cand = normalize(candidate_in);
  double best = 0.0;
  for (const auto& r_in : references) {
    const auto ref = normalize(r_in);
    if (cand.empty() || ref.empty()) {
      if (cand.empty() && ref.empty()) best = std::max(best, 1.0);
      continue;
    }
    const auto lcs = static_cast<double>(lcs_length(cand, ref));
    if (lcs == 0.0) continue;
    const double p = lcs / static_cast<double>(cand.size());
    const double r = lcs / static_cast<double>(ref.size());
    const double f = (1.0 + beta * beta) * p * r / (r + beta * beta * p);
    best = std::max(best, f);
  }
  return best;
}

EmbeddingScores embedding_metrics(const Words& candidate, const std::vector<Words>& references,
                                  const EmbeddingTable& table) {
  EmbeddingScores best;
  best.out_of_vocabulary = true;
  const auto cv = vectors_of(normalize(candidate), table);
  for (const auto& r : references) {
    const auto s = score_pair(cv, vectors_of(normalize(r), table), table.dim());
    if (s.out_of_vocabulary) continue;
    best.out_of_vocabulary = false;
    best.eacs = std::max(best.eacs, s.eacs);
    best.vecs = std::max(best.vecs, s.vecs);
    best.gms = std::max(best.gms, s.gms);
  }
  return best;
}

MetricReport evaluate_topn(const std::vector<Words>& ranked, const std::vector<Words>& reference,
                           const std::vector<std::size_t>& cuts, const EmbeddingTable* table) {
  MetricReport report;
  if (ranked.empty() || reference.empty()) {
    report.empty = true;
    report.warnings.push_back(ranked.empty() ? "no ranked questions to score" : "no reference questions");
    for (auto c : cuts) report.cuts.push_back(CutScores{c, 0, c > 0});
    return report;
  }
  for (auto c : cuts) {
    CutScores s;
    s.cut = c;
    s.used = std::min(c, ranked.size());
    s.exceeds_list = c > ranked.size();
    if (s.used == 0) {
      report.cuts.push_back(s);
      continue;
    }
    const std::vector<Words> top(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(s.used));
    const std::vector<std::vector<Words>> refs(top.size(), reference);
    s.bleu1 = bleu(top, refs, 1);
    s.bleu4 = bleu(top, refs, 4);
    s.bleu1_best = bleu_best_reference(top, refs, 1);
    s.bleu4_best = bleu_best_reference(top, refs, 4);
    std::size_t oov = 0;
    for (const auto& q : top) {
      s.rouge_l += rouge_l(q, reference);
      double lev = 0.0;
      for (const auto& r : reference) lev = std::max(lev, sim_levenshtein(q, r));
      s.best_lev += lev;
      if (table) {
        const auto e = embedding_metrics(q, reference, *table);
        if (e.out_of_vocabulary) {
          ++oov;
          continue;
        }
        s.eacs += e.eacs;
        s.vecs += e.vecs;
        s.gms += e.gms;
      }
    }
    const auto k = static_cast<double>(top.size());
    s.rouge_l /= k;
    s.best_lev /= k;
    if (oov < top.size()) {
      const auto covered = static_cast<double>(top.size() - oov);
      s.eacs /= covered;
      s.vecs /= covered;
      s.gms /= covered;
    }
    if (oov > 0)
      report.warnings.push_back("top-" + std::to_string(c) + ": " + std::to_string(oov) +
                                " question(s) entirely out of vocabulary left out of the embedding scores");
    report.cuts.push_back(s);
  }
  return report;
}

MetricReport average_reports(const std::vector<MetricReport>& reports) {
  MetricReport out;
  if (reports.empty()) {
    out.empty = true;
    return out;
  }
  out.cuts = reports.front().cuts;
  for (auto& c : out.cuts) c = CutScores{c.cut, 0, false};
  std::vector<std::size_t> n(out.cuts.size(), 0);
  for (const auto& r : reports) {
    if (r.cuts.size() != out.cuts.size()) throw std::invalid_argument("reports use different cuts");
    out.warnings.insert(out.warnings.end(), r.warnings.begin(), r.warnings.end());
    if (r.empty) continue;
    for (std::size_t i = 0; i < r.cuts.size(); ++i) {
      auto& a = out.cuts[i];
      const auto& b = r.cuts[i];
      a.used += b.used;
      a.exceeds_list = a.exceeds_list || b.exceeds_list;
      a.bleu1 += b.bleu1;
      a.bleu4 += b.bleu4;
      a.bleu1_best += b.bleu1_best;
      a.bleu4_best += b.bleu4_best;
      a.rouge_l += b.rouge_l;
      a.eacs += b.eacs;
      a.vecs += b.vecs;
      a.gms += b.gms;
      a.best_lev += b.best_lev;
      ++n[i];
    }
  }
  out.empty = std::all_of(n.begin(), n.end(), [](std::size_t k) { return k == 0; });
  for (std::size_t i = 0; i < out.cuts.size(); ++i) {
    if (n[i] == 0) continue;
    const auto k = static_cast<double>(n[i]);
    auto& a = out.cuts[i];
    a.bleu1 /= k;
    a.bleu4 /= k;
    a.bleu1_best /= k;
    a.bleu4_best /= k;
    a.rouge_l /= k;
    a.eacs /= k;
    a.vecs /= k;
    a.gms /= k;
    a.best_lev /= k;
  }
  return out;
}

}  // namespace gen
