#include "gen/pattern.hpp"

#include <algorithm>
#include <cstdint>
#include <iomanip>
#include <set>
#include <sstream>

namespace gen {

namespace {

bool all_leaves_in(const ConstituencyNode& n, const std::set<std::size_t>& tokens) {
  auto l = n.leaves();
  return !l.empty() && std::all_of(l.begin(), l.end(), [&](std::size_t i) { return tokens.count(i) > 0; });
}

void collect_cover(const ConstituencyNode& n, const std::set<std::size_t>& tokens,
                   std::vector<ConstituencyNode>& out) {
  if (all_leaves_in(n, tokens)) {
    out.push_back(n);
    return;
  }
  for (const auto& c : n.children) collect_cover(c, tokens, out);
}

void collect_descendants(const ConstituencyNode& n, std::vector<ConstituencyNode>& out) {
  for (const auto& c : n.children) {
    out.push_back(c);
    collect_descendants(c, out);
  }
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

bool ArgumentStructure::contains(std::size_t i) const {
  return std::binary_search(tokens.begin(), tokens.end(), i);
}

const ArgumentStructure* PredicateArgument::find(const std::string& label) const {
  for (const auto& a : arguments)
    if (a.label == label) return &a;
  return nullptr;
}

const ArgumentStructure* PredicateArgument::argument_of(std::size_t i) const {
  for (const auto& a : arguments)
    if (a.contains(i)) return &a;
  return nullptr;
}

ExtractionResult extract_predicate_arguments(const AnnotatedSentence& s) {
  ExtractionResult out;
  for (std::size_t f = 0; f < s.srl_frames.size(); ++f) {
    const auto& frame = s.srl_frames[f];
    if (frame.arguments.empty()) {
      out.warnings.push_back("sentence '" + s.id + "': frame " + std::to_string(f) +
                             " has no arguments, skipped");
      continue;
    }
    PredicateArgument pa;
    pa.frame_index = f;
    pa.predicate_index = frame.predicate_index;
    pa.predicate = s.tokens.at(frame.predicate_index);
    for (const auto& arg : frame.arguments) {
      ArgumentStructure a;
      a.label = arg.label;
      a.tokens = arg.token_indices();
      const std::set<std::size_t> members(a.tokens.begin(), a.tokens.end());
      collect_cover(s.constituency, members, a.cover);
      for (const auto& c : a.cover) collect_descendants(c, a.nested);
      for (const auto& e : s.dependencies) {
        if (members.count(e.dependent) && (members.count(e.head) || e.head == frame.predicate_index)) {
          a.dependencies.push_back(e);
        }
      }
      pa.arguments.push_back(std::move(a));
    }
    out.structures.push_back(std::move(pa));
  }
  return out;
}

const Token& Pattern::qa_token(std::size_t qa_index) const {
  return qa_index < question.size() ? question[qa_index] : answer.at(qa_index - question.size());
}

std::string check_pattern_validity(const Pattern& p, const Stopwords& stopwords) {
  if (!p.alignment.qa_index_of(p.pa.predicate_index)) {
    return "predicate '" + p.pa.predicate.surface + "' is not part of the alignment";
  }
  for (const auto& arg : p.pa.arguments) {
    bool from_question = false;
    bool from_answer = false;
    for (auto i : arg.tokens) {
      const auto& tok = p.sentence.tokens[i];
      const auto qa = p.alignment.qa_index_of(i);
      if (!qa) {
        if (tok.is_stopword || stopwords.contains(tok.surface)) continue;
        return "token '" + tok.surface + "' of argument " + arg.label + " is not aligned";
      }
      (p.is_answer_index(*qa) ? from_answer : from_question) = true;
    }
    if (from_question && from_answer) {
      return "argument " + arg.label + " mixes question and answer tokens";
    }
  }
  return {};
}

std::string content_hash(const Pattern& p) {
  std::ostringstream os;
  auto tokens = [&os](const std::vector<Token>& ts) {
    for (const auto& t : ts) os << t.surface << '\x1f' << t.lemma << '\x1f' << t.pos << '\x1e';
  };
  tokens(p.question);
  os << '|';
  tokens(p.answer);
  os << '|';
  tokens(p.sentence.tokens);
  os << '|' << p.pa.predicate_index;
  for (const auto& a : p.pa.arguments) {
    os << ';' << a.label;
    for (auto i : a.tokens) os << ',' << i;
  }
  os << '|';
  for (const auto& pr : p.alignment.pairs) os << pr.qa_index << ':' << pr.s_index << ';';
  std::ostringstream hex;
  hex << std::hex << std::setw(16) << std::setfill('0') << fnv1a(os.str());
  return hex.str();
}

AcquisitionResult acquire_patterns(const std::vector<Seed>& seeds, const Equivalence& equiv, int iteration) {
  AcquisitionResult out;
  const auto& stopwords = equiv.resources().stopwords;
  for (const auto& seed : seeds) {
    const std::string seed_id = seed.id.empty() ? seed.sentence.id : seed.id;
    std::vector<Token> qa = seed.question;
    qa.insert(qa.end(), seed.answer.begin(), seed.answer.end());
    const auto matrix = build_score_matrix(qa, seed.sentence, equiv, stopwords, seed.wh_index);
    const auto alignment = best_alignment(matrix);
    if (!alignment_complete(alignment, matrix)) {
      out.rejected.push_back({seed_id, std::nullopt, "alignment does not cover every content token"});
      continue;
    }
    auto extraction = extract_predicate_arguments(seed.sentence);
    out.warnings.insert(out.warnings.end(), extraction.warnings.begin(), extraction.warnings.end());
    for (auto& pa : extraction.structures) {
      Pattern p;
      p.seed_id = seed_id;
      p.iteration = iteration;
      p.sentence = seed.sentence;
      p.question = seed.question;
      p.answer = seed.answer;
      p.wh_index = seed.wh_index;
      p.pa = std::move(pa);
      p.alignment = alignment;
      if (auto reason = check_pattern_validity(p, stopwords); !reason.empty()) {
        out.rejected.push_back({seed_id, p.pa.predicate_index, reason});
        continue;
      }
      for (const auto& arg : p.pa.arguments) {
        for (auto i : arg.tokens) {
          auto qa_idx = p.alignment.qa_index_of(i);
          if (qa_idx && p.is_answer_index(*qa_idx)) p.answer_argument = arg.label;
        }
      }
      p.content_hash = content_hash(p);
      p.id = "i" + std::to_string(iteration) + "-" + p.content_hash;
      out.patterns.push_back(std::move(p));
    }
  }
  return out;
}

bool PatternPool::add(Pattern p) {
  for (const auto& q : patterns_)
    if (q.content_hash == p.content_hash) return false;
  patterns_.push_back(std::move(p));
  return true;
}

std::size_t PatternPool::add_all(std::vector<Pattern> ps) {
  std::size_t added = 0;
  for (auto& p : ps) added += add(std::move(p)) ? 1 : 0;
  return added;
}

bool PatternPool::remove(const std::string& id) {
  auto it = std::find_if(patterns_.begin(), patterns_.end(), [&](const Pattern& p) { return p.id == id; });
  if (it == patterns_.end()) return false;
  patterns_.erase(it);
  return true;
}

Pattern* PatternPool::find(const std::string& id) {
  for (auto& p : patterns_)
    if (p.id == id) return &p;
  return nullptr;
}

const Pattern* PatternPool::find(const std::string& id) const {
  for (const auto& p : patterns_)
    if (p.id == id) return &p;
  return nullptr;
}

}  // namespace gen
