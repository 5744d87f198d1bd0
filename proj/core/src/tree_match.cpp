#include "gen/tree_match.hpp"

#include <functional>

namespace gen {

namespace {

bool strict_rec(const ConstituencyNode& a, const ConstituencyNode& b, const std::vector<Token>& ta,
                const std::vector<Token>& tb, const Equivalence& equiv, LeafAlignment& out) {
  if (a.label != b.label || a.children.size() != b.children.size()) return false;
  if (a.is_leaf()) {
    if (!a.token_index || !b.token_index) return false;
    if (equiv(ta.at(*a.token_index), tb.at(*b.token_index)) <= 0.0) return false;
    out.emplace_back(*a.token_index, *b.token_index);
    return true;
  }
  for (std::size_t i = 0; i < a.children.size(); ++i) {
    if (!strict_rec(a.children[i], b.children[i], ta, tb, equiv, out)) return false;
  }
  return true;
}

bool label_fits(const TreeTemplate& t, const ConstituencyNode& n) {
  return !n.label.empty() && n.label.rfind(t.prefix, 0) == 0;
}

// Injectively binds every template child to a distinct child of `parent`.
bool bind_children(const std::vector<TreeTemplate>& ts, std::size_t k, const ConstituencyNode& parent,
                   std::vector<bool>& used, LeafAlignment* pairs) {
  if (k == ts.size()) return true;
  for (std::size_t i = 0; i < parent.children.size(); ++i) {
    if (used[i]) continue;
    LeafAlignment local;
    if (!template_matches(ts[k], parent.children[i], pairs ? &local : nullptr)) continue;
    used[i] = true;
    const std::size_t mark = pairs ? pairs->size() : 0;
    if (pairs) pairs->insert(pairs->end(), local.begin(), local.end());
    if (bind_children(ts, k + 1, parent, used, pairs)) return true;
    if (pairs) pairs->resize(mark);
    used[i] = false;
  }
  return false;
}

// Tries every node at or below `n` as the common parent of the constraints.
bool bind_below(const std::vector<TreeTemplate>& ts, const ConstituencyNode& n, LeafAlignment* pairs) {
  if (n.children.size() >= ts.size()) {
    std::vector<bool> used(n.children.size(), false);
    if (bind_children(ts, 0, n, used, pairs)) return true;
  }
  for (const auto& c : n.children)
    if (bind_below(ts, c, pairs)) return true;
  return false;
}

}  // namespace

std::optional<LeafAlignment> match_trees_strict(TreeRef a, TreeRef b, const Equivalence& equiv) {
  LeafAlignment out;
  if (!a.node || !b.node) return std::nullopt;
  if (!strict_rec(*a.node, *b.node, *a.tokens, *b.tokens, equiv, out)) return std::nullopt;
  return out;
}

std::optional<LeafAlignment> match_subtree(TreeRef pattern, TreeRef candidate, const Equivalence& equiv) {
  if (!candidate.node) return std::nullopt;
  if (auto m = match_trees_strict(pattern, candidate, equiv)) return m;
  for (const auto& c : candidate.node->children) {
    if (auto m = match_subtree(pattern, {&c, candidate.tokens}, equiv)) return m;
  }
  return std::nullopt;
}

std::string TreeTemplate::expression() const {
  std::string out = "/" + prefix + "*";
  if (children.empty()) return out;
  out += " << ";
  if (children.size() == 1) {
    const auto inner = children.front().expression();
    return out + (children.front().children.empty() ? inner : "( " + inner + " )");
  }
  out += "( ";
  for (std::size_t i = 0; i < children.size(); ++i) {
    if (i) out += " $ ";
    out += children[i].expression();
  }
  return out + " )";
}

TreeTemplate compile_template(const ConstituencyNode& subtree) {
  TreeTemplate t;
  t.prefix = subtree.label.empty() ? std::string() : subtree.label.substr(0, 1);
  if (subtree.is_leaf()) {
    t.source_token = subtree.token_index;
    return t;
  }
  for (const auto& c : subtree.children) t.children.push_back(compile_template(c));
  return t;
}

bool template_matches(const TreeTemplate& t, const ConstituencyNode& node, LeafAlignment* pairs) {
  if (!label_fits(t, node)) return false;
  if (t.children.empty()) {
    if (pairs && t.source_token) {
      auto leaves = node.leaves();
      if (!leaves.empty()) pairs->emplace_back(*t.source_token, leaves.back());
    }
    return true;
  }
  // The common parent of the bound constraints may be `node` or any descendant.
  return bind_below(t.children, node, pairs);
}

std::optional<FlexMatch> match_flex(const TreeTemplate& t, const ConstituencyNode& candidate) {
  std::optional<FlexMatch> found;
  std::function<void(const ConstituencyNode&)> visit = [&](const ConstituencyNode& n) {
    if (found) return;
    for (const auto& c : n.children) {
      visit(c);
      if (found) return;
    }
    LeafAlignment pairs;
    if (template_matches(t, n, &pairs)) found = FlexMatch{&n, n.leaves(), std::move(pairs)};
  };
  visit(candidate);
  return found;
}

}  // namespace gen
