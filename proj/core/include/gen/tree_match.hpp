#pragma once

// Constituency (sub)tree matching: strict structural matching, descendant
// search, and flexible node-class templates.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gen/annotation.hpp"
#include "gen/similarity.hpp"

namespace gen {

// Token-index pairs (first tree's token, second tree's token).
using LeafAlignment = std::vector<std::pair<std::size_t, std::size_t>>;

// A tree together with the tokens its leaves index into.
struct TreeRef {
  const ConstituencyNode* node = nullptr;
  const std::vector<Token>* tokens = nullptr;
};

// Roots must be equivalent and have the same number of children, recursively
// over ordered children. Internal nodes are equivalent when their labels are
// equal; leaves additionally need a positive token equivalence.
std::optional<LeafAlignment> match_trees_strict(TreeRef a, TreeRef b, const Equivalence& equiv);

// First strict match of `pattern` against `candidate` or any of its
// descendants, in pre-order.
std::optional<LeafAlignment> match_subtree(TreeRef pattern, TreeRef candidate, const Equivalence& equiv);

// Node-class template: a label prefix plus child constraints that must bind
// to distinct, pairwise-sister descendants at any depth.
struct TreeTemplate {
  std::string prefix;                  // first character of the source label
  std::vector<TreeTemplate> children;
  std::optional<std::size_t> source_token;  // set for templates compiled from a leaf

  std::string expression() const;      // "/N* << ( /D* $ /N* )"
};

TreeTemplate compile_template(const ConstituencyNode& subtree);

struct FlexMatch {
  const ConstituencyNode* matched = nullptr;  // candidate subtree satisfying the template
  std::vector<std::size_t> chunk;             // leaves of `matched`
  LeafAlignment pairs;                        // template leaf -> bound candidate node's last leaf
};

bool template_matches(const TreeTemplate& t, const ConstituencyNode& node, LeafAlignment* pairs = nullptr);

// Innermost-first (post-order) search for a subtree of `candidate` satisfying
// the template.
std::optional<FlexMatch> match_flex(const TreeTemplate& t, const ConstituencyNode& candidate);

}  // namespace gen
