#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ighsom/rules.hpp"

namespace ighsom {

struct LabeledInstance {
  std::vector<double> values;  // aligned with InstanceSet::attributes
  std::string label;
};

struct InstanceSet {
  std::vector<std::string> attributes;
  std::vector<LabeledInstance> instances;

  /// Throws ContractError on empty labels, non-finite values or width mismatches.
  void validate() const;
};

/// Binary tree: a leaf has no branches; a split has exactly two (<= threshold, > threshold).
struct DecisionNode {
  std::string label;        // leaf: majority class
  std::size_t support = 0;  // training instances reaching this node
  std::size_t attribute = 0;
  double threshold = 0.0;
  std::vector<DecisionNode> branches;

  bool is_leaf() const noexcept { return branches.empty(); }
  const DecisionNode& le() const { return branches.at(0); }
  const DecisionNode& gt() const { return branches.at(1); }
};

struct DecisionTree {
  std::vector<std::string> attributes;
  DecisionNode root;
};

/// Entropy in bits of a class-count histogram.
double entropy(std::span<const std::size_t> counts);

struct SplitCandidate {
  std::size_t attribute = 0;
  double threshold = 0.0;
  double gain = 0.0;
  double gain_ratio = 0.0;
  std::size_t left = 0;  // instances with value <= threshold
};

/// All binary splits at midpoints between consecutive distinct values with both sides >= min_leaf.
std::vector<SplitCandidate> candidate_splits(const InstanceSet& set, std::span<const std::size_t> rows,
                                             std::size_t min_leaf);

/// C4.5 selection: highest gain ratio among candidates whose gain is positive and at least the
/// mean candidate gain. Ties go to the lower attribute index, then the lower threshold.
std::optional<SplitCandidate> choose_split(std::span<const SplitCandidate> candidates);

DecisionTree induce(const InstanceSet& set, std::size_t min_leaf = 2);

const std::string& classify(const DecisionTree& tree, std::span<const double> values);

std::size_t node_count(const DecisionNode& node);
std::size_t leaf_count(const DecisionNode& node);
std::size_t tree_depth(const DecisionNode& node);

/// One rule per root-to-leaf path; repeated tests on one attribute collapse to the tightest bound.
std::vector<FilterRule> extract_rules(const DecisionTree& tree);

/// Indented printout in the style of classic decision-tree tools.
std::string to_text(const DecisionTree& tree);

}  // namespace ighsom
