#include "ighsom/c45.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "ighsom/errors.hpp"
#include "ighsom/text_util.hpp"

namespace ighsom {

namespace {

constexpr double kEps = 1e-12;

// Labels are mapped to dense ids in lexicographic order so majority ties resolve lexicographically.
struct LabelIndex {
  std::vector<std::string> names;
  std::vector<std::size_t> id_of_row;

  explicit LabelIndex(const InstanceSet& set) {
    std::map<std::string, std::size_t> ids;
    for (const auto& inst : set.instances) ids.emplace(inst.label, 0);
    for (auto& [name, id] : ids) {
      id = names.size();
      names.push_back(name);
    }
    id_of_row.reserve(set.instances.size());
    for (const auto& inst : set.instances) id_of_row.push_back(ids[inst.label]);
  }
};

double entropy_of(const std::vector<std::size_t>& counts, std::size_t total) {
  if (total == 0) return 0.0;
  double h = 0.0;
  for (auto c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / static_cast<double>(total);
    h -= p * std::log2(p);
  }
  return h;
}

std::vector<SplitCandidate> candidates_for(const InstanceSet& set, const LabelIndex& labels,
                                           std::span<const std::size_t> rows, std::size_t min_leaf) {
  std::vector<SplitCandidate> out;
  const std::size_t n = rows.size();
  const std::size_t k = labels.names.size();
  std::vector<std::size_t> total(k, 0);
  for (auto r : rows) ++total[labels.id_of_row[r]];
  const double base = entropy_of(total, n);

  std::vector<std::size_t> order(rows.begin(), rows.end());
  for (std::size_t a = 0; a < set.attributes.size(); ++a) {
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
      return set.instances[x].values[a] < set.instances[y].values[a];
    });
    std::vector<std::size_t> left(k, 0);
    std::vector<std::size_t> right = total;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const auto id = labels.id_of_row[order[i]];
      ++left[id];
      --right[id];
      const double v = set.instances[order[i]].values[a];
      const double next = set.instances[order[i + 1]].values[a];
      if (!(v < next)) continue;
      const std::size_t nl = i + 1, nr = n - nl;
      if (nl < min_leaf || nr < min_leaf) continue;
      const double pl = static_cast<double>(nl) / static_cast<double>(n);
      const double pr = static_cast<double>(nr) / static_cast<double>(n);
      SplitCandidate c;
      c.attribute = a;
      c.threshold = v + (next - v) / 2.0;
      c.gain = base - pl * entropy_of(left, nl) - pr * entropy_of(right, nr);
      const double split_info = -(pl * std::log2(pl) + pr * std::log2(pr));
      c.gain_ratio = c.gain / split_info;
      c.left = nl;
      out.push_back(c);
    }
  }
  return out;
}

DecisionNode grow(const InstanceSet& set, const LabelIndex& labels, std::vector<std::size_t> rows,
                  std::size_t min_leaf) {
  DecisionNode node;
  node.support = rows.size();
  std::vector<std::size_t> counts(labels.names.size(), 0);
  for (auto r : rows) ++counts[labels.id_of_row[r]];
  const auto majority = static_cast<std::size_t>(std::max_element(counts.begin(), counts.end()) - counts.begin());
  node.label = labels.names[majority];
  if (counts[majority] == rows.size()) return node;

  const auto cands = candidates_for(set, labels, rows, min_leaf);
  const auto best = choose_split(cands);
  if (!best) return node;

  node.attribute = best->attribute;
  node.threshold = best->threshold;
  std::vector<std::size_t> le, gt;
  for (auto r : rows) (set.instances[r].values[best->attribute] <= best->threshold ? le : gt).push_back(r);
  rows.clear();
  rows.shrink_to_fit();
  node.branches.push_back(grow(set, labels, std::move(le), min_leaf));
  node.branches.push_back(grow(set, labels, std::move(gt), min_leaf));
  return node;
}

void collect_rules(const DecisionTree& tree, const DecisionNode& node, std::vector<Condition>& path,
                   std::vector<FilterRule>& out) {
  if (node.is_leaf()) {
    // Tightest bound per attribute, in order of first appearance along the path.
    std::map<std::string, std::pair<std::optional<double>, std::optional<double>>> bounds;
    std::vector<std::string> names;
    for (const auto& c : path) {
      auto [it, fresh] = bounds.try_emplace(c.attribute);
      if (fresh) names.push_back(c.attribute);
      auto& [lo, hi] = it->second;
      if (c.op == Comparator::gt) lo = lo ? std::max(*lo, c.value) : c.value;
      if (c.op == Comparator::le) hi = hi ? std::min(*hi, c.value) : c.value;
    }
    FilterRule rule;
    rule.area = node.label;
    for (const auto& name : names) {
      const auto& [lo, hi] = bounds[name];
      if (lo) rule.antecedent.push_back({name, Comparator::gt, *lo});
      if (hi) rule.antecedent.push_back({name, Comparator::le, *hi});
    }
    out.push_back(std::move(rule));
    return;
  }
  const auto& attr = tree.attributes.at(node.attribute);
  path.push_back({attr, Comparator::le, node.threshold});
  collect_rules(tree, node.le(), path, out);
  path.back() = {attr, Comparator::gt, node.threshold};
  collect_rules(tree, node.gt(), path, out);
  path.pop_back();
}

void print(const DecisionTree& tree, const DecisionNode& node, std::size_t indent, std::string& out) {
  auto prefix = [&] {
    for (std::size_t i = 0; i < indent; ++i) out += "|   ";
  };
  if (node.is_leaf()) {
    prefix();
    out += node.label + " (" + std::to_string(node.support) + ")\n";
    return;
  }
  const auto& attr = tree.attributes.at(node.attribute);
  const auto thr = format_double(node.threshold);
  for (int side = 0; side < 2; ++side) {
    const auto& child = node.branches[static_cast<std::size_t>(side)];
    prefix();
    out += attr + (side == 0 ? " <= " : " > ") + thr;
    if (child.is_leaf()) {
      out += ": " + child.label + " (" + std::to_string(child.support) + ")\n";
    } else {
      out += ":\n";
      print(tree, child, indent + 1, out);
    }
  }
}

}  // namespace

void InstanceSet::validate() const {
  for (const auto& inst : instances) {
    if (inst.label.empty()) throw ContractError("instance with empty label");
    if (inst.values.size() != attributes.size()) throw ContractError("instance width does not match attributes");
    for (double v : inst.values) {
      if (!std::isfinite(v)) throw ContractError("missing or non-finite attribute value");
    }
  }
}

double entropy(std::span<const std::size_t> counts) {
  const std::size_t total = std::accumulate(counts.begin(), counts.end(), std::size_t{0});
  return entropy_of(std::vector<std::size_t>(counts.begin(), counts.end()), total);
}

std::vector<SplitCandidate> candidate_splits(const InstanceSet& set, std::span<const std::size_t> rows,
                                             std::size_t min_leaf) {
  const LabelIndex labels(set);
  return candidates_for(set, labels, rows, std::max<std::size_t>(min_leaf, 1));
}

std::optional<SplitCandidate> choose_split(std::span<const SplitCandidate> candidates) {
  if (candidates.empty()) return std::nullopt;
  double mean = 0.0;
  for (const auto& c : candidates) mean += c.gain;
  mean /= static_cast<double>(candidates.size());

  std::optional<SplitCandidate> best;
  for (const auto& c : candidates) {
    if (!(c.gain > kEps) || c.gain < mean - kEps) continue;
    if (!best || c.gain_ratio > best->gain_ratio + kEps) {
      best = c;
    } else if (std::abs(c.gain_ratio - best->gain_ratio) <= kEps &&
               (c.attribute < best->attribute ||
                (c.attribute == best->attribute && c.threshold < best->threshold))) {
      best = c;
    }
  }
  return best;
}

DecisionTree induce(const InstanceSet& set, std::size_t min_leaf) {
  if (set.instances.empty()) throw ContractError("induce: no instances");
  if (set.attributes.empty()) throw ContractError("induce: no attributes");
  set.validate();
  const LabelIndex labels(set);
  std::vector<std::size_t> rows(set.instances.size());
  std::iota(rows.begin(), rows.end(), 0);
  return {set.attributes, grow(set, labels, std::move(rows), std::max<std::size_t>(min_leaf, 1))};
}

const std::string& classify(const DecisionTree& tree, std::span<const double> values) {
  if (values.size() != tree.attributes.size()) throw ContractError("classify: width mismatch");
  const DecisionNode* n = &tree.root;
  while (!n->is_leaf()) n = values[n->attribute] <= n->threshold ? &n->le() : &n->gt();
  return n->label;
}

std::size_t node_count(const DecisionNode& node) {
  std::size_t c = 1;
  for (const auto& b : node.branches) c += node_count(b);
  return c;
}

std::size_t leaf_count(const DecisionNode& node) {
  if (node.is_leaf()) return 1;
  return leaf_count(node.le()) + leaf_count(node.gt());
}

std::size_t tree_depth(const DecisionNode& node) {
  if (node.is_leaf()) return 0;
  return 1 + std::max(tree_depth(node.le()), tree_depth(node.gt()));
}

std::vector<FilterRule> extract_rules(const DecisionTree& tree) {
  std::vector<FilterRule> out;
  std::vector<Condition> path;
  collect_rules(tree, tree.root, path, out);
  return out;
}

std::string to_text(const DecisionTree& tree) {
  std::string out;
  print(tree, tree.root, 0, out);
  return out;
}

}  // namespace ighsom
