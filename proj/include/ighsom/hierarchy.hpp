#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ighsom/kernels.hpp"
#include "ighsom/matrix.hpp"
#include "ighsom/som.hpp"

namespace ighsom {

struct GrowthParams {
  double tau1 = 0.1;   // horizontal growth: stop when MQE < tau1 * qe(parent unit)
  double tau2 = 0.01;  // vertical growth: expand units with qe > tau2 * qe0
  double alpha = 0.03; // stratification stop: n_k <= alpha * n_I
  double beta = 2.0;   // error-driven insertion: qe_k >= beta * tau1 * sum(winner qe)
  std::size_t lambda = 100;  // training epochs per growth step
  std::size_t max_depth = 6;
  std::size_t max_insertions = 20;  // per map
  double initial_learning_rate = 0.5;
  kernels::Execution execution = kernels::Execution::parallel;

  void validate() const;
  /// Non-fatal oddities, e.g. tau2 > tau1.
  std::vector<std::string> warnings() const;
};

/// Path-label grids are limited to single digits per coordinate.
inline constexpr std::size_t kMaxGridSide = 10;

/// Sequence of unit hops from the root map.
using Path = std::vector<UnitCoord>;

struct HierarchyNode {
  Path path;
  std::optional<UnitCoord> unit;     // owning unit in the parent map; empty at the root
  std::vector<std::size_t> samples;  // samples in scope, ascending
  double reference_qe = 0.0;         // qe of the owning unit (qe0 at the root)
  std::optional<SomMap> child_map;
  std::vector<HierarchyNode> children;  // one per unit of child_map, row-major

  bool has_map() const noexcept { return child_map.has_value(); }
  const HierarchyNode& child(UnitCoord c) const { return children.at(child_map->index(c)); }
  HierarchyNode& child(UnitCoord c) { return children.at(child_map->index(c)); }

  bool operator==(const HierarchyNode&) const = default;
};

enum class GrowthEventKind {
  insertion,        // horizontal growth driven by MQE >= tau1 * reference
  cap_reached,      // horizontal growth stopped by a structural cap
  expansion,        // unit spawned a child map
  case1_stop,       // expansion suppressed by n_k <= alpha * n_I
  case1_insertion,  // extra insertion granted after suppressed expansions
  case2_insertion,  // insertion triggered by qe_k >= beta * tau1 * sum(winner qe)
  refine,           // marker: a subtree was discarded and regrown
};

std::string_view to_string(GrowthEventKind k);

/// One decision taken while growing, with the numbers it was taken on.
struct GrowthEvent {
  GrowthEventKind kind = GrowthEventKind::insertion;
  Path map_path;        // node owning the map the decision concerns
  UnitCoord unit;       // unit concerned (error unit, expanded or suppressed unit)
  std::size_t rows = 0, cols = 0;  // map size the decision was taken on
  double qe_k = 0.0;
  double threshold = 0.0;       // right-hand side of the rule that fired
  double map_mqe = 0.0;
  double reference_qe = 0.0;    // qe of the map's parent unit (qe0 for the root map)
  std::vector<double> winner_qes;  // case 2 snapshot
  std::size_t n_k = 0;
  std::size_t n_total = 0;
  std::size_t assigned = 0;     // samples assigned in the map after the step
  std::size_t scope = 0;        // samples the map was trained on
  std::size_t round = 0;        // case 1: 0 = first test, 1 = after the extra insertion

  bool operator==(const GrowthEvent&) const = default;
};

struct Hierarchy {
  HierarchyNode root;
  double qe0 = 0.0;
  std::vector<double> layer0_mean;
  GrowthParams params;
  std::uint64_t seed = 0;
  std::size_t sample_count = 0;
  std::vector<GrowthEvent> audit;
};

/// Counters reported by growth in interactive mode.
struct GrowthStats {
  std::size_t case1_stops = 0;
  std::size_t case2_insertions = 0;
};

/// Classic GHSOM growth over every row of `data`.
Hierarchy grow(const Matrix& data, const GrowthParams& params, std::uint64_t seed);

/// Regrows `node`'s map and subtree in place. In interactive mode the stratification stop and
/// error-driven insertion rules apply; `n_total` is the number of input samples n_I.
GrowthStats regrow_node(const Matrix& data, const GrowthParams& params, double qe0, std::size_t n_total,
                        bool interactive, std::uint64_t seed, HierarchyNode& node, std::vector<GrowthEvent>& audit);

/// Seed for a node: base seed folded with every hop of its path.
std::uint64_t derive_seed(std::uint64_t base, const Path& path);

// --- addressing -------------------------------------------------------------

/// "[R]" plus one "[cr]" block per hop (column digit first), optionally ":count".
std::string path_label(const Path& path);
std::string path_label(const HierarchyNode& node, bool with_count = false);

/// Parses the path grammar \[R\](\[[0-9][0-9]\])*(:[0-9]+)? ; the count suffix is ignored.
Path parse_path(std::string_view label);

/// Throws ParseError for malformed labels and NotFoundError for paths that do not exist.
const HierarchyNode& resolve_path(const Hierarchy& h, std::string_view label);
HierarchyNode& resolve_path(Hierarchy& h, const Path& path);
const HierarchyNode& resolve_path(const Hierarchy& h, const Path& path);

// --- structure queries ------------------------------------------------------

/// Number of map layers (root map alone = 1).
std::size_t depth(const Hierarchy& h);
std::size_t map_count(const Hierarchy& h);

/// Visits every node depth-first, parents before children, row-major among siblings.
template <typename Fn>
void visit(const HierarchyNode& node, Fn&& fn) {
  fn(node);
  for (const auto& c : node.children) visit(c, fn);
}

/// Leaf-unit label of every sample, indexed by sample.
std::vector<std::string> leaf_labels(const Hierarchy& h);

/// Unit nodes without a child map that hold at least one sample.
std::vector<const HierarchyNode*> leaf_units(const Hierarchy& h);

}  // namespace ighsom
