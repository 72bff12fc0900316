#include "ighsom/hierarchy.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <regex>

#include "ighsom/errors.hpp"
#include "ighsom/interactive.hpp"

namespace ighsom {

void GrowthParams::validate() const {
  auto open01 = [](double v) { return v > 0.0 && v < 1.0; };
  if (!open01(tau1)) throw ContractError("tau1 must lie in (0, 1)");
  if (!open01(tau2)) throw ContractError("tau2 must lie in (0, 1)");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ContractError("alpha must lie in [0, 1]");
  if (!(beta > 0.0)) throw ContractError("beta must be positive");
  if (lambda == 0) throw ContractError("lambda must be positive");
  if (max_depth == 0) throw ContractError("max_depth must be positive");
  if (!(initial_learning_rate > 0.0 && initial_learning_rate <= 1.0)) {
    throw ContractError("initial learning rate must lie in (0, 1]");
  }
}

std::vector<std::string> GrowthParams::warnings() const {
  std::vector<std::string> w;
  if (tau2 > tau1) w.emplace_back("tau2 > tau1: hierarchy will stratify before maps grow");
  return w;
}

std::string_view to_string(GrowthEventKind k) {
  switch (k) {
    case GrowthEventKind::insertion: return "insertion";
    case GrowthEventKind::cap_reached: return "cap_reached";
    case GrowthEventKind::expansion: return "expansion";
    case GrowthEventKind::case1_stop: return "case1_stop";
    case GrowthEventKind::case1_insertion: return "case1_insertion";
    case GrowthEventKind::case2_insertion: return "case2_insertion";
    case GrowthEventKind::refine: return "refine";
  }
  return "?";
}

std::uint64_t derive_seed(std::uint64_t base, const Path& path) {
  std::uint64_t s = mix_seed(base, 0x5eed);
  for (const auto& hop : path) s = mix_seed(s, (hop.row << 8) | hop.col);
  return s;
}

namespace {

struct GrowContext {
  const Matrix& data;
  const GrowthParams& params;
  double qe0;
  std::size_t n_total;
  bool interactive;
  std::uint64_t base_seed;
};

// Trains `map` on the node's samples; `step` varies the shuffle stream per growth step.
SomMap train_step(const GrowContext& ctx, SomMap map, const HierarchyNode& node, std::uint64_t node_seed,
                  std::size_t step) {
  TrainConfig cfg;
  cfg.epochs = ctx.params.lambda;
  cfg.initial_learning_rate = ctx.params.initial_learning_rate;
  cfg.initial_radius = std::max(1.0, static_cast<double>(std::max(map.rows(), map.cols())) / 2.0);
  cfg.rng_seed = mix_seed(node_seed, step + 1);
  cfg.execution = ctx.params.execution;
  return train(std::move(map), ctx.data, node.samples, cfg);
}

GrowthEvent make_event(GrowthEventKind kind, const HierarchyNode& node, const SomMap& map, UnitCoord unit) {
  GrowthEvent e;
  e.kind = kind;
  e.map_path = node.path;
  e.unit = unit;
  e.rows = map.rows();
  e.cols = map.cols();
  e.qe_k = map.qe(map.index(unit));
  e.n_k = map.mapped(map.index(unit)).size();
  e.map_mqe = map.mqe();
  e.reference_qe = node.reference_qe;
  e.assigned = map.assigned_count();
  e.scope = node.samples.size();
  return e;
}

class MapGrower {
 public:
  MapGrower(const GrowContext& ctx, HierarchyNode& node, std::vector<GrowthEvent>& audit, GrowthStats& stats)
      : ctx_(ctx), node_(node), audit_(audit), stats_(stats), seed_(derive_seed(ctx.base_seed, node.path)) {}

  SomMap run() {
    SomMap map = init_from_samples(2, 2, ctx_.data, node_.samples, seed_);
    map = retrain(std::move(map));
    map = grow_horizontally(std::move(map));
    if (ctx_.interactive) map = apply_case2(std::move(map));
    return map;
  }

  /// Units that qualify for a child map, after stratification stops in interactive mode.
  std::vector<std::size_t> select_expansions(SomMap& map) {
    auto candidates = expansion_candidates(map);
    if (!ctx_.interactive) return candidates;

    auto suppressed = log_case1(map, candidates, 0);
    if (!suppressed.empty() && can_insert(map)) {
      map = insert(std::move(map), nullptr, GrowthEventKind::case1_insertion, nullptr);
      map = grow_horizontally(std::move(map));
      candidates = expansion_candidates(map);
      suppressed = log_case1(map, candidates, 1);
    }
    stats_.case1_stops += suppressed.size();
    std::vector<std::size_t> keep;
    for (auto u : candidates) {
      if (!std::binary_search(suppressed.begin(), suppressed.end(), u)) keep.push_back(u);
    }
    return keep;
  }

 private:
  SomMap retrain(SomMap map) { return train_step(ctx_, std::move(map), node_, seed_, step_++); }

  bool can_insert(const SomMap& map) const {
    if (insertions_ >= ctx_.params.max_insertions) return false;
    const auto plan = plan_insertion(map);
    const std::size_t side = plan.inserts_row ? map.rows() : map.cols();
    return side < kMaxGridSide;
  }

  SomMap insert(SomMap map, const UnitCoord* at, GrowthEventKind kind, GrowthEvent* prepared) {
    GrowthEvent e = prepared ? *prepared : make_event(kind, node_, map, at ? *at : plan_insertion(map).error_unit);
    map = insert_row_or_col(map, at);
    ++insertions_;
    map = retrain(std::move(map));
    e.assigned = map.assigned_count();
    audit_.push_back(std::move(e));
    return map;
  }

  SomMap grow_horizontally(SomMap map) {
    for (;;) {
      const double mqe = map.mqe();
      const double threshold = ctx_.params.tau1 * node_.reference_qe;
      if (!(mqe > 0.0 && mqe >= threshold)) return map;
      if (!can_insert(map)) {
        auto e = make_event(GrowthEventKind::cap_reached, node_, map, plan_insertion(map).error_unit);
        e.threshold = threshold;
        audit_.push_back(std::move(e));
        return map;
      }
      auto e = make_event(GrowthEventKind::insertion, node_, map, plan_insertion(map).error_unit);
      e.threshold = threshold;
      map = insert(std::move(map), nullptr, GrowthEventKind::insertion, &e);
    }
  }

  SomMap apply_case2(SomMap map) {
    std::vector<double> winner_qes;
    for (auto u : map.winner_set()) winner_qes.push_back(map.qe(u));
    if (winner_qes.empty()) return map;
    std::optional<std::size_t> worst;
    for (auto u : map.winner_set()) {
      if (case2_insert(map.qe(u), winner_qes, ctx_.params.beta, ctx_.params.tau1) &&
          (!worst || map.qe(u) > map.qe(*worst))) {
        worst = u;
      }
    }
    if (!worst || map.unit_count() < 2) return map;
    const UnitCoord at = map.coord(*worst);
    const auto plan = plan_insertion(map, &at);
    const std::size_t side = plan.inserts_row ? map.rows() : map.cols();
    if (insertions_ >= ctx_.params.max_insertions || side >= kMaxGridSide) return map;

    auto e = make_event(GrowthEventKind::case2_insertion, node_, map, at);
    e.winner_qes = winner_qes;
    e.threshold = ctx_.params.beta * ctx_.params.tau1 * kernels::ordered_sum(winner_qes);
    map = insert(std::move(map), &at, GrowthEventKind::case2_insertion, &e);
    ++stats_.case2_insertions;
    // The inserted units may leave MQE above the horizontal threshold again.
    return grow_horizontally(std::move(map));
  }

  std::vector<std::size_t> expansion_candidates(const SomMap& map) const {
    std::vector<std::size_t> out;
    // A unit at hop depth p+1 spawns layer p+2.
    if (node_.path.size() + 2 > ctx_.params.max_depth) return out;
    const double threshold = ctx_.params.tau2 * ctx_.qe0;
    for (std::size_t u = 0; u < map.unit_count(); ++u) {
      if (map.mapped(u).size() > 1 && map.qe(u) > threshold) out.push_back(u);
    }
    return out;
  }

  std::vector<std::size_t> log_case1(const SomMap& map, const std::vector<std::size_t>& candidates,
                                     std::size_t round) {
    std::vector<std::size_t> suppressed;
    for (auto u : candidates) {
      const auto n_k = map.mapped(u).size();
      if (!case1_stop(n_k, ctx_.n_total, ctx_.params.alpha)) continue;
      suppressed.push_back(u);
      auto e = make_event(GrowthEventKind::case1_stop, node_, map, map.coord(u));
      e.n_total = ctx_.n_total;
      e.threshold = ctx_.params.alpha * static_cast<double>(ctx_.n_total);
      e.round = round;
      audit_.push_back(std::move(e));
    }
    return suppressed;
  }

  const GrowContext& ctx_;
  HierarchyNode& node_;
  std::vector<GrowthEvent>& audit_;
  GrowthStats& stats_;
  std::uint64_t seed_;
  std::size_t step_ = 0;
  std::size_t insertions_ = 0;
};

void grow_subtree(const GrowContext& ctx, HierarchyNode& node, std::vector<GrowthEvent>& audit,
                  GrowthStats& stats) {
  node.child_map.reset();
  node.children.clear();
  MapGrower grower(ctx, node, audit, stats);
  SomMap map = grower.run();
  const auto expand = grower.select_expansions(map);

  node.children.resize(map.unit_count());
  for (std::size_t u = 0; u < map.unit_count(); ++u) {
    auto& child = node.children[u];
    child.path = node.path;
    child.path.push_back(map.coord(u));
    child.unit = map.coord(u);
    child.samples = map.mapped(u);
    std::sort(child.samples.begin(), child.samples.end());
    child.reference_qe = map.qe(u);
  }
  for (auto u : expand) {
    auto e = make_event(GrowthEventKind::expansion, node, map, map.coord(u));
    e.threshold = ctx.params.tau2 * ctx.qe0;
    audit.push_back(std::move(e));
  }
  node.child_map = std::move(map);

  // Sibling subtrees touch disjoint samples and derive their seeds from their own paths, so
  // they can grow concurrently; their audits are merged back in row-major order.
  std::vector<std::vector<GrowthEvent>> child_audits(expand.size());
  std::vector<GrowthStats> child_stats(expand.size());
  std::vector<std::exception_ptr> errors(expand.size());
  const auto n = static_cast<std::int64_t>(expand.size());
  const bool par = ctx.params.execution == kernels::Execution::parallel;
#pragma omp parallel for schedule(dynamic) if (par)
  for (std::int64_t k = 0; k < n; ++k) {
    const auto i = static_cast<std::size_t>(k);
    try {
      grow_subtree(ctx, node.children[expand[i]], child_audits[i], child_stats[i]);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (std::size_t i = 0; i < expand.size(); ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    audit.insert(audit.end(), std::make_move_iterator(child_audits[i].begin()),
                 std::make_move_iterator(child_audits[i].end()));
    stats.case1_stops += child_stats[i].case1_stops;
    stats.case2_insertions += child_stats[i].case2_insertions;
  }
}

}  // namespace

GrowthStats regrow_node(const Matrix& data, const GrowthParams& params, double qe0, std::size_t n_total,
                        bool interactive, std::uint64_t seed, HierarchyNode& node, std::vector<GrowthEvent>& audit) {
  params.validate();
  if (node.samples.empty()) throw ContractError("cannot grow a map over an empty sample set");
  GrowContext ctx{data, params, qe0, n_total, interactive, seed};
  GrowthStats stats;
  grow_subtree(ctx, node, audit, stats);
  return stats;
}

Hierarchy grow(const Matrix& data, const GrowthParams& params, std::uint64_t seed) {
  params.validate();
  if (data.empty()) throw ContractError("grow: empty dataset");
  Hierarchy h;
  h.params = params;
  h.seed = seed;
  h.sample_count = data.rows();
  h.root.samples.resize(data.rows());
  for (std::size_t i = 0; i < data.rows(); ++i) h.root.samples[i] = i;
  h.layer0_mean = kernels::column_means(params.execution, data, h.root.samples);
  h.qe0 = kernels::ordered_sum(kernels::distances_to(params.execution, h.layer0_mean, data, h.root.samples));
  h.root.reference_qe = h.qe0;
  regrow_node(data, params, h.qe0, data.rows(), false, seed, h.root, h.audit);
  return h;
}

// --- addressing -------------------------------------------------------------

std::string path_label(const Path& path) {
  std::string out = "[R]";
  for (const auto& hop : path) {
    if (hop.col >= kMaxGridSide || hop.row >= kMaxGridSide) {
      throw ContractError("unit coordinate exceeds the single-digit path grammar");
    }
    out += '[';
    out += static_cast<char>('0' + hop.col);
    out += static_cast<char>('0' + hop.row);
    out += ']';
  }
  return out;
}

std::string path_label(const HierarchyNode& node, bool with_count) {
  auto out = path_label(node.path);
  if (with_count) out += ':' + std::to_string(node.samples.size());
  return out;
}

Path parse_path(std::string_view label) {
  static const std::regex grammar(R"(\[R\](\[[0-9][0-9]\])*(:[0-9]+)?)");
  if (!std::regex_match(label.begin(), label.end(), grammar)) {
    throw ParseError("malformed path label '" + std::string(label) + "'");
  }
  Path path;
  for (std::size_t i = 3; i + 3 < label.size() && label[i] == '['; i += 4) {
    path.push_back({static_cast<std::size_t>(label[i + 2] - '0'), static_cast<std::size_t>(label[i + 1] - '0')});
  }
  return path;
}

const HierarchyNode& resolve_path(const Hierarchy& h, const Path& path) {
  const HierarchyNode* node = &h.root;
  for (const auto& hop : path) {
    if (!node->child_map || !node->child_map->contains(hop)) {
      throw NotFoundError("no node at " + path_label(path));
    }
    node = &node->child(hop);
  }
  return *node;
}

HierarchyNode& resolve_path(Hierarchy& h, const Path& path) {
  return const_cast<HierarchyNode&>(resolve_path(std::as_const(h), path));
}

const HierarchyNode& resolve_path(const Hierarchy& h, std::string_view label) {
  return resolve_path(h, parse_path(label));
}

// --- structure queries ------------------------------------------------------

std::size_t depth(const Hierarchy& h) {
  std::size_t d = 0;
  visit(h.root, [&](const HierarchyNode& n) {
    if (n.child_map) d = std::max(d, n.path.size() + 1);
  });
  return d;
}

std::size_t map_count(const Hierarchy& h) {
  std::size_t c = 0;
  visit(h.root, [&](const HierarchyNode& n) { c += n.child_map ? 1 : 0; });
  return c;
}

std::vector<const HierarchyNode*> leaf_units(const Hierarchy& h) {
  std::vector<const HierarchyNode*> out;
  visit(h.root, [&](const HierarchyNode& n) {
    if (!n.child_map && n.unit && !n.samples.empty()) out.push_back(&n);
  });
  return out;
}

std::vector<std::string> leaf_labels(const Hierarchy& h) {
  std::vector<std::string> labels(h.sample_count);
  for (const auto* leaf : leaf_units(h)) {
    const auto label = path_label(leaf->path);
    for (auto s : leaf->samples) labels.at(s) = label;
  }
  return labels;
}

}  // namespace ighsom
