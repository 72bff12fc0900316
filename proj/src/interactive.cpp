#include "ighsom/interactive.hpp"

#include <algorithm>
#include <chrono>

#include "ighsom/errors.hpp"

namespace ighsom {

bool case1_stop(std::size_t n_k, std::size_t n_total, double alpha) {
  if (n_total < 1) throw ContractError("case1_stop: n_I must be at least 1");
  if (n_k > n_total) throw ContractError("case1_stop: n_k exceeds n_I");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ContractError("case1_stop: alpha must lie in [0, 1]");
  return static_cast<double>(n_k) <= alpha * static_cast<double>(n_total);
}

bool case2_insert(double qe_k, std::span<const double> winner_qes, double beta, double tau1) {
  if (winner_qes.empty()) throw ContractError("case2_insert: empty winner set");
  if (!(beta > 0.0) || !(tau1 > 0.0)) throw ContractError("case2_insert: beta and tau1 must be positive");
  if (std::find(winner_qes.begin(), winner_qes.end(), qe_k) == winner_qes.end()) {
    throw ContractError("case2_insert: qe_k is not the error of a winner unit");
  }
  double sum = 0.0;
  for (double q : winner_qes) sum += q;
  return qe_k >= beta * tau1 * sum;
}

Path refine_scope(const Path& target) {
  if (target.empty()) return {};
  return Path(target.begin(), target.end() - 1);
}

std::pair<Hierarchy, RefineReport> refine(const Hierarchy& h, const RefineRequest& req, const Matrix& data) {
  const auto start = std::chrono::steady_clock::now();
  req.params.validate();
  if (data.rows() != h.sample_count) throw ContractError("refine: data does not match the hierarchy's dataset");
  const Path target = parse_path(req.target);
  resolve_path(h, target);  // not-found check before any work

  const Path scope = refine_scope(target);
  Hierarchy out = h;
  HierarchyNode& node = resolve_path(out, scope);

  RefineReport report;
  report.scope = path_label(scope);
  report.depth_before = depth(h);
  report.scope_size_before = node.samples.size();

  GrowthEvent marker;
  marker.kind = GrowthEventKind::refine;
  marker.map_path = scope;
  marker.scope = node.samples.size();
  marker.n_total = h.sample_count;
  out.audit.push_back(std::move(marker));

  const auto stats = regrow_node(data, req.params, h.qe0, h.sample_count, true, req.seed, node, out.audit);

  std::size_t after = 0;
  for (const auto& c : node.children) after += c.samples.size();
  report.scope_size_after = after;
  report.depth_after = depth(out);
  report.case1_stops = stats.case1_stops;
  report.case2_insertions = stats.case2_insertions;
  report.duration_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return {std::move(out), report};
}

ExclusiveGate::Token ExclusiveGate::acquire(const char* what) {
  bool expected = false;
  if (!busy_.compare_exchange_strong(expected, true, std::memory_order_acq_rel)) {
    throw ConflictError(std::string(what) + " rejected: another write is in progress");
  }
  return Token(busy_);
}

}  // namespace ighsom
