#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>

#include "ighsom/hierarchy.hpp"

namespace ighsom {

/// Stratification stop: true when n_k <= alpha * n_I, i.e. the unit is too small to get its
/// own layer and the map should receive more units instead.
bool case1_stop(std::size_t n_k, std::size_t n_total, double alpha);

/// Error-driven insertion: true when qe_k >= beta * tau1 * sum(winner_qes).
/// `qe_k` must be one of `winner_qes`.
bool case2_insert(double qe_k, std::span<const double> winner_qes, double beta, double tau1);

struct RefineRequest {
  std::string target;  // path label of the touched node
  GrowthParams params;
  std::uint64_t seed = 0;
};

struct RefineReport {
  std::string scope;  // label of the node whose map was regrown
  std::size_t scope_size_before = 0;
  std::size_t scope_size_after = 0;
  std::size_t depth_before = 0;
  std::size_t depth_after = 0;
  std::size_t case1_stops = 0;
  std::size_t case2_insertions = 0;
  double duration_ms = 0.0;
};

/// Path of the node whose map is regrown when `target` is touched: the parent of the target,
/// or the root when the target is the root.
Path refine_scope(const Path& target);

/// Discards the subtree rooted at the target's parent map and regrows it over the same samples
/// with both interactive rules active. Everything outside that scope is copied unchanged.
std::pair<Hierarchy, RefineReport> refine(const Hierarchy& h, const RefineRequest& req, const Matrix& data);

/// Non-queuing exclusive writer slot: acquire() throws ConflictError while another holder exists.
class ExclusiveGate {
 public:
  class Token {
   public:
    explicit Token(std::atomic<bool>& flag) : flag_(&flag) {}
    Token(Token&& o) noexcept : flag_(std::exchange(o.flag_, nullptr)) {}
    Token(const Token&) = delete;
    Token& operator=(const Token&) = delete;
    Token& operator=(Token&&) = delete;
    ~Token() {
      if (flag_) flag_->store(false, std::memory_order_release);
    }

   private:
    std::atomic<bool>* flag_;
  };

  Token acquire(const char* what = "operation");
  bool busy() const noexcept { return busy_.load(std::memory_order_acquire); }

 private:
  std::atomic<bool> busy_{false};
};

}  // namespace ighsom
