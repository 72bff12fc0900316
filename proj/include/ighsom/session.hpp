#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ighsom/c45.hpp"
#include "ighsom/color.hpp"
#include "ighsom/filter.hpp"
#include "ighsom/hierarchy.hpp"
#include "ighsom/interactive.hpp"
#include "ighsom/records.hpp"
#include "ighsom/serialize.hpp"
#include "ighsom/text_features.hpp"

namespace ighsom {

/// One entry of a session's append-only log. Train and refine entries carry everything needed
/// to reproduce the hierarchy: full effective params and the caller-supplied seed.
struct AuditEntry {
  std::size_t seq = 0;
  std::string kind;  // data | corpus | train | refine | rules | import
  Json detail;
};

/// Immutable view of a session at one instant. Writers build a new state and swap it in whole.
struct SessionState {
  std::vector<TouristRecord> records;
  std::optional<Corpus> corpus;
  std::vector<TfidfAggregate> tfidf;
  std::shared_ptr<const Dataset> dataset;
  std::optional<PcaBasis> basis;
  std::shared_ptr<const Hierarchy> hierarchy;
  GrowthParams params;
  std::optional<CompiledRules> rules;
  std::vector<AuditEntry> audit;
};

struct FilterOutcome {
  std::vector<OutgoingMessage> messages;
  std::size_t evaluated = 0;
};

class Session {
 public:
  explicit Session(std::string id);

  const std::string& id() const noexcept { return id_; }
  std::shared_ptr<const SessionState> state() const;

  // Writers: exclusive and non-queuing (ConflictError while another write runs).
  std::size_t upload_data(std::string_view csv);
  std::size_t upload_corpus(const std::vector<std::pair<std::string, std::string>>& documents);
  Json train(const GrowthParams& params, std::uint64_t seed);
  std::pair<RefineReport, Json> refine(const std::string& path, const Json& overrides, std::uint64_t seed);
  void import_snapshot(const Json& snapshot);
  Json rules(std::size_t min_leaf = 2);
  FilterOutcome filter(const std::vector<TouristRecord>& records, const std::optional<std::vector<FilterRule>>& rules,
                       MessageSink* extra_sink = nullptr);

  // Readers.
  Json hierarchy_summary() const;
  Json node_samples(const std::string& path) const;
  Json export_snapshot() const;
  std::vector<AuditEntry> audit() const;
  const MemorySink& outbox() const noexcept { return outbox_; }

  /// Writer slot; exposed so callers (and tests) can observe or hold exclusivity.
  ExclusiveGate& gate() noexcept { return gate_; }

 private:
  std::shared_ptr<const SessionState> load() const;
  void store(std::shared_ptr<const SessionState> s);
  static void rebuild_features(SessionState& s);
  static void append(SessionState& s, std::string kind, Json detail);

  std::string id_;
  mutable std::mutex mu_;
  std::shared_ptr<const SessionState> state_;
  ExclusiveGate gate_;
  MemorySink outbox_;
};

/// Re-runs the train/refine entries of an audit log on `data`.
Hierarchy replay(const Matrix& data, const std::vector<AuditEntry>& audit);

/// Training set for C4.5: raw record attributes labelled with each sample's leaf-unit path.
InstanceSet labeled_instances(const Dataset& ds, const std::vector<TfidfAggregate>& tfidf, const Hierarchy& h);

class SessionManager {
 public:
  std::shared_ptr<Session> create();
  /// Throws NotFoundError for unknown ids.
  std::shared_ptr<Session> get(const std::string& id) const;
  std::size_t size() const;

 private:
  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::uint64_t counter_ = 0;
};

}  // namespace ighsom
