#include "ighsom/session.hpp"

#include <cstdio>
#include <random>

#include "ighsom/errors.hpp"
#include "ighsom/text_util.hpp"

namespace ighsom {

Session::Session(std::string id) : id_(std::move(id)), state_(std::make_shared<SessionState>()) {}

std::shared_ptr<const SessionState> Session::load() const {
  std::lock_guard lock(mu_);
  return state_;
}

std::shared_ptr<const SessionState> Session::state() const { return load(); }

void Session::store(std::shared_ptr<const SessionState> s) {
  std::lock_guard lock(mu_);
  state_ = std::move(s);
}

void Session::append(SessionState& s, std::string kind, Json detail) {
  s.audit.push_back({s.audit.size() + 1, std::move(kind), std::move(detail)});
}

void Session::rebuild_features(SessionState& s) {
  if (s.corpus) {
    s.tfidf = score_records(s.records, *s.corpus);
  } else {
    s.tfidf.assign(s.records.size(), TfidfAggregate{});
  }
  s.dataset = std::make_shared<const Dataset>(build_features(s.records, s.tfidf));
  s.basis.reset();
  if (!s.records.empty()) s.basis = fit_pca(s.dataset->features);
  s.hierarchy.reset();
  s.rules.reset();
}

std::size_t Session::upload_data(std::string_view csv) {
  auto token = gate_.acquire("data upload");
  auto records = parse_records(csv);
  auto next = std::make_shared<SessionState>(*load());
  next->records = std::move(records);
  rebuild_features(*next);
  append(*next, "data", {{"records", next->records.size()}, {"fingerprint", dataset_fingerprint(*next->dataset)}});
  const auto n = next->records.size();
  store(std::move(next));
  return n;
}

std::size_t Session::upload_corpus(const std::vector<std::pair<std::string, std::string>>& documents) {
  auto token = gate_.acquire("corpus upload");
  auto corpus = build_corpus(documents);
  auto next = std::make_shared<SessionState>(*load());
  next->corpus = std::move(corpus);
  rebuild_features(*next);
  append(*next, "corpus",
         {{"documents", next->corpus->document_count()}, {"fingerprint", dataset_fingerprint(*next->dataset)}});
  const auto n = next->corpus->document_count();
  store(std::move(next));
  return n;
}

Json Session::train(const GrowthParams& params, std::uint64_t seed) {
  auto token = gate_.acquire("train");
  const auto cur = load();
  if (!cur->dataset || cur->dataset->size() == 0) throw PreconditionError("train: no data uploaded");
  auto h = std::make_shared<const Hierarchy>(grow(cur->dataset->features, params, seed));
  auto next = std::make_shared<SessionState>(*cur);
  next->hierarchy = h;
  next->params = params;
  next->rules.reset();
  append(*next, "train", {{"seed", seed}, {"params", params_to_json(params)}});
  auto summary = ighsom::hierarchy_summary(*h, *next->basis);
  store(std::move(next));
  return summary;
}

std::pair<RefineReport, Json> Session::refine(const std::string& path, const Json& overrides, std::uint64_t seed) {
  auto token = gate_.acquire("refine");
  const auto cur = load();
  if (!cur->hierarchy) throw PreconditionError("refine: no hierarchy trained");
  RefineRequest req{path, params_from_json(overrides, cur->params), seed};
  auto [h, report] = ighsom::refine(*cur->hierarchy, req, cur->dataset->features);
  auto next = std::make_shared<SessionState>(*cur);
  next->hierarchy = std::make_shared<const Hierarchy>(std::move(h));
  next->rules.reset();
  append(*next, "refine", {{"target", path}, {"seed", seed}, {"params", params_to_json(req.params)}});
  const auto colors = hierarchy_colors(*next->hierarchy, *next->basis);
  Json subtree = node_summary(resolve_path(*next->hierarchy, parse_path(report.scope)), colors);
  store(std::move(next));
  return {report, std::move(subtree)};
}

void Session::import_snapshot(const Json& snapshot) {
  auto token = gate_.acquire("snapshot import");
  const auto cur = load();
  if (!cur->dataset) throw PreconditionError("import: no data uploaded");
  std::string fp;
  Hierarchy h = snapshot_from_json(snapshot, &fp);
  const auto mine = dataset_fingerprint(*cur->dataset);
  if (fp != mine) {
    throw FingerprintError(fp, mine);
  }
  if (h.sample_count != cur->dataset->size()) throw ValidationError("snapshot sample count mismatch");
  auto next = std::make_shared<SessionState>(*cur);
  next->params = h.params;
  next->hierarchy = std::make_shared<const Hierarchy>(std::move(h));
  next->rules.reset();
  append(*next, "import", {{"fingerprint", fp}});
  store(std::move(next));
}

InstanceSet labeled_instances(const Dataset& ds, const std::vector<TfidfAggregate>& tfidf, const Hierarchy& h) {
  if (ds.records.size() != h.sample_count || tfidf.size() != h.sample_count) {
    throw ContractError("labeled_instances: dataset and hierarchy disagree on sample count");
  }
  InstanceSet set;
  set.attributes = filter_schema();
  const auto labels = leaf_labels(h);
  for (std::size_t i = 0; i < ds.records.size(); ++i) {
    set.instances.push_back({raw_attributes(ds.records[i], tfidf[i]), labels[i]});
  }
  return set;
}

Json Session::rules(std::size_t min_leaf) {
  auto token = gate_.acquire("rule extraction");
  const auto cur = load();
  if (!cur->hierarchy) throw PreconditionError("rules: no hierarchy trained");
  const auto tree = induce(labeled_instances(*cur->dataset, cur->tfidf, *cur->hierarchy), min_leaf);
  auto rules = extract_rules(tree);
  auto next = std::make_shared<SessionState>(*cur);
  next->rules = CompiledRules::compile(rules);
  append(*next, "rules", {{"rules", rules.size()}, {"tree_nodes", node_count(tree.root)}});
  store(std::move(next));
  return {{"rules", rules_to_json(rules)},
          {"tree", tree_to_json(tree)},
          {"tree_text", to_text(tree)},
          {"tree_nodes", node_count(tree.root)}};
}

FilterOutcome Session::filter(const std::vector<TouristRecord>& records,
                              const std::optional<std::vector<FilterRule>>& rules, MessageSink* extra_sink) {
  const auto cur = load();
  CompiledRules compiled;
  if (rules) {
    compiled = CompiledRules::compile(*rules);
  } else if (cur->rules) {
    compiled = *cur->rules;
  } else {
    if (!cur->hierarchy) throw PreconditionError("filter: no rules supplied and no hierarchy trained");
    const auto tree = induce(labeled_instances(*cur->dataset, cur->tfidf, *cur->hierarchy));
    compiled = CompiledRules::compile(extract_rules(tree));
  }
  std::vector<TfidfAggregate> tfidf = cur->corpus ? score_records(records, *cur->corpus)
                                                  : std::vector<TfidfAggregate>(records.size());
  FilterOutcome out;
  for (std::size_t i = 0; i < records.size(); ++i) {
    ++out.evaluated;
    const auto area = compiled.evaluate(records[i], tfidf[i]);
    if (!area) continue;
    out.messages.push_back(emit(records[i], *area, outbox_));
    if (extra_sink) extra_sink->deliver(out.messages.back());
  }
  return out;
}

Json Session::hierarchy_summary() const {
  const auto cur = load();
  if (!cur->hierarchy) throw PreconditionError("no hierarchy trained");
  return ighsom::hierarchy_summary(*cur->hierarchy, *cur->basis);
}

Json Session::node_samples(const std::string& path) const {
  const auto cur = load();
  if (!cur->hierarchy) throw PreconditionError("no hierarchy trained");
  const auto& node = resolve_path(*cur->hierarchy, path);
  Json samples = Json::array();
  for (auto s : node.samples) {
    const auto& r = cur->dataset->records.at(s);
    samples.push_back({{"index", s},
                       {"no", r.id},
                       {"name", r.name},
                       {"evaluation", r.evaluation},
                       {"comment", r.comment},
                       {"tfidf_max", cur->tfidf.at(s).max},
                       {"tfidf_sum", cur->tfidf.at(s).sum}});
  }
  return {{"path", path_label(node.path)}, {"label", path_label(node, true)}, {"samples", std::move(samples)}};
}

Json Session::export_snapshot() const {
  const auto cur = load();
  if (!cur->hierarchy) throw PreconditionError("export: no hierarchy trained");
  return snapshot_to_json(*cur->hierarchy, dataset_fingerprint(*cur->dataset), cur->basis ? &*cur->basis : nullptr);
}

std::vector<AuditEntry> Session::audit() const { return load()->audit; }

Hierarchy replay(const Matrix& data, const std::vector<AuditEntry>& audit) {
  std::optional<Hierarchy> h;
  for (const auto& e : audit) {
    if (e.kind == "train") {
      h = grow(data, params_from_json(e.detail.at("params")), e.detail.at("seed").get<std::uint64_t>());
    } else if (e.kind == "refine") {
      if (!h) throw PreconditionError("replay: refine before train");
      RefineRequest req{e.detail.at("target").get<std::string>(), params_from_json(e.detail.at("params")),
                        e.detail.at("seed").get<std::uint64_t>()};
      h = refine(*h, req, data).first;
    } else if (e.kind == "import") {
      throw PreconditionError("replay: log contains a snapshot import; replay from the snapshot instead");
    } else if (e.kind == "data" || e.kind == "corpus") {
      h.reset();
    }
  }
  if (!h) throw PreconditionError("replay: log has no train entry");
  return std::move(*h);
}

std::shared_ptr<Session> SessionManager::create() {
  std::lock_guard lock(mu_);
  static thread_local std::mt19937_64 ids{std::random_device{}()};
  std::string id;
  do {
    char buf[24];
    std::snprintf(buf, sizeof buf, "s%016llx", static_cast<unsigned long long>(ids() ^ ++counter_));
    id = buf;
  } while (sessions_.count(id));
  auto s = std::make_shared<Session>(id);
  sessions_.emplace(id, s);
  return s;
}

std::shared_ptr<Session> SessionManager::get(const std::string& id) const {
  std::lock_guard lock(mu_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw NotFoundError("unknown session '" + id + "'");
  return it->second;
}

std::size_t SessionManager::size() const {
  std::lock_guard lock(mu_);
  return sessions_.size();
}

}  // namespace ighsom
