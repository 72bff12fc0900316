#include "ighsom/serialize.hpp"

#include <bit>
#include <cstdio>
#include <map>

#include "ighsom/errors.hpp"
#include "ighsom/text_util.hpp"

namespace ighsom {

namespace {

template <typename T>
T field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("field '") + key + "': " + e.what());
  }
}

Json hex_array(std::span<const double> values) {
  Json a = Json::array();
  for (double v : values) a.push_back(double_to_hex(v));
  return a;
}

std::vector<double> hex_values(const Json& a) {
  if (!a.is_array()) throw ParseError("expected an array of hex doubles");
  std::vector<double> out;
  out.reserve(a.size());
  for (const auto& v : a) out.push_back(double_from_hex(v.get<std::string>()));
  return out;
}

Json coord_json(UnitCoord c) { return Json::array({c.row, c.col}); }
UnitCoord coord_from(const Json& j) { return {j.at(0).get<std::size_t>(), j.at(1).get<std::size_t>()}; }

Json path_json(const Path& p) { return path_label(p); }

Json event_to_json(const GrowthEvent& e) {
  Json j;
  j["kind"] = std::string(to_string(e.kind));
  j["map"] = path_json(e.map_path);
  j["unit"] = coord_json(e.unit);
  j["size"] = Json::array({e.rows, e.cols});
  j["qe_k"] = double_to_hex(e.qe_k);
  j["threshold"] = double_to_hex(e.threshold);
  j["map_mqe"] = double_to_hex(e.map_mqe);
  j["reference_qe"] = double_to_hex(e.reference_qe);
  j["winner_qes"] = hex_array(e.winner_qes);
  j["n_k"] = e.n_k;
  j["n_total"] = e.n_total;
  j["assigned"] = e.assigned;
  j["scope"] = e.scope;
  j["round"] = e.round;
  return j;
}

GrowthEventKind kind_from(const std::string& s) {
  for (auto k : {GrowthEventKind::insertion, GrowthEventKind::cap_reached, GrowthEventKind::expansion,
                 GrowthEventKind::case1_stop, GrowthEventKind::case1_insertion, GrowthEventKind::case2_insertion,
                 GrowthEventKind::refine}) {
    if (to_string(k) == s) return k;
  }
  throw ParseError("unknown growth event kind '" + s + "'");
}

GrowthEvent event_from_json(const Json& j) {
  GrowthEvent e;
  e.kind = kind_from(field<std::string>(j, "kind"));
  e.map_path = parse_path(field<std::string>(j, "map"));
  e.unit = coord_from(j.at("unit"));
  e.rows = j.at("size").at(0).get<std::size_t>();
  e.cols = j.at("size").at(1).get<std::size_t>();
  e.qe_k = double_from_hex(field<std::string>(j, "qe_k"));
  e.threshold = double_from_hex(field<std::string>(j, "threshold"));
  e.map_mqe = double_from_hex(field<std::string>(j, "map_mqe"));
  e.reference_qe = double_from_hex(field<std::string>(j, "reference_qe"));
  e.winner_qes = hex_values(j.at("winner_qes"));
  e.n_k = field<std::size_t>(j, "n_k");
  e.n_total = field<std::size_t>(j, "n_total");
  e.assigned = field<std::size_t>(j, "assigned");
  e.scope = field<std::size_t>(j, "scope");
  e.round = field<std::size_t>(j, "round");
  return e;
}

Json node_snapshot(const HierarchyNode& n, const std::map<std::string, RgbColor>& colors) {
  Json j;
  j["path"] = path_label(n.path);
  j["unit"] = n.unit ? coord_json(*n.unit) : Json(nullptr);
  j["samples"] = n.samples;
  j["reference_qe"] = double_to_hex(n.reference_qe);
  if (!n.child_map) {
    j["map"] = nullptr;
    return j;
  }
  const auto& m = *n.child_map;
  Json map;
  map["rows"] = m.rows();
  map["cols"] = m.cols();
  map["dim"] = m.dim();
  map["weights"] = hex_array(m.weights().data());
  map["qe"] = hex_array(m.qes());
  if (!colors.empty()) {
    Json cs = Json::array();
    for (const auto& c : n.children) cs.push_back(to_hex(colors.at(path_label(c.path))));
    map["colors"] = cs;
  }
  j["map"] = std::move(map);
  Json children = Json::array();
  for (const auto& c : n.children) children.push_back(node_snapshot(c, colors));
  j["children"] = std::move(children);
  return j;
}

HierarchyNode node_from_snapshot(const Json& j) {
  HierarchyNode n;
  n.path = parse_path(field<std::string>(j, "path"));
  if (!j.at("unit").is_null()) n.unit = coord_from(j.at("unit"));
  n.samples = field<std::vector<std::size_t>>(j, "samples");
  n.reference_qe = double_from_hex(field<std::string>(j, "reference_qe"));
  const auto& map = j.at("map");
  if (map.is_null()) return n;
  SomMap m(field<std::size_t>(map, "rows"), field<std::size_t>(map, "cols"), field<std::size_t>(map, "dim"));
  const auto w = hex_values(map.at("weights"));
  if (w.size() != m.weights().data().size()) throw ParseError("snapshot weight count does not match map size");
  m.weights().data() = w;
  auto qe = hex_values(map.at("qe"));
  const auto& children = j.at("children");
  if (children.size() != m.unit_count() || qe.size() != m.unit_count()) {
    throw ParseError("snapshot child count does not match map size at " + path_label(n.path));
  }
  std::vector<std::vector<std::size_t>> mapped;
  for (const auto& c : children) {
    n.children.push_back(node_from_snapshot(c));
    mapped.push_back(n.children.back().samples);
  }
  m.set_assignment(std::move(mapped), std::move(qe));
  n.child_map = std::move(m);
  return n;
}

}  // namespace

Json rules_to_json(const std::vector<FilterRule>& rules) {
  Json out = Json::array();
  for (const auto& r : rules) {
    Json conds = Json::array();
    for (const auto& c : r.antecedent) {
      conds.push_back({{"attr", c.attribute}, {"op", std::string(to_string(c.op))}, {"value", c.value}});
    }
    out.push_back({{"if", conds}, {"then", r.area}});
  }
  return out;
}

std::vector<FilterRule> rules_from_json(const Json& j) {
  if (j.is_string()) return parse_rules_text(j.get<std::string>());
  if (!j.is_array()) throw ConfigurationError("rules must be a JSON list or rule text");
  std::vector<FilterRule> rules;
  for (const auto& r : j) {
    FilterRule rule;
    try {
      rule.area = field<std::string>(r, "then");
      for (const auto& c : r.at("if")) {
        rule.antecedent.push_back(
            {field<std::string>(c, "attr"), parse_comparator(field<std::string>(c, "op")), field<double>(c, "value")});
      }
    } catch (const ParseError& e) {
      throw ConfigurationError(std::string("rule ") + std::to_string(rules.size()) + ": " + e.what());
    } catch (const nlohmann::json::exception& e) {
      throw ConfigurationError(std::string("rule ") + std::to_string(rules.size()) + ": " + e.what());
    }
    rules.push_back(std::move(rule));
  }
  return rules;
}

namespace {
Json tree_node_json(const DecisionTree& t, const DecisionNode& n) {
  if (n.is_leaf()) return {{"label", n.label}, {"support", n.support}};
  return {{"attribute", t.attributes.at(n.attribute)},
          {"threshold", n.threshold},
          {"support", n.support},
          {"le", tree_node_json(t, n.le())},
          {"gt", tree_node_json(t, n.gt())}};
}
}  // namespace

Json tree_to_json(const DecisionTree& tree) {
  return {{"attributes", tree.attributes}, {"root", tree_node_json(tree, tree.root)}};
}

Json params_to_json(const GrowthParams& p) {
  return {{"tau1", p.tau1},
          {"tau2", p.tau2},
          {"alpha", p.alpha},
          {"beta", p.beta},
          {"lambda", p.lambda},
          {"max_depth", p.max_depth},
          {"max_insertions", p.max_insertions},
          {"initial_learning_rate", p.initial_learning_rate}};
}

GrowthParams params_from_json(const Json& j, GrowthParams base) {
  if (j.is_null()) return base;
  if (!j.is_object()) throw ParseError("params must be a JSON object");
  auto opt = [&](const char* key, auto& slot) {
    if (j.contains(key)) slot = field<std::decay_t<decltype(slot)>>(j, key);
  };
  opt("tau1", base.tau1);
  opt("tau2", base.tau2);
  opt("alpha", base.alpha);
  opt("beta", base.beta);
  opt("lambda", base.lambda);
  opt("max_depth", base.max_depth);
  opt("max_insertions", base.max_insertions);
  opt("initial_learning_rate", base.initial_learning_rate);
  return base;
}

Json report_to_json(const RefineReport& r) {
  return {{"scope", r.scope},
          {"scope_size_before", r.scope_size_before},
          {"scope_size_after", r.scope_size_after},
          {"depth_before", r.depth_before},
          {"depth_after", r.depth_after},
          {"case1_stops", r.case1_stops},
          {"case2_insertions", r.case2_insertions},
          {"duration_ms", r.duration_ms}};
}

Json record_to_json(const TouristRecord& r) {
  return {{"no", r.id},       {"lat", r.lat},
          {"lon", r.lon},     {"alt", r.alt},
          {"name", r.name},   {"evaluation", r.evaluation},
          {"comment", r.comment}};
}

TouristRecord record_from_json(const Json& j) {
  TouristRecord r;
  r.id = field<std::int64_t>(j, "no");
  r.lat = field<double>(j, "lat");
  r.lon = field<double>(j, "lon");
  r.alt = j.contains("alt") ? field<double>(j, "alt") : 0.0;
  r.name = j.contains("name") ? field<std::string>(j, "name") : std::string();
  r.evaluation = field<int>(j, "evaluation");
  r.comment = j.contains("comment") ? field<std::string>(j, "comment") : std::string();
  validate(r);
  return r;
}

Json message_to_json(const OutgoingMessage& m) {
  return {{"record_id", m.record_id}, {"area", m.area}, {"text", m.text}};
}

std::vector<std::pair<std::string, RgbColor>> hierarchy_colors(const Hierarchy& h, const PcaBasis& basis) {
  Matrix all;
  std::vector<std::string> labels;
  visit(h.root, [&](const HierarchyNode& n) {
    if (!n.child_map) return;
    for (std::size_t u = 0; u < n.child_map->unit_count(); ++u) {
      all.append_row(n.child_map->weight(u));
      labels.push_back(path_label(n.children[u].path));
    }
  });
  std::vector<std::pair<std::string, RgbColor>> out;
  if (all.empty()) return out;
  const auto colors = render_colors(all, basis);
  for (std::size_t i = 0; i < labels.size(); ++i) out.emplace_back(labels[i], colors[i]);
  return out;
}

Json node_summary(const HierarchyNode& node, const std::vector<std::pair<std::string, RgbColor>>& colors) {
  std::map<std::string, RgbColor> lookup(colors.begin(), colors.end());
  auto rec = [&](auto&& self, const HierarchyNode& n) -> Json {
    Json j;
    j["label"] = path_label(n, true);
    j["path"] = path_label(n.path);
    j["count"] = n.samples.size();
    if (n.unit) {
      j["row"] = n.unit->row;
      j["col"] = n.unit->col;
    }
    auto it = lookup.find(path_label(n.path));
    if (it != lookup.end()) j["color"] = to_hex(it->second);
    if (!n.child_map) {
      j["map"] = nullptr;
      return j;
    }
    const auto& m = *n.child_map;
    Json units = Json::array();
    for (std::size_t u = 0; u < m.unit_count(); ++u) {
      Json uj = self(self, n.children[u]);
      uj["qe"] = m.qe(u);
      units.push_back(std::move(uj));
    }
    j["map"] = {{"rows", m.rows()}, {"cols", m.cols()}, {"mqe", m.mqe()}, {"units", std::move(units)}};
    return j;
  };
  return rec(rec, node);
}

Json hierarchy_summary(const Hierarchy& h, const PcaBasis& basis) {
  const auto colors = hierarchy_colors(h, basis);
  Json j;
  j["qe0"] = h.qe0;
  j["samples"] = h.sample_count;
  j["depth"] = depth(h);
  j["maps"] = map_count(h);
  j["seed"] = h.seed;
  j["params"] = params_to_json(h.params);
  j["root"] = node_summary(h.root, colors);
  return j;
}

Json snapshot_to_json(const Hierarchy& h, const std::string& fingerprint, const PcaBasis* basis) {
  std::map<std::string, RgbColor> colors;
  if (basis) {
    for (auto& [k, v] : hierarchy_colors(h, *basis)) colors.emplace(k, v);
  }
  Json j;
  j["version"] = std::string(kSnapshotVersion);
  j["fingerprint"] = fingerprint;
  j["seed"] = h.seed;
  j["sample_count"] = h.sample_count;
  j["qe0"] = double_to_hex(h.qe0);
  j["layer0_mean"] = hex_array(h.layer0_mean);
  j["params"] = params_to_json(h.params);
  j["root"] = node_snapshot(h.root, colors);
  Json audit = Json::array();
  for (const auto& e : h.audit) audit.push_back(event_to_json(e));
  j["audit"] = std::move(audit);
  return j;
}

Hierarchy snapshot_from_json(const Json& j, std::string* fingerprint) {
  try {
    if (field<std::string>(j, "version") != kSnapshotVersion) {
      throw ParseError("unsupported snapshot version '" + j.at("version").get<std::string>() + "'");
    }
    Hierarchy h;
    h.seed = field<std::uint64_t>(j, "seed");
    h.sample_count = field<std::size_t>(j, "sample_count");
    h.qe0 = double_from_hex(field<std::string>(j, "qe0"));
    h.layer0_mean = hex_values(j.at("layer0_mean"));
    h.params = params_from_json(j.at("params"));
    h.root = node_from_snapshot(j.at("root"));
    for (const auto& e : j.at("audit")) h.audit.push_back(event_from_json(e));
    if (fingerprint) *fingerprint = field<std::string>(j, "fingerprint");
    return h;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed snapshot: ") + e.what());
  }
}

std::string dataset_fingerprint(const Dataset& ds) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&](const void* p, std::size_t n) {
    const auto* b = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= b[i];
      h *= 0x100000001b3ULL;
    }
  };
  for (const auto& s : ds.schema) {
    mix(s.data(), s.size());
    mix("\0", 1);
  }
  const std::uint64_t rows = ds.features.rows();
  mix(&rows, sizeof rows);
  for (double v : ds.features.data()) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    mix(&bits, sizeof bits);
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace ighsom
