#pragma once

// JSON wire formats shared by the HTTP API, the CLI and snapshot files.

#include <json.hpp>
#include <string>
#include <vector>

#include "ighsom/c45.hpp"
#include "ighsom/color.hpp"
#include "ighsom/filter.hpp"
#include "ighsom/hierarchy.hpp"
#include "ighsom/interactive.hpp"
#include "ighsom/records.hpp"
#include "ighsom/rules.hpp"

namespace ighsom {

using Json = nlohmann::ordered_json;

inline constexpr std::string_view kSnapshotVersion = "ighsom-snapshot/1";

// Rule files: [{"if": [{"attr": .., "op": .., "value": ..}, ...], "then": area}, ...]
Json rules_to_json(const std::vector<FilterRule>& rules);
std::vector<FilterRule> rules_from_json(const Json& j);

Json tree_to_json(const DecisionTree& tree);

Json params_to_json(const GrowthParams& p);
/// Overrides only the fields present in `j`.
GrowthParams params_from_json(const Json& j, GrowthParams base = {});

Json report_to_json(const RefineReport& r);
Json record_to_json(const TouristRecord& r);
TouristRecord record_from_json(const Json& j);
Json message_to_json(const OutgoingMessage& m);

/// Colors of every unit in the hierarchy, from one rendering pass; keyed by unit path label.
std::vector<std::pair<std::string, RgbColor>> hierarchy_colors(const Hierarchy& h, const PcaBasis& basis);

/// Browsable node tree: labels, grid sizes, per-unit counts, qe and hex colors.
Json hierarchy_summary(const Hierarchy& h, const PcaBasis& basis);
Json node_summary(const HierarchyNode& node, const std::vector<std::pair<std::string, RgbColor>>& colors);

/// Exact snapshot: weights, qe values and other doubles as 16-digit hex bit patterns.
Json snapshot_to_json(const Hierarchy& h, const std::string& fingerprint, const PcaBasis* basis = nullptr);
Hierarchy snapshot_from_json(const Json& j, std::string* fingerprint = nullptr);

/// 64-bit FNV-1a over the schema and exact feature bits, as 16 hex digits.
std::string dataset_fingerprint(const Dataset& ds);

}  // namespace ighsom
