#include "ighsom/filter.hpp"

#include <json.hpp>
#include <map>

#include "ighsom/errors.hpp"
#include "ighsom/text_util.hpp"

namespace ighsom {

std::vector<std::string> filter_schema() {
  std::vector<std::string> s;
  for (std::size_t a = 0; a < kAttributeCount; ++a) s.emplace_back(attribute_name(static_cast<Attribute>(a)));
  return s;
}

namespace {

bool is_lower(Comparator op) { return op == Comparator::gt || op == Comparator::ge; }

}  // namespace

CompiledRules CompiledRules::compile(std::vector<FilterRule> rules, TfidfAlias alias) {
  const auto schema = filter_schema();
  auto column_of = [&](const std::string& name) -> std::size_t {
    if (name == "tfidf") {
      return static_cast<std::size_t>(alias == TfidfAlias::sum ? Attribute::tfidf_sum : Attribute::tfidf_max);
    }
    for (std::size_t j = 0; j < schema.size(); ++j) {
      if (schema[j] == name) return j;
    }
    throw ConfigurationError("rule references unknown attribute '" + name + "'");
  };

  CompiledRules out;
  for (std::size_t r = 0; r < rules.size(); ++r) {
    const auto& rule = rules[r];
    if (rule.area.empty()) throw ConfigurationError("rule " + std::to_string(r) + " has no area label");
    std::map<std::size_t, std::pair<std::optional<double>, std::optional<double>>> bounds;
    std::vector<BoundCondition> bound;
    for (const auto& c : rule.antecedent) {
      const auto col = column_of(c.attribute);
      auto& [lo, hi] = bounds[col];
      auto& slot = is_lower(c.op) ? lo : hi;
      if (slot) {
        throw ConfigurationError("rule " + std::to_string(r) + " bounds '" + c.attribute + "' twice on one side");
      }
      slot = c.value;
      if (lo && hi && !(*lo < *hi)) {
        throw ConfigurationError("rule " + std::to_string(r) + " has an empty interval on '" + c.attribute + "'");
      }
      bound.push_back({col, c.op, c.value});
    }
    out.bound_.push_back(std::move(bound));
  }
  out.rules_ = std::move(rules);
  return out;
}

std::optional<std::string> CompiledRules::evaluate(std::span<const double> attributes) const {
  if (attributes.size() != kAttributeCount) throw ContractError("evaluate: expected all six record attributes");
  for (std::size_t r = 0; r < bound_.size(); ++r) {
    bool ok = true;
    for (const auto& c : bound_[r]) {
      if (!compare(attributes[c.column], c.op, c.value)) {
        ok = false;
        break;
      }
    }
    if (ok) return rules_[r].area;
  }
  return std::nullopt;
}

std::optional<std::string> CompiledRules::evaluate(const TouristRecord& record, const TfidfAggregate& tfidf) const {
  return evaluate(raw_attributes(record, tfidf));
}

OutgoingMessage format_message(const TouristRecord& record, std::string area) {
  OutgoingMessage m;
  m.area = std::move(area);
  m.record_id = record.id;
  const std::size_t room = kMaxMessageChars - utf8_length(kHashtag) - 1;
  const auto comment = utf8_truncate(record.comment, room);
  m.text = comment.empty() ? std::string(kHashtag) : comment + " " + std::string(kHashtag);
  return m;
}

std::string to_json_line(const OutgoingMessage& m) {
  nlohmann::ordered_json j;
  j["record_id"] = m.record_id;
  j["area"] = m.area;
  j["text"] = m.text;
  return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

void StreamSink::deliver(const OutgoingMessage& m) {
  std::lock_guard lock(mu_);
  os_ << to_json_line(m) << '\n';
  os_.flush();
  if (!os_) throw DeliveryError("stream sink failed", m);
}

void JsonLinesFileSink::deliver(const OutgoingMessage& m) {
  std::lock_guard lock(mu_);
  std::ofstream out(path_, std::ios::app);
  if (!out) throw DeliveryError("cannot open message file " + path_.string(), m);
  out << to_json_line(m) << '\n';
  out.flush();
  if (!out) throw DeliveryError("write to " + path_.string() + " failed", m);
}

void MemorySink::deliver(const OutgoingMessage& m) {
  std::lock_guard lock(mu_);
  messages_.push_back(m);
}

std::vector<OutgoingMessage> MemorySink::messages() const {
  std::lock_guard lock(mu_);
  return messages_;
}

OutgoingMessage emit(const TouristRecord& record, const std::string& area, MessageSink& sink) {
  auto m = format_message(record, area);
  try {
    sink.deliver(m);
  } catch (const DeliveryError&) {
    throw;
  } catch (const std::exception& e) {
    throw DeliveryError(std::string("sink unavailable: ") + e.what(), m);
  }
  return m;
}

}  // namespace ighsom
