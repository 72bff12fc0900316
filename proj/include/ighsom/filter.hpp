#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ighsom/records.hpp"
#include "ighsom/rules.hpp"

namespace ighsom {

inline constexpr std::string_view kHashtag = "#KankouMap";
inline constexpr std::size_t kMaxMessageChars = 140;

/// Which per-record aggregate the bare attribute name "tfidf" refers to.
enum class TfidfAlias { sum, max };

/// Canonical attribute names a rule may reference (see Attribute), plus the "tfidf" alias.
std::vector<std::string> filter_schema();

/// Rules bound to attribute positions. Binding happens once, so unknown attributes and
/// inconsistent bounds surface when the rules are loaded rather than per record.
class CompiledRules {
 public:
  CompiledRules() = default;
  static CompiledRules compile(std::vector<FilterRule> rules, TfidfAlias alias = TfidfAlias::sum);

  /// First rule (in list order) whose conditions all hold.
  std::optional<std::string> evaluate(std::span<const double> attributes) const;
  std::optional<std::string> evaluate(const TouristRecord& record, const TfidfAggregate& tfidf) const;

  const std::vector<FilterRule>& rules() const noexcept { return rules_; }
  bool empty() const noexcept { return rules_.empty(); }

 private:
  struct BoundCondition {
    std::size_t column;
    Comparator op;
    double value;
  };
  std::vector<FilterRule> rules_;
  std::vector<std::vector<BoundCondition>> bound_;
};

struct OutgoingMessage {
  std::string text;
  std::string area;
  std::int64_t record_id = 0;
  bool operator==(const OutgoingMessage&) const = default;
};

/// Comment + " " + hashtag, truncating the comment so the total stays within 140 characters.
OutgoingMessage format_message(const TouristRecord& record, std::string area);

/// {"record_id":..,"area":..,"text":..} on one line.
std::string to_json_line(const OutgoingMessage& m);

class DeliveryError : public std::runtime_error {
 public:
  DeliveryError(const std::string& what, OutgoingMessage message)
      : std::runtime_error(what), message_(std::move(message)) {}
  const OutgoingMessage& message() const noexcept { return message_; }

 private:
  OutgoingMessage message_;
};

class MessageSink {
 public:
  virtual ~MessageSink() = default;
  /// Delivers exactly once or throws; never retries.
  virtual void deliver(const OutgoingMessage& m) = 0;
};

/// JSON lines onto an existing stream (stdout by default in the CLI).
class StreamSink : public MessageSink {
 public:
  explicit StreamSink(std::ostream& os) : os_(os) {}
  void deliver(const OutgoingMessage& m) override;

 private:
  std::ostream& os_;
  std::mutex mu_;
};

/// Appends JSON lines to a file.
class JsonLinesFileSink : public MessageSink {
 public:
  explicit JsonLinesFileSink(std::filesystem::path path) : path_(std::move(path)) {}
  void deliver(const OutgoingMessage& m) override;
  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::filesystem::path path_;
  std::mutex mu_;
};

/// Keeps delivered messages in memory.
class MemorySink : public MessageSink {
 public:
  void deliver(const OutgoingMessage& m) override;
  std::vector<OutgoingMessage> messages() const;

 private:
  mutable std::mutex mu_;
  std::vector<OutgoingMessage> messages_;
};

/// Formats and delivers one message; sink failures come back as DeliveryError carrying it.
OutgoingMessage emit(const TouristRecord& record, const std::string& area, MessageSink& sink);

}  // namespace ighsom
