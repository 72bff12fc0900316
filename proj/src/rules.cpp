#include "ighsom/rules.hpp"

#include <cctype>
#include <charconv>

#include "ighsom/errors.hpp"
#include "ighsom/text_util.hpp"

namespace ighsom {

std::string_view to_string(Comparator c) {
  switch (c) {
    case Comparator::lt: return "<";
    case Comparator::gt: return ">";
    case Comparator::le: return "<=";
    case Comparator::ge: return ">=";
  }
  return "?";
}

Comparator parse_comparator(std::string_view s) {
  if (s == "<") return Comparator::lt;
  if (s == ">") return Comparator::gt;
  if (s == "<=" || s == "≤") return Comparator::le;
  if (s == ">=" || s == "≥") return Comparator::ge;
  throw ConfigurationError("unknown comparator '" + std::string(s) + "'");
}

bool compare(double value, Comparator op, double threshold) {
  switch (op) {
    case Comparator::lt: return value < threshold;
    case Comparator::gt: return value > threshold;
    case Comparator::le: return value <= threshold;
    case Comparator::ge: return value >= threshold;
  }
  return false;
}

std::string describe(const FilterRule& rule) {
  std::string out = "IF ";
  if (rule.antecedent.empty()) out += "true";
  for (std::size_t i = 0; i < rule.antecedent.size(); ++i) {
    const auto& c = rule.antecedent[i];
    if (i) out += " & ";
    out += "`" + c.attribute + "' " + std::string(to_string(c.op)) + " " + format_double(c.value);
  }
  out += " THEN Area is `" + rule.area + "'.";
  return out;
}

namespace {

class RuleReader {
 public:
  explicit RuleReader(std::string_view text) : s_(text) {}

  std::vector<FilterRule> read_all() {
    std::vector<FilterRule> rules;
    for (skip_space(); pos_ < s_.size(); skip_space()) {
      if (accept_word("Rule")) {
        expect(":");
        continue;
      }
      rules.push_back(read_rule());
    }
    return rules;
  }

 private:
  FilterRule read_rule() {
    FilterRule rule;
    expect_word("IF");
    if (!accept_word("true")) {
      do {
        Condition c;
        c.attribute = read_name();
        c.op = read_comparator();
        c.value = read_number();
        rule.antecedent.push_back(std::move(c));
      } while (accept("&"));
    }
    expect_word("THEN");
    expect_word("Area");
    expect_word("is");
    rule.area = read_name();
    accept(".");
    return rule;
  }

  std::string read_name() {
    skip_space();
    if (accept("`") || accept("'") || accept("\"")) {
      const auto end = s_.find_first_of("'`\"", pos_);
      if (end == std::string_view::npos) fail("unterminated name");
      std::string name(s_.substr(pos_, end - pos_));
      pos_ = end + 1;
      return name;
    }
    const auto start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    if (pos_ == start) fail("expected a name");
    return std::string(s_.substr(start, pos_ - start));
  }

  Comparator read_comparator() {
    skip_space();
    for (std::string_view op : {"<=", ">=", "≤", "≥", "<", ">"}) {
      if (s_.substr(pos_, op.size()) == op) {
        pos_ += op.size();
        return parse_comparator(op);
      }
    }
    fail("expected a comparator");
  }

  double read_number() {
    skip_space();
    double v = 0.0;
    const auto* first = s_.data() + pos_;
    const auto [ptr, ec] = std::from_chars(first, s_.data() + s_.size(), v);
    if (ec != std::errc{}) fail("expected a number");
    pos_ += static_cast<std::size_t>(ptr - first);
    return v;
  }

  void skip_space() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(std::string_view tok) {
    skip_space();
    if (s_.substr(pos_, tok.size()) != tok) return false;
    pos_ += tok.size();
    return true;
  }

  bool accept_word(std::string_view word) {
    skip_space();
    if (s_.substr(pos_, word.size()) != word) return false;
    const auto end = pos_ + word.size();
    if (end < s_.size() && std::isalnum(static_cast<unsigned char>(s_[end]))) return false;
    pos_ = end;
    return true;
  }

  void expect(std::string_view tok) {
    if (!accept(tok)) fail("expected '" + std::string(tok) + "'");
  }
  void expect_word(std::string_view word) {
    if (!accept_word(word)) fail("expected '" + std::string(word) + "'");
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigurationError("rule text, offset " + std::to_string(pos_) + ": " + what);
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<FilterRule> parse_rules_text(std::string_view text) { return RuleReader(text).read_all(); }

}  // namespace ighsom
