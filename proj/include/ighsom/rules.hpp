#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace ighsom {

enum class Comparator { lt, gt, le, ge };

std::string_view to_string(Comparator c);
/// Accepts "<", ">", "<=", ">=" and the Unicode forms "≤", "≥".
Comparator parse_comparator(std::string_view s);
bool compare(double value, Comparator op, double threshold);

struct Condition {
  std::string attribute;
  Comparator op = Comparator::gt;
  double value = 0.0;
  bool operator==(const Condition&) const = default;
};

/// Conjunctive rule: IF all conditions hold THEN the record belongs to `area`.
struct FilterRule {
  std::vector<Condition> antecedent;
  std::string area;
  bool operator==(const FilterRule&) const = default;
};

/// Human-readable "IF `a' > 1 & `b' <= 2 THEN Area is `X'." form.
std::string describe(const FilterRule& rule);

/// Reads rules written in the describe() form, e.g.
///
///   Rule:
///    IF `evaluation' > 2 & `lon' < 132.386
///       & `lat' < 34.4323 & `tfidf' > 0.4022
///    THEN Area is `Miyajima'.
///
/// Whitespace and line breaks are free; "Rule:" headers are optional. Throws ConfigurationError.
std::vector<FilterRule> parse_rules_text(std::string_view text);

}  // namespace ighsom
