#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ighsom/matrix.hpp"

namespace ighsom {

inline constexpr std::size_t kMaxCommentChars = 140;
inline constexpr int kMinEvaluation = 0;
inline constexpr int kMaxEvaluation = 4;

/// One sensed observation from the participatory sensing app.
struct TouristRecord {
  std::int64_t id = 0;
  double lat = 0.0;
  double lon = 0.0;
  double alt = 0.0;
  std::string name;
  int evaluation = 0;
  std::string comment;

  bool operator==(const TouristRecord&) const = default;
};

/// Throws ValidationError if any field breaks the record invariants.
void validate(const TouristRecord& r);

struct RowDiagnostic {
  enum class Kind { parse, validation };
  std::size_t line = 0;  // 1-based physical line where the row starts
  Kind kind = Kind::parse;
  std::string message;
};

/// Every malformed row of a CSV upload, reported together.
class IngestError : public std::runtime_error {
 public:
  explicit IngestError(std::vector<RowDiagnostic> diagnostics);
  const std::vector<RowDiagnostic>& diagnostics() const noexcept { return diagnostics_; }
  bool has(RowDiagnostic::Kind kind) const;

 private:
  std::vector<RowDiagnostic> diagnostics_;
};

inline constexpr std::string_view kCsvHeader = "no,lat,lon,alt,name,evaluation,comment";

/// RFC-4180 CSV with the fixed header above. Throws IngestError listing every bad row.
std::vector<TouristRecord> parse_records(std::string_view csv_text);

/// Writer counterpart of parse_records; numbers use shortest round-trip form.
std::string render_csv(std::span<const TouristRecord> records);

/// KML 2.2 document with one Placemark per record, in input order.
std::string export_kml(std::span<const TouristRecord> records);

// ---------------------------------------------------------------------------
// Feature assembly

enum class Attribute : std::uint8_t { lat, lon, alt, evaluation, tfidf_max, tfidf_sum };
inline constexpr std::size_t kAttributeCount = 6;

std::string_view attribute_name(Attribute a);

/// Which attributes enter the feature vector. Default: all six, in canonical order.
struct FeatureMask {
  bool lat = true, lon = true, alt = true, evaluation = true, tfidf_max = true, tfidf_sum = true;
  bool includes(Attribute a) const;
};

struct TfidfAggregate {
  double max = 0.0;
  double sum = 0.0;
};

struct AttributeStats {
  double mean = 0.0;
  double std = 1.0;       // population standard deviation; 1 when constant
  bool constant = false;  // constant columns normalize to 0 everywhere
};

/// Records plus index-aligned raw and z-scored feature rows.
struct Dataset {
  std::vector<TouristRecord> records;      // may be empty for generic numeric data
  std::vector<std::string> schema;
  Matrix raw;
  Matrix features;
  std::vector<AttributeStats> normalization;

  std::size_t size() const noexcept { return features.rows(); }
  FeatureVector feature(std::size_t i) const;
  std::vector<double> denormalize(std::span<const double> z) const;
};

/// Z-score every column with population statistics. Constant columns map to 0.
Dataset normalize(Matrix raw, std::vector<std::string> schema);

Dataset build_features(std::span<const TouristRecord> records, std::span<const TfidfAggregate> tfidf,
                       const FeatureMask& mask = {});

/// Raw attribute row for a record, in canonical Attribute order.
std::vector<double> raw_attributes(const TouristRecord& r, const TfidfAggregate& t);

}  // namespace ighsom
