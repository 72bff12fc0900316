#include "ighsom/records.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "ighsom/errors.hpp"
#include "ighsom/text_util.hpp"

namespace ighsom {

void validate(const TouristRecord& r) {
  if (r.id <= 0) throw ValidationError("record id must be positive, got " + std::to_string(r.id));
  if (!(r.lat >= -90.0 && r.lat <= 90.0)) throw ValidationError("latitude out of range: " + format_double(r.lat));
  if (!(r.lon >= -180.0 && r.lon <= 180.0)) throw ValidationError("longitude out of range: " + format_double(r.lon));
  if (!std::isfinite(r.alt)) throw ValidationError("altitude must be finite");
  if (r.evaluation < kMinEvaluation || r.evaluation > kMaxEvaluation) {
    throw ValidationError("evaluation must be in 0..4, got " + std::to_string(r.evaluation));
  }
  if (utf8_length(r.comment) > kMaxCommentChars) {
    throw ValidationError("comment longer than 140 characters");
  }
}

IngestError::IngestError(std::vector<RowDiagnostic> diagnostics)
    : std::runtime_error([&] {
        std::ostringstream os;
        os << diagnostics.size() << " malformed row(s)";
        for (const auto& d : diagnostics) os << "; line " << d.line << ": " << d.message;
        return os.str();
      }()),
      diagnostics_(std::move(diagnostics)) {}

bool IngestError::has(RowDiagnostic::Kind kind) const {
  for (const auto& d : diagnostics_) {
    if (d.kind == kind) return true;
  }
  return false;
}

namespace {

struct CsvRow {
  std::size_t line = 0;
  std::vector<std::string> fields;
};

// Splits RFC-4180 text into rows. Quoted fields may span lines.
std::vector<CsvRow> split_csv(std::string_view text, std::vector<RowDiagnostic>& diags) {
  std::vector<CsvRow> rows;
  std::size_t line = 1;
  std::size_t i = 0;
  while (i < text.size()) {
    CsvRow row;
    row.line = line;
    std::string field;
    bool in_quotes = false;
    bool row_done = false;
    while (i < text.size() && !row_done) {
      const char c = text[i];
      if (in_quotes) {
        if (c == '"') {
          if (i + 1 < text.size() && text[i + 1] == '"') {
            field += '"';
            i += 2;
          } else {
            in_quotes = false;
            ++i;
          }
        } else {
          if (c == '\n') ++line;
          field += c;
          ++i;
        }
        continue;
      }
      switch (c) {
        case '"':
          if (!field.empty()) {
            diags.push_back({row.line, RowDiagnostic::Kind::parse, "stray quote inside unquoted field"});
          }
          in_quotes = true;
          ++i;
          break;
        case ',':
          row.fields.push_back(std::move(field));
          field.clear();
          ++i;
          break;
        case '\r':
          ++i;
          break;
        case '\n':
          ++line;
          ++i;
          row_done = true;
          break;
        default:
          field += c;
          ++i;
      }
    }
    if (in_quotes) diags.push_back({row.line, RowDiagnostic::Kind::parse, "unterminated quoted field"});
    row.fields.push_back(std::move(field));
    const bool blank = row.fields.size() == 1 && row.fields[0].empty();
    if (!blank) rows.push_back(std::move(row));
  }
  return rows;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
  s = trim(s);
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

std::string csv_quote(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::vector<TouristRecord> parse_records(std::string_view csv_text) {
  std::vector<RowDiagnostic> diags;
  auto rows = split_csv(csv_text, diags);
  if (!diags.empty()) throw IngestError(std::move(diags));
  if (rows.empty()) throw IngestError({{1, RowDiagnostic::Kind::parse, "missing header row"}});

  std::string header;
  for (std::size_t k = 0; k < rows[0].fields.size(); ++k) {
    if (k) header += ',';
    header += trim(rows[0].fields[k]);
  }
  if (header != kCsvHeader) {
    throw IngestError({{rows[0].line, RowDiagnostic::Kind::parse,
                        "header must be '" + std::string(kCsvHeader) + "', got '" + header + "'"}});
  }

  std::vector<TouristRecord> out;
  out.reserve(rows.size() - 1);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    auto fail = [&](RowDiagnostic::Kind kind, std::string msg) {
      diags.push_back({row.line, kind, std::move(msg)});
    };
    if (row.fields.size() != 7) {
      fail(RowDiagnostic::Kind::parse, "expected 7 fields, got " + std::to_string(row.fields.size()));
      continue;
    }
    TouristRecord rec;
    const auto& f = row.fields;
    if (!parse_number(f[0], rec.id)) {
      fail(RowDiagnostic::Kind::parse, "non-integer record number '" + f[0] + "'");
      continue;
    }
    if (!parse_number(f[1], rec.lat)) {
      fail(RowDiagnostic::Kind::parse, "non-numeric latitude '" + f[1] + "'");
      continue;
    }
    if (!parse_number(f[2], rec.lon)) {
      fail(RowDiagnostic::Kind::parse, "non-numeric longitude '" + f[2] + "'");
      continue;
    }
    if (!parse_number(f[3], rec.alt)) {
      fail(RowDiagnostic::Kind::parse, "non-numeric altitude '" + f[3] + "'");
      continue;
    }
    rec.name = f[4];
    if (!parse_number(f[5], rec.evaluation)) {
      fail(RowDiagnostic::Kind::parse, "non-integer evaluation '" + f[5] + "'");
      continue;
    }
    rec.comment = f[6];
    try {
      validate(rec);
    } catch (const ValidationError& e) {
      fail(RowDiagnostic::Kind::validation, "record " + std::to_string(rec.id) + ": " + e.what());
      continue;
    }
    out.push_back(std::move(rec));
  }
  if (!diags.empty()) throw IngestError(std::move(diags));
  return out;
}

std::string render_csv(std::span<const TouristRecord> records) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& r : records) {
    out += std::to_string(r.id) + ',' + format_double(r.lat) + ',' + format_double(r.lon) + ',' +
           format_double(r.alt) + ',' + csv_quote(r.name) + ',' + std::to_string(r.evaluation) + ',' +
           csv_quote(r.comment) + '\n';
  }
  return out;
}

std::string export_kml(std::span<const TouristRecord> records) {
  std::string out =
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<kml xmlns=\"http://www.opengis.net/kml/2.2\">\n"
      "  <Document>\n";
  for (const auto& r : records) {
    out += "    <Placemark>\n";
    out += "      <name>" + xml_escape(r.name) + "</name>\n";
    out += "      <description>" + xml_escape(r.comment) + "</description>\n";
    out += "      <Point><coordinates>" + format_double(r.lon) + ',' + format_double(r.lat) + ',' +
           format_double(r.alt) + "</coordinates></Point>\n";
    out += "    </Placemark>\n";
  }
  out += "  </Document>\n</kml>\n";
  return out;
}

// ---------------------------------------------------------------------------

std::string_view attribute_name(Attribute a) {
  switch (a) {
    case Attribute::lat: return "lat";
    case Attribute::lon: return "lon";
    case Attribute::alt: return "alt";
    case Attribute::evaluation: return "evaluation";
    case Attribute::tfidf_max: return "tfidf_max";
    case Attribute::tfidf_sum: return "tfidf_sum";
  }
  return "?";
}

bool FeatureMask::includes(Attribute a) const {
  switch (a) {
    case Attribute::lat: return lat;
    case Attribute::lon: return lon;
    case Attribute::alt: return alt;
    case Attribute::evaluation: return evaluation;
    case Attribute::tfidf_max: return tfidf_max;
    case Attribute::tfidf_sum: return tfidf_sum;
  }
  return false;
}

FeatureVector Dataset::feature(std::size_t i) const {
  auto row = features.row(i);
  return {std::vector<double>(row.begin(), row.end()), schema};
}

std::vector<double> Dataset::denormalize(std::span<const double> z) const {
  if (z.size() != normalization.size()) throw ContractError("denormalize: width mismatch");
  std::vector<double> out(z.size());
  for (std::size_t j = 0; j < z.size(); ++j) {
    out[j] = normalization[j].mean + z[j] * normalization[j].std;
  }
  return out;
}

Dataset normalize(Matrix raw, std::vector<std::string> schema) {
  if (!raw.empty() && raw.cols() != schema.size()) throw ContractError("schema width does not match data width");
  for (double v : raw.data()) {
    if (!std::isfinite(v)) throw ContractError("non-finite attribute value");
  }
  Dataset ds;
  ds.schema = std::move(schema);
  const std::size_t n = raw.rows();
  const std::size_t d = ds.schema.size();
  ds.normalization.resize(d);
  ds.features = Matrix(n, d);
  for (std::size_t j = 0; j < d; ++j) {
    auto& st = ds.normalization[j];
    if (n == 0) {
      st = {0.0, 1.0, true};
      continue;
    }
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += raw(i, j);
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (std::size_t i = 0; i < n; ++i) var += (raw(i, j) - mean) * (raw(i, j) - mean);
    var /= static_cast<double>(n);
    const double sd = std::sqrt(var);
    // Relative guard: a column whose spread is pure rounding noise is constant.
    const bool constant = !(sd > 1e-12 * std::max(1.0, std::abs(mean)));
    st = {mean, constant ? 1.0 : sd, constant};
    for (std::size_t i = 0; i < n; ++i) ds.features(i, j) = constant ? 0.0 : (raw(i, j) - mean) / sd;
  }
  ds.raw = std::move(raw);
  if (ds.raw.empty()) ds.raw = Matrix(0, d);
  return ds;
}

std::vector<double> raw_attributes(const TouristRecord& r, const TfidfAggregate& t) {
  return {r.lat, r.lon, r.alt, static_cast<double>(r.evaluation), t.max, t.sum};
}

Dataset build_features(std::span<const TouristRecord> records, std::span<const TfidfAggregate> tfidf,
                       const FeatureMask& mask) {
  if (records.size() != tfidf.size()) {
    throw ContractError("build_features: " + std::to_string(records.size()) + " records but " +
                        std::to_string(tfidf.size()) + " tf-idf aggregates");
  }
  std::vector<std::string> schema;
  std::vector<std::size_t> columns;
  for (std::size_t a = 0; a < kAttributeCount; ++a) {
    const auto attr = static_cast<Attribute>(a);
    if (mask.includes(attr)) {
      schema.emplace_back(attribute_name(attr));
      columns.push_back(a);
    }
  }
  if (schema.empty()) throw ContractError("feature mask excludes every attribute");

  Matrix raw(records.size(), schema.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto all = raw_attributes(records[i], tfidf[i]);
    for (std::size_t k = 0; k < columns.size(); ++k) raw(i, k) = all[columns[k]];
  }
  Dataset ds = normalize(std::move(raw), std::move(schema));
  ds.records.assign(records.begin(), records.end());
  return ds;
}

}  // namespace ighsom
