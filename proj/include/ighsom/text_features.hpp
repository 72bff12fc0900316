#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ighsom/records.hpp"

namespace ighsom {

/// Lowercased tokens split on ASCII whitespace and punctuation. Bytes >= 0x80 are
/// word characters, so UTF-8 text passes through unsplit.
std::vector<std::string> tokenize(std::string_view text);

struct CorpusDocument {
  std::string id;
  std::map<std::string, std::size_t> term_counts;
  std::size_t length = 0;  // total tokens
};

/// Reference collection of tourism web documents with per-term document frequency.
class Corpus {
 public:
  std::size_t document_count() const noexcept { return documents_.size(); }
  const std::vector<CorpusDocument>& documents() const noexcept { return documents_; }
  const std::map<std::string, std::size_t>& doc_frequency() const noexcept { return doc_frequency_; }

  /// Number of documents containing `term`; 0 when unseen.
  std::size_t df(const std::string& term) const;

 private:
  friend Corpus build_corpus(std::span<const std::pair<std::string, std::string>> documents);
  std::vector<CorpusDocument> documents_;
  std::map<std::string, std::size_t> doc_frequency_;
};

/// Throws ContractError on an empty document list or duplicate ids.
Corpus build_corpus(std::span<const std::pair<std::string, std::string>> documents);

/// One document per `*.txt` file (doc id = file stem), in sorted filename order.
Corpus load_corpus_dir(const std::filesystem::path& dir);

/// Where the term frequency of a comment term is measured.
enum class TfSource {
  comment,     // count in the comment / comment length (default)
  corpus_max,  // highest n(t,d)/|d| over corpus documents; alternative reading, not default
};

struct TermScore {
  std::string term;
  double tf = 0.0;
  double idf = 0.0;
  double tfidf = 0.0;
};

/// tf-idf of `term` for a comment: natural-log idf, unseen corpus terms smoothed to df = 1.
TermScore tfidf_score(const std::string& term, std::span<const std::string> comment_tokens, const Corpus& corpus,
                      TfSource source = TfSource::comment);

struct TopLConfig {
  std::size_t l = 3;
  TfSource tf_source = TfSource::comment;
};

struct CommentFeatures {
  double max = 0.0;
  double sum = 0.0;                 // over the selected top-l terms only
  std::vector<TermScore> top_terms;  // descending tfidf, ties by term
};

CommentFeatures comment_features(std::string_view comment, const Corpus& corpus, const TopLConfig& cfg = {});

/// comment_features for every record; index-aligned with the input.
std::vector<TfidfAggregate> score_records(std::span<const TouristRecord> records, const Corpus& corpus,
                                          const TopLConfig& cfg = {});

}  // namespace ighsom
