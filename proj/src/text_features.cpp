#include "ighsom/text_features.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "ighsom/errors.hpp"
#include "ighsom/kernels.hpp"

namespace ighsom {

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string cur;
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (c < 0x80 && (std::isspace(c) || std::ispunct(c) || std::iscntrl(c))) {
      if (!cur.empty()) tokens.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c < 0x80 ? static_cast<char>(std::tolower(c)) : ch;
    }
  }
  if (!cur.empty()) tokens.push_back(std::move(cur));
  return tokens;
}

std::size_t Corpus::df(const std::string& term) const {
  auto it = doc_frequency_.find(term);
  return it == doc_frequency_.end() ? 0 : it->second;
}

Corpus build_corpus(std::span<const std::pair<std::string, std::string>> documents) {
  if (documents.empty()) throw ContractError("corpus needs at least one document (idf undefined otherwise)");
  Corpus c;
  std::set<std::string> ids;
  for (const auto& [id, text] : documents) {
    if (!ids.insert(id).second) throw ContractError("duplicate corpus document id '" + id + "'");
    CorpusDocument doc;
    doc.id = id;
    for (auto& t : tokenize(text)) {
      ++doc.term_counts[t];
      ++doc.length;
    }
    for (const auto& [term, _] : doc.term_counts) ++c.doc_frequency_[term];
    c.documents_.push_back(std::move(doc));
  }
  return c;
}

Corpus load_corpus_dir(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw NotFoundError("corpus directory not found: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<std::pair<std::string, std::string>> docs;
  for (const auto& f : files) {
    std::ifstream in(f, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    docs.emplace_back(f.stem().string(), ss.str());
  }
  return build_corpus(docs);
}

TermScore tfidf_score(const std::string& term, std::span<const std::string> comment_tokens, const Corpus& corpus,
                      TfSource source) {
  if (comment_tokens.empty()) throw ContractError("tfidf_score: empty comment token list");
  TermScore s;
  s.term = term;
  if (source == TfSource::comment) {
    const auto n = std::count(comment_tokens.begin(), comment_tokens.end(), term);
    s.tf = static_cast<double>(n) / static_cast<double>(comment_tokens.size());
  } else {
    for (const auto& doc : corpus.documents()) {
      auto it = doc.term_counts.find(term);
      if (it == doc.term_counts.end() || doc.length == 0) continue;
      s.tf = std::max(s.tf, static_cast<double>(it->second) / static_cast<double>(doc.length));
    }
  }
  const std::size_t df = std::max<std::size_t>(corpus.df(term), 1);
  s.idf = std::log(static_cast<double>(corpus.document_count()) / static_cast<double>(df));
  s.tfidf = s.tf * s.idf;
  return s;
}

CommentFeatures comment_features(std::string_view comment, const Corpus& corpus, const TopLConfig& cfg) {
  if (cfg.l == 0) throw ContractError("top-l selection needs l >= 1");
  const auto tokens = tokenize(comment);
  CommentFeatures out;
  if (tokens.empty()) return out;

  const std::set<std::string> distinct(tokens.begin(), tokens.end());
  std::vector<TermScore> scores;
  scores.reserve(distinct.size());
  for (const auto& t : distinct) scores.push_back(tfidf_score(t, tokens, corpus, cfg.tf_source));
  std::stable_sort(scores.begin(), scores.end(), [](const TermScore& a, const TermScore& b) {
    if (a.tfidf != b.tfidf) return a.tfidf > b.tfidf;
    return a.term < b.term;
  });
  if (scores.size() > cfg.l) scores.resize(cfg.l);
  out.max = scores.front().tfidf;
  for (const auto& s : scores) out.sum += s.tfidf;
  out.top_terms = std::move(scores);
  return out;
}

std::vector<TfidfAggregate> score_records(std::span<const TouristRecord> records, const Corpus& corpus,
                                          const TopLConfig& cfg) {
  return kernels::parallel::map_records(records.size(), [&](std::size_t i) {
    const auto f = comment_features(records[i].comment, corpus, cfg);
    return TfidfAggregate{f.max, f.sum};
  });
}

}  // namespace ighsom
