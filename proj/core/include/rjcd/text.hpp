#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rjcd {

// Built-in stopword list; identical to data/stopwords.txt.
const std::set<std::string, std::less<>>& default_stopwords();

// Reads one word per line; blank lines and lines starting with '#' are skipped.
std::set<std::string, std::less<>> load_stopwords(const std::string& path);

// Lowercases ASCII, splits on ASCII non-alphanumerics (bytes >= 0x80 are kept
// inside tokens so UTF-8 words survive), drops one-byte tokens and stopwords.
class Tokenizer {
 public:
  Tokenizer() : Tokenizer(default_stopwords()) {}
  explicit Tokenizer(std::set<std::string, std::less<>> stopwords)
      : stopwords_(std::move(stopwords)) {}

  std::vector<std::string> tokenize(std::string_view text) const;

 private:
  std::set<std::string, std::less<>> stopwords_;
};

// Sparse term weights. featurize never stores a zero weight.
using TermVector = std::map<std::string, double, std::less<>>;

enum class FeatureMode { kCounts, kTfIdf };

// Document frequencies over a fixed collection.
class IdfTable {
 public:
  IdfTable() = default;
  static IdfTable fit(std::span<const std::string> documents, const Tokenizer& tokenizer = {});

  // ln((1 + D) / (1 + df)) + 1, always > 0; unseen terms get df = 0.
  double idf(std::string_view term) const;
  std::size_t documents() const noexcept { return documents_; }

 private:
  std::size_t documents_ = 0;
  std::map<std::string, std::size_t, std::less<>> document_frequency_;
};

// Raw term counts, or tf * idf when mode is kTfIdf (idf is then required and
// InvalidInput is thrown without it).
TermVector featurize(std::string_view text, FeatureMode mode = FeatureMode::kCounts,
                     const IdfTable* idf = nullptr, const Tokenizer& tokenizer = {});

// 0 when either vector is empty.
double cosine_similarity(const TermVector& a, const TermVector& b);

}  // namespace rjcd
