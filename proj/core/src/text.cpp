#include "rjcd/text.hpp"

#include <cmath>
#include <fstream>

#include "rjcd/error.hpp"

namespace rjcd {

const std::set<std::string, std::less<>>& default_stopwords() {
  static const std::set<std::string, std::less<>> words{
      "an",   "and", "are", "as",  "at",   "be",   "but",  "by",   "for", "from",
      "has",  "he",  "in",  "is",  "it",   "its",  "not",  "of",   "on",  "or",
      "that", "the", "this", "to", "was",  "were", "will", "with", "you", "your"};
  return words;
}

std::set<std::string, std::less<>> load_stopwords(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(ParseErrorKind::kIo, path, 0, "cannot open stopword file");
  std::set<std::string, std::less<>> words;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    words.insert(line);
  }
  return words;
}

namespace {

bool is_token_byte(unsigned char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c >= 0x80;
}

char ascii_lower(unsigned char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : static_cast<char>(c);
}

}  // namespace

std::vector<std::string> Tokenizer::tokenize(std::string_view text) const {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (current.size() > 1 && !stopwords_.contains(current)) tokens.push_back(current);
    current.clear();
  };
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (is_token_byte(c)) {
      current.push_back(ascii_lower(c));
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

IdfTable IdfTable::fit(std::span<const std::string> documents, const Tokenizer& tokenizer) {
  IdfTable table;
  table.documents_ = documents.size();
  for (const auto& doc : documents) {
    std::set<std::string, std::less<>> seen;
    for (auto& token : tokenizer.tokenize(doc)) seen.insert(std::move(token));
    for (const auto& term : seen) ++table.document_frequency_[term];
  }
  return table;
}

double IdfTable::idf(std::string_view term) const {
  std::size_t df = 0;
  if (auto it = document_frequency_.find(term); it != document_frequency_.end()) df = it->second;
  return std::log((1.0 + static_cast<double>(documents_)) / (1.0 + static_cast<double>(df))) + 1.0;
}

TermVector featurize(std::string_view text, FeatureMode mode, const IdfTable* idf,
                     const Tokenizer& tokenizer) {
  if (mode == FeatureMode::kTfIdf && idf == nullptr) {
    throw InvalidInput("TF-IDF featurization needs document frequencies");
  }
  TermVector vec;
  for (auto& token : tokenizer.tokenize(text)) vec[std::move(token)] += 1.0;
  if (mode == FeatureMode::kTfIdf) {
    for (auto& [term, weight] : vec) weight *= idf->idf(term);
  }
  return vec;
}

double cosine_similarity(const TermVector& a, const TermVector& b) {
  double dot = 0.0;
  double norm_a = 0.0;
  double norm_b = 0.0;
  for (const auto& [term, w] : a) {
    norm_a += w * w;
    if (auto it = b.find(term); it != b.end()) dot += w * it->second;
  }
  for (const auto& [term, w] : b) norm_b += w * w;
  if (norm_a == 0.0 || norm_b == 0.0) return 0.0;
  return dot / (std::sqrt(norm_a) * std::sqrt(norm_b));
}

}  // namespace rjcd
