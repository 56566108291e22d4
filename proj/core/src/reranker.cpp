#include "rjcd/reranker.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "rjcd/error.hpp"

namespace rjcd {

namespace {

constexpr std::array<std::string_view, kTopicCount> kTopicNames{
    "Arts",     "Business", "Computers", "Games",    "Health",
    "Home",     "News",     "Recreation", "Reference", "Regional",
    "Science",  "Shopping", "Society",   "Sports",   "Kids & Teens"};

constexpr std::array<OdpTopic, kTopicCount> kTopics{
    OdpTopic::kArts,     OdpTopic::kBusiness, OdpTopic::kComputers, OdpTopic::kGames,
    OdpTopic::kHealth,   OdpTopic::kHome,     OdpTopic::kNews,      OdpTopic::kRecreation,
    OdpTopic::kReference, OdpTopic::kRegional, OdpTopic::kScience,  OdpTopic::kShopping,
    OdpTopic::kSociety,  OdpTopic::kSports,   OdpTopic::kKidsAndTeens};

std::size_t index_of(OdpTopic topic) { return static_cast<std::size_t>(topic); }

}  // namespace

std::string_view topic_name(OdpTopic topic) noexcept { return kTopicNames[index_of(topic)]; }

std::optional<OdpTopic> parse_topic(std::string_view name) noexcept {
  for (std::size_t i = 0; i < kTopicCount; ++i) {
    if (kTopicNames[i] == name) return kTopics[i];
  }
  return std::nullopt;
}

const std::array<OdpTopic, kTopicCount>& all_topics() noexcept { return kTopics; }

NbModel train_nb(std::span<const LabeledDoc> corpus, const Tokenizer& tokenizer) {
  if (corpus.empty()) throw InvalidInput("cannot train naive Bayes on an empty corpus");

  std::array<std::size_t, kTopicCount> doc_count{};
  std::array<std::map<std::string, double>, kTopicCount> term_count;
  std::array<double, kTopicCount> token_total{};
  std::set<std::string> vocabulary;

  for (const auto& doc : corpus) {
    const std::size_t t = index_of(doc.topic);
    ++doc_count[t];
    for (auto& token : tokenizer.tokenize(doc.text)) {
      term_count[t][token] += 1.0;
      token_total[t] += 1.0;
      vocabulary.insert(std::move(token));
    }
  }

  NbModel model;
  model.tokenizer_ = tokenizer;
  model.vocabulary_.assign(vocabulary.begin(), vocabulary.end());
  const double vocab_size = static_cast<double>(vocabulary.size());
  const double docs = static_cast<double>(corpus.size());

  for (std::size_t t = 0; t < kTopicCount; ++t) {
    if (doc_count[t] == 0) continue;
    NbModel::TopicParams params{kTopics[t], std::log(static_cast<double>(doc_count[t]) / docs), {}};
    const double denom = token_total[t] + vocab_size;
    params.log_likelihood.reserve(vocabulary.size());
    for (const auto& term : model.vocabulary_) {
      double count = 0.0;
      if (auto it = term_count[t].find(term); it != term_count[t].end()) count = it->second;
      params.log_likelihood.emplace(term, std::log((count + 1.0) / denom));
    }
    model.topics_.push_back(std::move(params));
  }
  return model;
}

std::vector<double> NbModel::log_joint(const TermVector& counts) const {
  std::vector<double> scores;
  scores.reserve(topics_.size());
  for (const auto& params : topics_) {
    double score = params.log_prior;
    for (const auto& [term, count] : counts) {
      if (auto it = params.log_likelihood.find(term); it != params.log_likelihood.end()) {
        score += count * it->second;
      }
    }
    scores.push_back(score);
  }
  return scores;
}

Classification classify(const NbModel& model, std::string_view text) {
  const auto scores =
      model.log_joint(featurize(text, FeatureMode::kCounts, nullptr, model.tokenizer()));
  // topics() is in topic order, so strict > keeps the earliest topic on ties.
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best]) best = i;
  }
  double runner_up = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (i != best) runner_up = std::max(runner_up, scores[i]);
  }
  return {model.topics()[best].topic, scores[best] - runner_up};
}

Classification classify(const NbModel& model, const Snippet& snippet) {
  return classify(model, snippet.text());
}

std::vector<double> posteriors(const NbModel& model, std::string_view text) {
  auto scores = model.log_joint(featurize(text, FeatureMode::kCounts, nullptr, model.tokenizer()));
  const double top = *std::max_element(scores.begin(), scores.end());
  double total = 0.0;
  for (double& s : scores) {
    s = std::exp(s - top);
    total += s;
  }
  for (double& s : scores) s /= total;
  return scores;
}

std::vector<OdpTopic> knn_smooth(std::span<const Snippet> snippets,
                                 std::span<const OdpTopic> nb_labels, std::size_t k) {
  if (snippets.size() != nb_labels.size()) {
    throw InvalidInput("knn_smooth: snippet and label counts differ");
  }
  std::vector<OdpTopic> out(nb_labels.begin(), nb_labels.end());
  const std::size_t n = snippets.size();
  if (n < 2) return out;
  if (k < 1 || k >= n) {
    throw InvalidInput("knn_smooth needs 1 <= k < " + std::to_string(n));
  }

  std::vector<std::string> texts;
  texts.reserve(n);
  for (const auto& s : snippets) texts.push_back(s.text());
  const IdfTable idf = IdfTable::fit(texts);
  std::vector<TermVector> vectors;
  vectors.reserve(n);
  for (const auto& text : texts) vectors.push_back(featurize(text, FeatureMode::kTfIdf, &idf));

  std::vector<std::pair<double, std::size_t>> neighbours;
  for (std::size_t i = 0; i < n; ++i) {
    neighbours.clear();
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double sim = cosine_similarity(vectors[i], vectors[j]);
      if (sim > 0.0) neighbours.emplace_back(sim, j);
    }
    const std::size_t take = std::min(k, neighbours.size());
    std::partial_sort(neighbours.begin(), neighbours.begin() + static_cast<std::ptrdiff_t>(take),
                      neighbours.end(), [](const auto& a, const auto& b) {
                        return a.first != b.first ? a.first > b.first : a.second < b.second;
                      });

    std::array<std::size_t, kTopicCount> votes{};
    for (std::size_t m = 0; m < take; ++m) ++votes[index_of(nb_labels[neighbours[m].second])];
    const std::size_t most = *std::max_element(votes.begin(), votes.end());
    if (most == 0 || votes[index_of(nb_labels[i])] == most) continue;
    for (std::size_t t = 0; t < kTopicCount; ++t) {
      if (votes[t] == most) {
        out[i] = kTopics[t];
        break;
      }
    }
  }
  return out;
}

std::vector<OdpTopic> merge(std::span<const Classification> nb, std::span<const OdpTopic> smoothed,
                            double tau) {
  if (nb.size() != smoothed.size()) throw InvalidInput("merge: label lists differ in length");
  std::vector<OdpTopic> out;
  out.reserve(nb.size());
  for (std::size_t i = 0; i < nb.size(); ++i) {
    if (nb[i].topic == smoothed[i] || nb[i].margin >= tau) {
      out.push_back(nb[i].topic);
    } else {
      out.push_back(smoothed[i]);
    }
  }
  return out;
}

PreferenceProfile::PreferenceProfile(OdpTopic first, OdpTopic second)
    : first_(first), second_(second) {
  if (first == second) throw InvalidInput("a preference profile needs two different topics");
}

std::vector<Snippet> rerank(std::span<const Snippet> snippets, std::span<const OdpTopic> topics,
                            const PreferenceProfile& profile) {
  if (snippets.size() != topics.size()) throw InvalidInput("rerank: topic count differs");
  std::vector<Snippet> out;
  out.reserve(snippets.size());
  for (std::size_t i = 0; i < snippets.size(); ++i) {
    if (profile.contains(topics[i])) out.push_back(snippets[i]);
  }
  for (std::size_t i = 0; i < snippets.size(); ++i) {
    if (!profile.contains(topics[i])) out.push_back(snippets[i]);
  }
  return out;
}

std::vector<RerankedItem> rerank_query(std::span<const Snippet> snippets, const NbModel& model,
                                       const PreferenceProfile& profile,
                                       const RerankOptions& options) {
  const std::size_t n = snippets.size();
  std::vector<Classification> nb;
  std::vector<OdpTopic> nb_labels;
  nb.reserve(n);
  for (const auto& s : snippets) {
    nb.push_back(classify(model, s));
    nb_labels.push_back(nb.back().topic);
  }
  std::vector<OdpTopic> smoothed = nb_labels;
  if (n >= 2) smoothed = knn_smooth(snippets, nb_labels, std::clamp<std::size_t>(options.k, 1, n - 1));
  const auto topics = merge(nb, smoothed, options.tau);

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::stable_partition(order.begin(), order.end(),
                        [&](std::size_t i) { return profile.contains(topics[i]); });

  std::vector<RerankedItem> out;
  out.reserve(n);
  for (std::size_t i : order) out.push_back({out.size() + 1, snippets[i].rank, topics[i]});
  return out;
}

}  // namespace rjcd
