#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "rjcd/text.hpp"

namespace rjcd {

// The 15 top-level Open Directory categories, in the fixed order used for
// every tie-break.
enum class OdpTopic : std::uint8_t {
  kArts,
  kBusiness,
  kComputers,
  kGames,
  kHealth,
  kHome,
  kNews,
  kRecreation,
  kReference,
  kRegional,
  kScience,
  kShopping,
  kSociety,
  kSports,
  kKidsAndTeens,
};

inline constexpr std::size_t kTopicCount = 15;

std::string_view topic_name(OdpTopic topic) noexcept;
// Exact, case-sensitive match on the display name ("Kids & Teens" included).
std::optional<OdpTopic> parse_topic(std::string_view name) noexcept;
const std::array<OdpTopic, kTopicCount>& all_topics() noexcept;

struct Snippet {
  std::string query_id;
  std::size_t rank = 0;  // position in the original result list, 1-based
  std::string title;
  std::string summary;
  std::string url;

  std::string text() const { return title + " " + summary; }
  friend bool operator==(const Snippet&, const Snippet&) = default;
};

struct LabeledDoc {
  OdpTopic topic;
  std::string text;
};

// Multinomial naive Bayes with add-one smoothing, over the topics that occur
// in the training corpus.
class NbModel {
 public:
  struct TopicParams {
    OdpTopic topic;
    double log_prior = 0.0;
    std::unordered_map<std::string, double> log_likelihood;  // one entry per vocabulary term
  };

  const std::vector<std::string>& vocabulary() const noexcept { return vocabulary_; }
  // Sorted by topic order.
  const std::vector<TopicParams>& topics() const noexcept { return topics_; }
  const Tokenizer& tokenizer() const noexcept { return tokenizer_; }

  // Unnormalised log posterior per topic; out-of-vocabulary terms are ignored.
  std::vector<double> log_joint(const TermVector& counts) const;

 private:
  friend NbModel train_nb(std::span<const LabeledDoc>, const Tokenizer&);
  std::vector<std::string> vocabulary_;
  std::vector<TopicParams> topics_;
  Tokenizer tokenizer_;
};

// Throws InvalidInput on an empty corpus.
NbModel train_nb(std::span<const LabeledDoc> corpus, const Tokenizer& tokenizer = {});

struct Classification {
  OdpTopic topic;
  // Best minus runner-up log posterior; +inf if the model knows one topic.
  double margin = 0.0;
};

// Ties go to the topic that comes first in topic order.
Classification classify(const NbModel& model, std::string_view text);
Classification classify(const NbModel& model, const Snippet& snippet);

// Normalised posterior per model topic, aligned with model.topics().
std::vector<double> posteriors(const NbModel& model, std::string_view text);

inline constexpr std::size_t kDefaultKnnK = 5;
inline constexpr double kDefaultMergeTau = 2.0;

// Replaces each label by the majority NB label among the snippet's k most
// similar other snippets (TF-IDF cosine, only similarity > 0 counts).
// Vote ties prefer the snippet's own label, then topic order. Lists shorter
// than 2 come back unchanged; otherwise 1 <= k < size is required.
std::vector<OdpTopic> knn_smooth(std::span<const Snippet> snippets,
                                 std::span<const OdpTopic> nb_labels,
                                 std::size_t k = kDefaultKnnK);

// Agreement keeps the topic; on conflict the NB topic wins only when its
// margin is at least tau.
std::vector<OdpTopic> merge(std::span<const Classification> nb,
                            std::span<const OdpTopic> smoothed,
                            double tau = kDefaultMergeTau);

// Two distinct topics a user is assumed to prefer.
class PreferenceProfile {
 public:
  // Throws InvalidInput if first == second.
  PreferenceProfile(OdpTopic first, OdpTopic second);

  bool contains(OdpTopic topic) const noexcept { return topic == first_ || topic == second_; }
  OdpTopic first() const noexcept { return first_; }
  OdpTopic second() const noexcept { return second_; }

 private:
  OdpTopic first_;
  OdpTopic second_;
};

// Stable partition: snippets whose topic is in the profile first.
std::vector<Snippet> rerank(std::span<const Snippet> snippets, std::span<const OdpTopic> topics,
                            const PreferenceProfile& profile);

struct RerankOptions {
  std::size_t k = kDefaultKnnK;
  double tau = kDefaultMergeTau;
};

struct RerankedItem {
  std::size_t new_rank = 0;
  std::size_t original_rank = 0;
  OdpTopic topic = OdpTopic::kArts;
};

// classify -> knn_smooth -> merge -> rerank for one query's snippets. k is
// clamped to size - 1 for short lists.
std::vector<RerankedItem> rerank_query(std::span<const Snippet> snippets, const NbModel& model,
                                       const PreferenceProfile& profile,
                                       const RerankOptions& options = {});

}  // namespace rjcd
