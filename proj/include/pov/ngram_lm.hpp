#pragma once

#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "pov/metrics.hpp"

namespace pov {

// Interpolated Kneser-Ney n-gram model. Sentences are padded with order-1
// <s> tokens and one </s>; training types seen once collapse into <unk>.
// The lowest order interpolates with the uniform distribution over the
// predictable vocabulary (everything except <s>), so every word, <unk>
// included, has non-zero probability.
class NgramLM : public LanguageModelScorer {
 public:
  static constexpr std::string_view kUnk = "<unk>";
  static constexpr std::string_view kBos = "<s>";
  static constexpr std::string_view kEos = "</s>";

  static NgramLM train(const std::vector<std::string>& corpus, int order = 3, double discount = 0.75);

  // P(word | context); only the last order-1 context words are used. Unknown
  // words map to <unk>.
  double prob(std::span<const std::string> context, std::string_view word) const;

  std::vector<double> token_nll(std::string_view text) const override;

  // Every word the model can predict (</s> and <unk> included, <s> excluded).
  std::vector<std::string> predictable_vocabulary() const;

  int order() const { return order_; }
  double discount() const { return discount_; }

  bool operator==(const NgramLM& o) const {
    return order_ == o.order_ && discount_ == o.discount_ && words_ == o.words_ && counts_ == o.counts_ &&
           contexts_ == o.contexts_ && unigram_total_ == o.unigram_total_ && unigram_distinct_ == o.unigram_distinct_;
  }

 private:
  struct ContextStats {
    double total = 0.0;
    double distinct = 0.0;
    bool operator==(const ContextStats&) const = default;
  };
  using Key = std::vector<int>;
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept;
  };

  int id_of(std::string_view word) const;
  double prob_ids(const int* context, std::size_t context_len, int word) const;

  int order_ = 3;
  double discount_ = 0.75;
  std::unordered_map<std::string, int> ids_;
  std::vector<std::string> words_;
  // level n-1 holds n-grams; the top level has raw counts, lower levels
  // continuation counts
  std::vector<std::unordered_map<Key, double, KeyHash>> counts_;
  std::vector<std::unordered_map<Key, ContextStats, KeyHash>> contexts_;
  double unigram_total_ = 0.0;
  double unigram_distinct_ = 0.0;
};

}  // namespace pov
