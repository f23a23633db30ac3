#include "pov/ngram_lm.hpp"

#include <cmath>

#include "pov/error.hpp"
#include "pov/log.hpp"
#include "pov/text.hpp"

namespace pov {

namespace {
constexpr int kUnkId = 0;
constexpr int kBosId = 1;
constexpr int kEosId = 2;
}  // namespace

std::size_t NgramLM::KeyHash::operator()(const Key& k) const noexcept {
  std::size_t h = 1469598103934665603ULL;
  for (int x : k) {
    h ^= static_cast<std::size_t>(x) + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

NgramLM NgramLM::train(const std::vector<std::string>& corpus, int order, double discount) {
  if (corpus.empty()) throw Error("train_ngram_lm: empty corpus");
  if (order < 2) throw Error("train_ngram_lm: order must be >= 2");
  if (!(discount > 0.0 && discount <= 1.0)) throw Error("train_ngram_lm: discount must be in (0, 1]");
  if (corpus.size() < 100)
    warn("train_ngram_lm: only " + std::to_string(corpus.size()) + " training sentences");

  NgramLM lm;
  lm.order_ = order;
  lm.discount_ = discount;
  lm.words_ = {std::string(kUnk), std::string(kBos), std::string(kEos)};
  for (int i = 0; i < 3; ++i) lm.ids_[lm.words_[i]] = i;

  std::vector<std::vector<std::string>> sentences;
  std::unordered_map<std::string, int> freq;
  for (const auto& line : corpus) {
    sentences.push_back(split_whitespace(line));
    for (const auto& w : sentences.back()) ++freq[w];
  }
  // ids in first-occurrence order keep training deterministic
  for (const auto& s : sentences)
    for (const auto& w : s)
      if (freq[w] > 1 && !lm.ids_.contains(w)) {
        lm.ids_[w] = static_cast<int>(lm.words_.size());
        lm.words_.push_back(w);
      }

  lm.counts_.resize(static_cast<std::size_t>(order));
  lm.contexts_.resize(static_cast<std::size_t>(order));

  auto& top = lm.counts_.back();
  for (const auto& s : sentences) {
    std::vector<int> padded(static_cast<std::size_t>(order - 1), kBosId);
    for (const auto& w : s) padded.push_back(lm.id_of(w));
    padded.push_back(kEosId);
    for (std::size_t end = static_cast<std::size_t>(order); end <= padded.size(); ++end)
      top[Key(padded.begin() + static_cast<std::ptrdiff_t>(end - order), padded.begin() + static_cast<std::ptrdiff_t>(end))] += 1.0;
  }

  // continuation counts: number of distinct left extensions
  for (int level = order - 1; level >= 1; --level) {
    auto& lower = lm.counts_[static_cast<std::size_t>(level - 1)];
    for (const auto& [gram, c] : lm.counts_[static_cast<std::size_t>(level)])
      lower[Key(gram.begin() + 1, gram.end())] += 1.0;
  }

  for (int level = 2; level <= order; ++level) {
    auto& ctx = lm.contexts_[static_cast<std::size_t>(level - 1)];
    for (const auto& [gram, c] : lm.counts_[static_cast<std::size_t>(level - 1)]) {
      auto& st = ctx[Key(gram.begin(), gram.end() - 1)];
      st.total += c;
      st.distinct += 1.0;
    }
  }
  for (const auto& [gram, c] : lm.counts_[0]) {
    lm.unigram_total_ += c;
    lm.unigram_distinct_ += 1.0;
  }
  return lm;
}

int NgramLM::id_of(std::string_view word) const {
  auto it = ids_.find(std::string(word));
  return it == ids_.end() ? kUnkId : it->second;
}

double NgramLM::prob_ids(const int* context, std::size_t context_len, int word) const {
  // lowest order: continuation unigram mixed with uniform
  const double vocab = static_cast<double>(words_.size() - 1);
  double p = 1.0 / vocab;
  if (unigram_total_ > 0.0) {
    double c = 0.0;
    if (auto it = counts_[0].find(Key{word}); it != counts_[0].end()) c = it->second;
    p = std::max(c - discount_, 0.0) / unigram_total_ + discount_ * unigram_distinct_ / unigram_total_ / vocab;
  }
  for (std::size_t n = 2; n <= static_cast<std::size_t>(order_) && n - 1 <= context_len; ++n) {
    Key h(context + (context_len - (n - 1)), context + context_len);
    auto cit = contexts_[n - 1].find(h);
    if (cit == contexts_[n - 1].end()) continue;
    h.push_back(word);
    double c = 0.0;
    if (auto it = counts_[n - 1].find(h); it != counts_[n - 1].end()) c = it->second;
    const auto& st = cit->second;
    p = (std::max(c - discount_, 0.0) + discount_ * st.distinct * p) / st.total;
  }
  return p;
}

double NgramLM::prob(std::span<const std::string> context, std::string_view word) const {
  std::vector<int> ids;
  const std::size_t keep = std::min(context.size(), static_cast<std::size_t>(order_ - 1));
  for (std::size_t i = context.size() - keep; i < context.size(); ++i) ids.push_back(id_of(context[i]));
  return prob_ids(ids.data(), ids.size(), id_of(word));
}

std::vector<double> NgramLM::token_nll(std::string_view text) const {
  std::vector<int> history(static_cast<std::size_t>(order_ - 1), kBosId);
  std::vector<double> out;
  auto tokens = split_whitespace(text);
  for (std::size_t i = 0; i <= tokens.size(); ++i) {
    const int w = i < tokens.size() ? id_of(tokens[i]) : kEosId;
    const std::size_t len = std::min(history.size(), static_cast<std::size_t>(order_ - 1));
    out.push_back(-std::log(prob_ids(history.data() + (history.size() - len), len, w)));
    history.push_back(w);
  }
  return out;
}

std::vector<std::string> NgramLM::predictable_vocabulary() const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < words_.size(); ++i)
    if (static_cast<int>(i) != kBosId) out.push_back(words_[i]);
  return out;
}

}  // namespace pov
