#include <gtest/gtest.h>

#include <cmath>

#include "pov/error.hpp"
#include "pov/log.hpp"
#include "pov/ngram_lm.hpp"
#include "pov/text.hpp"
#include "test_util.hpp"

using namespace pov;

namespace {

std::vector<std::string> random_corpus(std::uint64_t seed, std::size_t n) {
  const std::vector<std::string> pool = {"joe", "says", "asks", "if", "you", "are", "coming", "late", "dinner",
                                         "is", "ready", "he", "running", "the", "party", "rare", "bob", "hi,"};
  Rng rng(seed);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(testkit::random_sentence(rng, pool, 1, 10));
  out.push_back("singleton words appear once");
  return out;
}

}  // namespace

TEST(NgramLM, NormalizedOverSampledContexts) {
  const auto corpus = random_corpus(3, 300);
  for (int order : {2, 3, 4}) {
    auto lm = NgramLM::train(corpus, order, 0.75);
    auto vocab = lm.predictable_vocabulary();
    std::vector<std::string> ctx_pool = vocab;
    ctx_pool.emplace_back("<s>");
    ctx_pool.emplace_back("neverseen");
    Rng rng(static_cast<std::uint64_t>(order));
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<std::string> ctx;
      const auto len = rng.below(static_cast<std::uint64_t>(order));
      for (std::uint64_t k = 0; k < len; ++k) ctx.push_back(ctx_pool[static_cast<std::size_t>(rng.below(ctx_pool.size()))]);
      double sum = 0.0;
      for (const auto& w : vocab) {
        const double p = lm.prob(ctx, w);
        EXPECT_GT(p, 0.0);
        sum += p;
      }
      EXPECT_NEAR(sum, 1.0, 1e-6) << "order " << order << " context " << join(ctx);
    }
  }
}

TEST(NgramLM, SingletonsBecomeUnknown) {
  auto lm = NgramLM::train(random_corpus(3, 300));
  auto vocab = lm.predictable_vocabulary();
  EXPECT_NE(std::find(vocab.begin(), vocab.end(), "<unk>"), vocab.end());
  EXPECT_EQ(std::find(vocab.begin(), vocab.end(), "singleton"), vocab.end());
  EXPECT_EQ(std::find(vocab.begin(), vocab.end(), "<s>"), vocab.end());
  const std::vector<std::string> ctx = {"joe"};
  EXPECT_EQ(lm.prob(ctx, "singleton"), lm.prob(ctx, "<unk>"));
  EXPECT_EQ(lm.prob(ctx, "zzz"), lm.prob(ctx, "<unk>"));
}

// One sentence "a b c" repeated N times, order 3, discount D. Every
// trigram context is seen with a single continuation (total N), every
// bigram context with a single continuation type (total 1), and the four
// predicted words a, b, c, </s> each have continuation count 1 at the
// unigram level (T = U = 4). The predictable vocabulary is
// {a, b, c, </s>, <unk>}, V = 5. So for each of the four predictions
//   P1 = (1 - D) / 4 + D / V
//   P2 = (1 - D) + D * P1
//   P3 = (N - D + D * P2) / N
// and perplexity = 1 / P3.
TEST(NgramLM, DegenerateCorpusOracle) {
  set_warnings_enabled(false);
  for (int n : {100, 250}) {
    for (double d : {0.5, 0.75, 0.9}) {
      std::vector<std::string> corpus(static_cast<std::size_t>(n), "a b c");
      auto lm = NgramLM::train(corpus, 3, d);
      const double p1 = (1.0 - d) / 4.0 + d / 5.0;
      const double p2 = (1.0 - d) + d * p1;
      const double p3 = (n - d + d * p2) / n;
      const double ppl = perplexity(lm, "a b c");
      EXPECT_NEAR(ppl, 1.0 / p3, 1e-9);
      EXPECT_GE(ppl, 1.0);
      EXPECT_LE(ppl, n / (n - d));
    }
  }
  set_warnings_enabled(true);
}

TEST(NgramLM, DeterministicTables) {
  const auto corpus = random_corpus(8, 200);
  auto a = NgramLM::train(corpus);
  auto b = NgramLM::train(corpus);
  EXPECT_TRUE(a == b);
  for (const auto& s : corpus) EXPECT_EQ(perplexity(a, s), perplexity(b, s));
}

TEST(NgramLM, TokenNllCountsSentenceEnd) {
  auto lm = NgramLM::train(random_corpus(8, 200));
  EXPECT_EQ(lm.token_nll("joe says hi,").size(), 4u);
}

TEST(NgramLM, SelfRatioIsOne) {
  auto lm = NgramLM::train(random_corpus(9, 200));
  std::vector<EvalPair> pairs;
  for (const auto& s : random_corpus(10, 50)) pairs.push_back({s, s});
  EXPECT_EQ(relative_perplexity(pairs, lm), 1.0);
}

TEST(NgramLM, Errors) {
  EXPECT_THROW(NgramLM::train({}), Error);
  set_warnings_enabled(false);
  EXPECT_THROW(NgramLM::train({"a b"}, 1), Error);
  EXPECT_THROW(NgramLM::train({"a b"}, 3, 0.0), Error);
  EXPECT_THROW(NgramLM::train({"a b"}, 3, 1.5), Error);
  set_warnings_enabled(true);
}
