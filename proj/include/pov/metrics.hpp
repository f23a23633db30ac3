#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace pov {

struct EvalPair {
  std::string hypothesis;
  std::string reference;
};

// normalize + @CN@ -> bob, @SCN@ -> john, lowercased.
std::string prepare_for_scoring(std::string_view text);

// Whitespace tokens of already-prepared text.
std::vector<std::string> scoring_tokens(std::string_view text);

// Corpus BLEU, uniform weights over 1..max_n, brevity penalty, no smoothing.
// Inputs are scored as given (call prepare_for_scoring first if needed).
double corpus_bleu(const std::vector<EvalPair>& pairs, int max_n = 4);

// Porter (1980) suffix-stripping stemmer, lowercase ASCII input.
std::string porter_stem(std::string_view word);

// A match stage maps a token to the key it is matched on; stages run in
// order over the tokens left unmatched by earlier stages.
using MatchStage = std::function<std::string(const std::string&)>;

std::vector<MatchStage> default_meteor_stages();  // exact, Porter stem

struct MeteorParams {
  double alpha = 0.9;
  double beta = 3.0;
  double gamma = 0.5;
};

double meteor(std::string_view hypothesis, std::string_view reference, const MeteorParams& params = {},
              const std::vector<MatchStage>& stages = default_meteor_stages());

std::size_t lcs_length(const std::vector<std::string>& a, const std::vector<std::string>& b);
double rouge_l_f1(std::string_view hypothesis, std::string_view reference);

class Embeddings {
 public:
  // word2vec/fastText text format; an optional "<count> <dim>" header line.
  static Embeddings load(const std::filesystem::path& path);

  void add(std::string word, std::vector<double> vec);
  std::size_t dim() const { return dim_; }
  std::size_t size() const { return table_.size(); }
  const std::vector<double>* find(const std::string& word) const;

  // Mean of in-vocabulary token vectors; nullopt with no coverage.
  std::optional<std::vector<double>> sentence_vector(std::string_view text) const;

 private:
  std::unordered_map<std::string, std::vector<double>> table_;
  std::size_t dim_ = 0;
};

double cosine_similarity(std::string_view hypothesis, std::string_view reference, const Embeddings& emb);

// Scoring interface for naturalness: per-token negative log-likelihoods
// (natural log) in the scorer's own tokenization.
class LanguageModelScorer {
 public:
  virtual ~LanguageModelScorer() = default;
  virtual std::vector<double> token_nll(std::string_view text) const = 0;
};

// exp(mean token NLL).
double perplexity(const LanguageModelScorer& lm, std::string_view text);

// Mean over pairs of perplexity(reference) / perplexity(hypothesis).
double relative_perplexity(const std::vector<EvalPair>& pairs, const LanguageModelScorer& lm);

struct EvalReport {
  double bleu = 0.0;
  double meteor_mean = 0.0;
  double rouge_l_f1_mean = 0.0;
  double relative_perplexity_mean = 0.0;
  std::optional<double> cosine_mean;
  std::size_t n_samples = 0;
};

// Prepares every pair (placeholder substitution, normalization), rejects
// empty texts by index, then computes all metrics.
EvalReport evaluate(const std::vector<EvalPair>& pairs, const LanguageModelScorer& lm,
                    const Embeddings* embeddings = nullptr);

std::string format_report_table(const EvalReport& report);
// bleu=... meteor=... rouge_l_f1=... relative_perplexity=... [cosine=...] n=...
std::string format_report_record(const EvalReport& report);

}  // namespace pov
