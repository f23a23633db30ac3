#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pov/lexicon.hpp"
#include "pov/message_type.hpp"

namespace pov {

using LabeledText = std::pair<std::string, MessageType>;

// Sorted by index, no duplicate indices.
struct SparseVector {
  std::vector<std::pair<std::uint32_t, double>> entries;

  double norm() const;
  bool operator==(const SparseVector&) const = default;
};

struct FeatureSpace {
  std::map<std::string, std::uint32_t> vocabulary;  // n-gram -> dense index
  std::vector<double> idf;                          // indexed like vocabulary
  WordSet stop_words;
  double min_idf_threshold = 0.0;  // smallest IDF among retained features
  int max_order = 5;

  std::size_t size() const { return idf.size(); }
  bool operator==(const FeatureSpace&) const = default;
};

// Stop-word filtered whitespace tokens of the normalized text. Placeholder
// tokens count as stop words.
std::vector<std::string> classifier_tokens(std::string_view text, const WordSet& stop_words);

// Space-joined 1..max_order grams of a token sequence, with repetition.
std::vector<std::string> extract_ngrams(const std::vector<std::string>& tokens, int max_order);

FeatureSpace build_feature_space(const std::vector<LabeledText>& corpus, const WordSet& stop_words,
                                 std::size_t max_features = 188);

// tf * idf over in-vocabulary n-grams, L2-normalized when non-zero.
SparseVector featurize(std::string_view text, const FeatureSpace& fs);

struct SgdParams {
  double l2_lambda = 1e-4;
  int iterations = 5000;  // epochs over the training set
  double eta0 = 0.01;     // eta_t = eta0 / (1 + eta0 * lambda * t)
  std::uint64_t seed = 13;

  bool operator==(const SgdParams&) const = default;
};

struct LinearModel {
  FeatureSpace features;
  std::array<std::vector<double>, kNumMessageTypes> weights;
  std::array<double, kNumMessageTypes> bias{};
  std::array<MessageType, kNumMessageTypes> classes = kAllMessageTypes;
  SgdParams params;

  bool operator==(const LinearModel&) const = default;
};

// max(0, 1 - z)^2 for z >= -1, -4 z otherwise.
double modified_huber_loss(double margin);
// dL/dz.
double modified_huber_derivative(double margin);

LinearModel train_sgd(const std::vector<LabeledText>& train, const FeatureSpace& fs,
                      const SgdParams& params);

std::array<double, kNumMessageTypes> decision_values(const LinearModel& model,
                                                     const SparseVector& x);
MessageType predict(const LinearModel& model, std::string_view text);

struct ClassMetrics {
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> f1;
  std::size_t support = 0;
};

struct ClassifierReport {
  std::array<ClassMetrics, kNumMessageTypes> per_class;
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f1 = 0.0;
  double accuracy = 0.0;
  std::size_t n = 0;
};

// Classes with no gold instances get null metrics and are left out of the
// macro averages. Zero predicted instances gives precision 0.
ClassifierReport evaluate_predictions(const std::vector<MessageType>& gold,
                                      const std::vector<MessageType>& predicted);
ClassifierReport evaluate_classifier(const LinearModel& model, const std::vector<LabeledText>& eval);

// Picks eta0 from the grid by validation macro-F1 (first best wins).
LinearModel train_with_eta_grid(const std::vector<LabeledText>& train,
                                const std::vector<LabeledText>& validation, const FeatureSpace& fs,
                                SgdParams params, const std::vector<double>& grid = {0.1, 0.01, 0.001});

inline constexpr int kModelFormatVersion = 1;

void save_model(const LinearModel& model, const std::filesystem::path& path);
LinearModel load_model(const std::filesystem::path& path);

std::string format_report(const ClassifierReport& report);

}  // namespace pov
