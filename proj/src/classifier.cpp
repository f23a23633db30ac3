#include "pov/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "pov/error.hpp"
#include "pov/random.hpp"
#include "pov/text.hpp"

namespace pov {

double SparseVector::norm() const {
  double sq = 0.0;
  for (const auto& [i, v] : entries) sq += v * v;
  return std::sqrt(sq);
}

std::vector<std::string> classifier_tokens(std::string_view text, const WordSet& stop_words) {
  std::vector<std::string> tokens;
  for (auto& tok : split_whitespace(normalize(text))) {
    if (is_placeholder(tok) || stop_words.contains(tok)) continue;
    tokens.push_back(std::move(tok));
  }
  return tokens;
}

std::vector<std::string> extract_ngrams(const std::vector<std::string>& tokens, int max_order) {
  std::vector<std::string> grams;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    std::string gram;
    for (int n = 0; n < max_order && i + n < tokens.size(); ++n) {
      if (n) gram += ' ';
      gram += tokens[i + n];
      grams.push_back(gram);
    }
  }
  return grams;
}

FeatureSpace build_feature_space(const std::vector<LabeledText>& corpus, const WordSet& stop_words,
                                 std::size_t max_features) {
  if (corpus.empty()) throw Error("build_feature_space: empty corpus");
  if (max_features < 1) throw Error("build_feature_space: max_features must be >= 1");

  FeatureSpace fs;
  fs.stop_words = stop_words;

  std::vector<std::unordered_map<std::string, int>> doc_counts;
  doc_counts.reserve(corpus.size());
  std::unordered_map<std::string, int> df;
  for (const auto& [text, label] : corpus) {
    std::unordered_map<std::string, int> counts;
    for (auto& gram : extract_ngrams(classifier_tokens(text, stop_words), fs.max_order))
      ++counts[gram];
    for (const auto& [gram, c] : counts) ++df[gram];
    doc_counts.push_back(std::move(counts));
  }

  const double n_docs = static_cast<double>(corpus.size());
  std::unordered_map<std::string, double> idf;
  for (const auto& [gram, d] : df) idf[gram] = std::log((1.0 + n_docs) / (1.0 + d)) + 1.0;

  std::unordered_map<std::string, double> mass;
  for (const auto& counts : doc_counts)
    for (const auto& [gram, c] : counts) mass[gram] += c * idf[gram];

  std::vector<std::pair<std::string, double>> ranked(mass.begin(), mass.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (ranked.size() > max_features) ranked.resize(max_features);

  std::vector<std::string> kept;
  kept.reserve(ranked.size());
  for (auto& [gram, m] : ranked) kept.push_back(gram);
  std::sort(kept.begin(), kept.end());

  fs.min_idf_threshold = kept.empty() ? 0.0 : std::numeric_limits<double>::infinity();
  for (std::uint32_t i = 0; i < kept.size(); ++i) {
    fs.vocabulary.emplace(kept[i], i);
    fs.idf.push_back(idf[kept[i]]);
    fs.min_idf_threshold = std::min(fs.min_idf_threshold, fs.idf.back());
  }
  return fs;
}

SparseVector featurize(std::string_view text, const FeatureSpace& fs) {
  std::map<std::uint32_t, double> tf;
  for (const auto& gram : extract_ngrams(classifier_tokens(text, fs.stop_words), fs.max_order)) {
    if (auto it = fs.vocabulary.find(gram); it != fs.vocabulary.end()) tf[it->second] += 1.0;
  }
  SparseVector x;
  for (const auto& [i, count] : tf) x.entries.emplace_back(i, count * fs.idf[i]);
  if (double n = x.norm(); n > 0.0)
    for (auto& [i, v] : x.entries) v /= n;
  return x;
}

double modified_huber_loss(double margin) {
  if (margin >= -1.0) {
    double h = std::max(0.0, 1.0 - margin);
    return h * h;
  }
  return -4.0 * margin;
}

double modified_huber_derivative(double margin) {
  if (margin >= 1.0) return 0.0;
  if (margin >= -1.0) return -2.0 * (1.0 - margin);
  return -4.0;
}

LinearModel train_sgd(const std::vector<LabeledText>& train, const FeatureSpace& fs,
                      const SgdParams& params) {
  if (train.empty()) throw Error("train_sgd: empty training set");
  if (params.iterations < 1) throw Error("train_sgd: iterations must be >= 1");
  if (!(params.eta0 > 0.0) || params.l2_lambda < 0.0) throw Error("train_sgd: bad hyperparameters");

  std::vector<SparseVector> xs;
  std::vector<std::size_t> labels;
  xs.reserve(train.size());
  for (const auto& [text, label] : train) {
    xs.push_back(featurize(text, fs));
    labels.push_back(index_of(label));
  }

  const std::size_t dim = fs.size();
  // w = scale * v keeps the L2 shrink O(1) per step
  std::array<std::vector<double>, kNumMessageTypes> v;
  std::array<double, kNumMessageTypes> scale{};
  std::array<double, kNumMessageTypes> bias{};
  for (std::size_t c = 0; c < kNumMessageTypes; ++c) {
    v[c].assign(dim, 0.0);
    scale[c] = 1.0;
  }

  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(params.seed);
  double t = 0.0;

  for (int epoch = 0; epoch < params.iterations; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    for (std::size_t idx : order) {
      const double eta = params.eta0 / (1.0 + params.eta0 * params.l2_lambda * t);
      const double shrink = 1.0 - eta * params.l2_lambda;
      const auto& x = xs[idx];
      for (std::size_t c = 0; c < kNumMessageTypes; ++c) {
        double dot = 0.0;
        for (const auto& [i, val] : x.entries) dot += v[c][i] * val;
        const double y = labels[idx] == c ? 1.0 : -1.0;
        const double f = scale[c] * dot + bias[c];
        const double g = modified_huber_derivative(y * f) * y;

        scale[c] *= shrink;
        if (g != 0.0) {
          const double step = -eta * g / scale[c];
          for (const auto& [i, val] : x.entries) v[c][i] += step * val;
          bias[c] -= eta * g;
        }
        if (scale[c] < 1e-9) {
          for (auto& w : v[c]) w *= scale[c];
          scale[c] = 1.0;
        }
      }
      t += 1.0;
    }
  }

  LinearModel model;
  model.features = fs;
  model.params = params;
  for (std::size_t c = 0; c < kNumMessageTypes; ++c) {
    model.weights[c] = std::move(v[c]);
    for (auto& w : model.weights[c]) w *= scale[c];
    model.bias[c] = bias[c];
  }
  return model;
}

std::array<double, kNumMessageTypes> decision_values(const LinearModel& model,
                                                     const SparseVector& x) {
  std::array<double, kNumMessageTypes> out{};
  for (std::size_t c = 0; c < kNumMessageTypes; ++c) {
    double dot = model.bias[c];
    for (const auto& [i, val] : x.entries) dot += model.weights[c][i] * val;
    out[c] = dot;
  }
  return out;
}

MessageType predict(const LinearModel& model, std::string_view text) {
  const auto scores = decision_values(model, featurize(text, model.features));
  std::size_t best = 0;
  for (std::size_t c = 1; c < kNumMessageTypes; ++c)
    if (scores[c] > scores[best]) best = c;
  return model.classes[best];
}

ClassifierReport evaluate_predictions(const std::vector<MessageType>& gold,
                                      const std::vector<MessageType>& predicted) {
  if (gold.empty()) throw Error("evaluate_classifier: empty evaluation set");
  if (gold.size() != predicted.size()) throw Error("evaluate_classifier: size mismatch");

  std::array<std::size_t, kNumMessageTypes> tp{}, fp{}, fn{};
  std::size_t correct = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    auto g = index_of(gold[i]), p = index_of(predicted[i]);
    if (g == p) {
      ++tp[g];
      ++correct;
    } else {
      ++fp[p];
      ++fn[g];
    }
  }

  ClassifierReport report;
  report.n = gold.size();
  report.accuracy = static_cast<double>(correct) / static_cast<double>(gold.size());
  std::size_t present = 0;
  for (std::size_t c = 0; c < kNumMessageTypes; ++c) {
    auto& m = report.per_class[c];
    m.support = tp[c] + fn[c];
    if (m.support == 0) continue;
    double p = tp[c] + fp[c] ? static_cast<double>(tp[c]) / static_cast<double>(tp[c] + fp[c]) : 0.0;
    double r = static_cast<double>(tp[c]) / static_cast<double>(m.support);
    m.precision = p;
    m.recall = r;
    m.f1 = p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
    report.macro_precision += p;
    report.macro_recall += r;
    report.macro_f1 += *m.f1;
    ++present;
  }
  report.macro_precision /= static_cast<double>(present);
  report.macro_recall /= static_cast<double>(present);
  report.macro_f1 /= static_cast<double>(present);
  return report;
}

ClassifierReport evaluate_classifier(const LinearModel& model, const std::vector<LabeledText>& eval) {
  if (eval.empty()) throw Error("evaluate_classifier: empty evaluation set");
  std::vector<MessageType> gold, predicted;
  for (const auto& [text, label] : eval) {
    gold.push_back(label);
    predicted.push_back(predict(model, text));
  }
  return evaluate_predictions(gold, predicted);
}

LinearModel train_with_eta_grid(const std::vector<LabeledText>& train,
                                const std::vector<LabeledText>& validation, const FeatureSpace& fs,
                                SgdParams params, const std::vector<double>& grid) {
  if (grid.empty()) throw Error("train_with_eta_grid: empty grid");
  std::optional<LinearModel> best;
  double best_f1 = -1.0;
  for (double eta0 : grid) {
    params.eta0 = eta0;
    auto model = train_sgd(train, fs, params);
    double f1 = evaluate_classifier(model, validation).macro_f1;
    if (f1 > best_f1) {
      best_f1 = f1;
      best = std::move(model);
    }
  }
  return std::move(*best);
}

void save_model(const LinearModel& model, const std::filesystem::path& path) {
  nlohmann::json j;
  j["format"] = "pov-linear-model";
  j["format_version"] = kModelFormatVersion;
  std::vector<std::string> by_index(model.features.size());
  for (const auto& [gram, i] : model.features.vocabulary) by_index[i] = gram;
  j["vocabulary"] = by_index;
  j["idf"] = model.features.idf;
  std::vector<std::string> stops(model.features.stop_words.begin(), model.features.stop_words.end());
  std::sort(stops.begin(), stops.end());
  j["stop_words"] = stops;
  j["min_idf_threshold"] = model.features.min_idf_threshold;
  j["max_order"] = model.features.max_order;
  std::vector<std::string> classes;
  for (auto c : model.classes) classes.emplace_back(to_string(c));
  j["classes"] = classes;
  j["weights"] = model.weights;
  j["bias"] = model.bias;
  j["hyperparams"] = {{"l2_lambda", model.params.l2_lambda},
                      {"iterations", model.params.iterations},
                      {"learning_rate", "eta0/(1+eta0*lambda*t)"},
                      {"eta0", model.params.eta0},
                      {"seed", model.params.seed}};

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write model file: " + path.string());
  out << j.dump(1) << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

LinearModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open model file: " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
  try {
    if (j.at("format_version").get<int>() != kModelFormatVersion)
      throw FormatError(path.string() + ": unsupported model format version");
    LinearModel model;
    auto vocab = j.at("vocabulary").get<std::vector<std::string>>();
    for (std::uint32_t i = 0; i < vocab.size(); ++i) model.features.vocabulary.emplace(vocab[i], i);
    model.features.idf = j.at("idf").get<std::vector<double>>();
    for (auto& s : j.at("stop_words").get<std::vector<std::string>>()) model.features.stop_words.insert(s);
    model.features.min_idf_threshold = j.at("min_idf_threshold").get<double>();
    model.features.max_order = j.at("max_order").get<int>();
    auto classes = j.at("classes").get<std::vector<std::string>>();
    if (classes.size() != kNumMessageTypes) throw FormatError(path.string() + ": expected 4 classes");
    for (std::size_t c = 0; c < kNumMessageTypes; ++c) {
      auto t = parse_message_type(classes[c]);
      if (!t) throw FormatError(path.string() + ": unknown class " + classes[c]);
      model.classes[c] = *t;
    }
    model.weights = j.at("weights").get<std::array<std::vector<double>, kNumMessageTypes>>();
    model.bias = j.at("bias").get<std::array<double, kNumMessageTypes>>();
    const auto& hp = j.at("hyperparams");
    model.params.l2_lambda = hp.at("l2_lambda").get<double>();
    model.params.iterations = hp.at("iterations").get<int>();
    model.params.eta0 = hp.at("eta0").get<double>();
    model.params.seed = hp.at("seed").get<std::uint64_t>();
    if (model.features.idf.size() != vocab.size())
      throw FormatError(path.string() + ": idf length mismatch");
    for (const auto& w : model.weights)
      if (w.size() != vocab.size()) throw FormatError(path.string() + ": weight length mismatch");
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

std::string format_report(const ClassifierReport& report) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(4);
  os << "class   precision  recall     f1         support\n";
  for (std::size_t c = 0; c < kNumMessageTypes; ++c) {
    const auto& m = report.per_class[c];
    os << std::left << std::setw(8) << to_string(kAllMessageTypes[c]);
    auto cell = [&os](const std::optional<double>& v) {
      if (v) os << std::setw(11) << *v;
      else os << std::setw(11) << "n/a";
    };
    cell(m.precision);
    cell(m.recall);
    cell(m.f1);
    os << m.support << '\n';
  }
  os << "macro   " << std::setw(11) << report.macro_precision << std::setw(11) << report.macro_recall
     << std::setw(11) << report.macro_f1 << report.n << '\n';
  os << "accuracy " << report.accuracy << '\n';
  return os.str();
}

}  // namespace pov
