#include "pov/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "pov/error.hpp"
#include "pov/log.hpp"
#include "pov/text.hpp"

namespace pov {

std::string prepare_for_scoring(std::string_view text) {
  return to_lower_ascii(substitute_placeholders(normalize(text), "bob", "john"));
}

std::vector<std::string> scoring_tokens(std::string_view text) { return split_whitespace(text); }

double corpus_bleu(const std::vector<EvalPair>& pairs, int max_n) {
  if (pairs.empty()) throw Error("corpus_bleu: empty pair list");
  if (max_n < 1) throw Error("corpus_bleu: max_n must be >= 1");

  std::vector<double> matched(static_cast<std::size_t>(max_n), 0.0);
  std::vector<double> total(static_cast<std::size_t>(max_n), 0.0);
  double hyp_len = 0.0, ref_len = 0.0;

  for (const auto& p : pairs) {
    const auto hyp = scoring_tokens(p.hypothesis);
    const auto ref = scoring_tokens(p.reference);
    hyp_len += static_cast<double>(hyp.size());
    ref_len += static_cast<double>(ref.size());
    for (int n = 1; n <= max_n; ++n) {
      std::map<std::vector<std::string>, int> ref_counts, hyp_counts;
      for (std::size_t i = 0; i + n <= ref.size(); ++i)
        ++ref_counts[std::vector<std::string>(ref.begin() + i, ref.begin() + i + n)];
      for (std::size_t i = 0; i + n <= hyp.size(); ++i)
        ++hyp_counts[std::vector<std::string>(hyp.begin() + i, hyp.begin() + i + n)];
      for (const auto& [gram, c] : hyp_counts) {
        auto it = ref_counts.find(gram);
        if (it != ref_counts.end()) matched[n - 1] += std::min(c, it->second);
        total[n - 1] += c;
      }
    }
  }

  double log_sum = 0.0;
  for (int n = 0; n < max_n; ++n) {
    if (matched[n] == 0.0 || total[n] == 0.0) {
      warn("corpus_bleu: zero " + std::to_string(n + 1) + "-gram precision, BLEU = 0");
      return 0.0;
    }
    log_sum += std::log(matched[n] / total[n]);
  }
  const double bp = hyp_len >= ref_len ? 1.0 : std::exp(1.0 - ref_len / hyp_len);
  return bp * std::exp(log_sum / max_n);
}

std::vector<MatchStage> default_meteor_stages() {
  return {[](const std::string& w) { return w; }, [](const std::string& w) { return porter_stem(w); }};
}

namespace {

using Alignment = std::vector<std::pair<std::size_t, std::size_t>>;  // (hyp, ref)

std::size_t count_chunks(Alignment matches) {
  if (matches.empty()) return 0;
  std::sort(matches.begin(), matches.end());
  std::size_t chunks = 1;
  for (std::size_t i = 1; i < matches.size(); ++i) {
    if (!(matches[i].first == matches[i - 1].first + 1 && matches[i].second == matches[i - 1].second + 1))
      ++chunks;
  }
  return chunks;
}

// Maximum-cardinality, minimum-chunk alignment for one stage, given the
// matches fixed by earlier stages.
class StageAligner {
 public:
  StageAligner(const std::vector<std::string>& hyp_keys, const std::vector<std::string>& ref_keys,
               std::vector<bool> hyp_used, std::vector<bool> ref_used, Alignment fixed)
      : ref_keys_(ref_keys), ref_used_(std::move(ref_used)), fixed_(std::move(fixed)) {
    std::map<std::string, std::pair<int, int>> key_counts;
    for (std::size_t i = 0; i < hyp_keys.size(); ++i) {
      if (hyp_used[i]) continue;
      std::vector<std::size_t> options;
      for (std::size_t j = 0; j < ref_keys.size(); ++j)
        if (!ref_used_[j] && ref_keys[j] == hyp_keys[i]) options.push_back(j);
      if (!options.empty()) {
        positions_.push_back(i);
        options_.push_back(std::move(options));
        ++key_counts[hyp_keys[i]].first;
      }
    }
    for (std::size_t j = 0; j < ref_keys.size(); ++j)
      if (!ref_used_[j]) {
        auto it = key_counts.find(ref_keys[j]);
        if (it != key_counts.end()) ++it->second.second;
      }
    for (const auto& [key, c] : key_counts) target_ += static_cast<std::size_t>(std::min(c.first, c.second));
  }

  Alignment solve() {
    Alignment current;
    dfs(0, current);
    return best_;
  }

 private:
  static constexpr std::size_t kNodeLimit = 200000;

  void dfs(std::size_t k, Alignment& current) {
    if (++nodes_ > kNodeLimit && have_best_) return;
    if (current.size() + (positions_.size() - k) < target_) return;
    if (k == positions_.size()) {
      Alignment all = fixed_;
      all.insert(all.end(), current.begin(), current.end());
      std::size_t chunks = count_chunks(all);
      if (!have_best_ || chunks < best_chunks_) {
        have_best_ = true;
        best_chunks_ = chunks;
        best_ = current;
      }
      return;
    }
    for (std::size_t j : options_[k]) {
      if (ref_used_[j]) continue;
      ref_used_[j] = true;
      current.emplace_back(positions_[k], j);
      dfs(k + 1, current);
      current.pop_back();
      ref_used_[j] = false;
    }
    dfs(k + 1, current);
  }

  const std::vector<std::string>& ref_keys_;
  std::vector<bool> ref_used_;
  Alignment fixed_;
  std::vector<std::size_t> positions_;
  std::vector<std::vector<std::size_t>> options_;
  std::size_t target_ = 0;
  std::size_t nodes_ = 0;
  bool have_best_ = false;
  std::size_t best_chunks_ = 0;
  Alignment best_;
};

}  // namespace

double meteor(std::string_view hypothesis, std::string_view reference, const MeteorParams& params,
              const std::vector<MatchStage>& stages) {
  const auto hyp = scoring_tokens(to_lower_ascii(hypothesis));
  const auto ref = scoring_tokens(to_lower_ascii(reference));
  if (hyp.empty() || ref.empty()) throw Error("meteor: empty hypothesis or reference");

  std::vector<bool> hyp_used(hyp.size(), false), ref_used(ref.size(), false);
  Alignment alignment;
  for (const auto& stage : stages) {
    std::vector<std::string> hk, rk;
    for (const auto& w : hyp) hk.push_back(stage(w));
    for (const auto& w : ref) rk.push_back(stage(w));
    auto found = StageAligner(hk, rk, hyp_used, ref_used, alignment).solve();
    for (const auto& [i, j] : found) {
      hyp_used[i] = true;
      ref_used[j] = true;
      alignment.emplace_back(i, j);
    }
  }

  const double m = static_cast<double>(alignment.size());
  if (m == 0.0) return 0.0;
  const double precision = m / static_cast<double>(hyp.size());
  const double recall = m / static_cast<double>(ref.size());
  const double fmean = precision * recall / (params.alpha * precision + (1.0 - params.alpha) * recall);
  const double frag = static_cast<double>(count_chunks(alignment)) / m;
  const double penalty = params.gamma * std::pow(frag, params.beta);
  return fmean * (1.0 - penalty);
}

std::size_t lcs_length(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j)
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

double rouge_l_f1(std::string_view hypothesis, std::string_view reference) {
  const auto hyp = scoring_tokens(hypothesis);
  const auto ref = scoring_tokens(reference);
  if (hyp.empty() || ref.empty()) throw Error("rouge_l_f1: empty hypothesis or reference");
  const double lcs = static_cast<double>(lcs_length(hyp, ref));
  if (lcs == 0.0) return 0.0;
  const double p = lcs / static_cast<double>(hyp.size());
  const double r = lcs / static_cast<double>(ref.size());
  return 2.0 * p * r / (p + r);
}

Embeddings Embeddings::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open embedding file: " + path.string());
  Embeddings emb;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto fields = split_whitespace(line);
    if (fields.empty()) continue;
    if (line_no == 1 && fields.size() == 2 &&
        std::all_of(fields[0].begin(), fields[0].end(), ::isdigit) &&
        std::all_of(fields[1].begin(), fields[1].end(), ::isdigit))
      continue;
    if (fields.size() < 2) throw FormatError(path.string() + ":" + std::to_string(line_no) + ": no vector");
    std::vector<double> vec;
    vec.reserve(fields.size() - 1);
    for (std::size_t i = 1; i < fields.size(); ++i) {
      try {
        std::size_t used = 0;
        vec.push_back(std::stod(fields[i], &used));
        if (used != fields[i].size()) throw std::invalid_argument("trailing characters");
      } catch (const std::exception&) {
        throw FormatError(path.string() + ":" + std::to_string(line_no) + ": bad number '" + fields[i] + "'");
      }
    }
    if (emb.dim_ && vec.size() != emb.dim_)
      throw FormatError(path.string() + ":" + std::to_string(line_no) + ": dimension mismatch");
    emb.add(fields[0], std::move(vec));
  }
  if (emb.table_.empty()) throw FormatError(path.string() + ": no vectors");
  return emb;
}

void Embeddings::add(std::string word, std::vector<double> vec) {
  if (dim_ == 0) dim_ = vec.size();
  if (vec.size() != dim_) throw FormatError("embedding dimension mismatch for '" + word + "'");
  table_[std::move(word)] = std::move(vec);
}

const std::vector<double>* Embeddings::find(const std::string& word) const {
  auto it = table_.find(word);
  return it == table_.end() ? nullptr : &it->second;
}

std::optional<std::vector<double>> Embeddings::sentence_vector(std::string_view text) const {
  std::vector<double> sum(dim_, 0.0);
  std::size_t covered = 0;
  for (const auto& tok : scoring_tokens(text)) {
    if (const auto* v = find(tok)) {
      for (std::size_t d = 0; d < dim_; ++d) sum[d] += (*v)[d];
      ++covered;
    }
  }
  if (covered == 0) return std::nullopt;
  for (auto& x : sum) x /= static_cast<double>(covered);
  return sum;
}

double cosine_similarity(std::string_view hypothesis, std::string_view reference, const Embeddings& emb) {
  auto h = emb.sentence_vector(hypothesis);
  auto r = emb.sentence_vector(reference);
  if (!h) throw Error("cosine_similarity: no in-vocabulary tokens in '" + std::string(hypothesis) + "'");
  if (!r) throw Error("cosine_similarity: no in-vocabulary tokens in '" + std::string(reference) + "'");
  double dot = 0.0, nh = 0.0, nr = 0.0;
  for (std::size_t d = 0; d < h->size(); ++d) {
    dot += (*h)[d] * (*r)[d];
    nh += (*h)[d] * (*h)[d];
    nr += (*r)[d] * (*r)[d];
  }
  if (nh == 0.0 || nr == 0.0) return 0.0;
  return dot / (std::sqrt(nh) * std::sqrt(nr));
}

double perplexity(const LanguageModelScorer& lm, std::string_view text) {
  if (trim(text).empty()) throw Error("perplexity: empty text");
  const auto nll = lm.token_nll(text);
  if (nll.empty()) throw Error("perplexity: scorer returned no tokens");
  double sum = 0.0;
  for (double x : nll) sum += x;
  return std::exp(sum / static_cast<double>(nll.size()));
}

double relative_perplexity(const std::vector<EvalPair>& pairs, const LanguageModelScorer& lm) {
  if (pairs.empty()) throw Error("relative_perplexity: empty pair list");
  double sum = 0.0;
  for (const auto& p : pairs) {
    const double ref_ppl = perplexity(lm, p.reference);
    const double hyp_ppl = p.hypothesis == p.reference ? ref_ppl : perplexity(lm, p.hypothesis);
    sum += ref_ppl == hyp_ppl ? 1.0 : ref_ppl / hyp_ppl;
  }
  return sum / static_cast<double>(pairs.size());
}

EvalReport evaluate(const std::vector<EvalPair>& raw, const LanguageModelScorer& lm, const Embeddings* embeddings) {
  if (raw.empty()) throw Error("evaluate: empty pair list");
  std::vector<EvalPair> pairs;
  pairs.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    EvalPair p{prepare_for_scoring(raw[i].hypothesis), prepare_for_scoring(raw[i].reference)};
    if (p.hypothesis.empty()) throw Error("evaluate: empty hypothesis at sample " + std::to_string(i));
    if (p.reference.empty()) throw Error("evaluate: empty reference at sample " + std::to_string(i));
    pairs.push_back(std::move(p));
  }

  EvalReport report;
  report.n_samples = pairs.size();
  report.bleu = corpus_bleu(pairs);
  double meteor_sum = 0.0, rouge_sum = 0.0, cos_sum = 0.0;
  for (const auto& p : pairs) {
    meteor_sum += meteor(p.hypothesis, p.reference);
    rouge_sum += rouge_l_f1(p.hypothesis, p.reference);
    if (embeddings) cos_sum += cosine_similarity(p.hypothesis, p.reference, *embeddings);
  }
  const double n = static_cast<double>(pairs.size());
  report.meteor_mean = meteor_sum / n;
  report.rouge_l_f1_mean = rouge_sum / n;
  report.relative_perplexity_mean = relative_perplexity(pairs, lm);
  if (embeddings) report.cosine_mean = cos_sum / n;
  return report;
}

std::string format_report_table(const EvalReport& r) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(4);
  os << "metric                value\n";
  os << "BLEU (corpus)         " << r.bleu << '\n';
  os << "METEOR (mean)         " << r.meteor_mean << '\n';
  os << "ROUGE-L F1 (mean)     " << r.rouge_l_f1_mean << '\n';
  os << "relative perplexity   " << r.relative_perplexity_mean << '\n';
  if (r.cosine_mean) os << "cosine (mean)         " << *r.cosine_mean << '\n';
  os << "samples               " << r.n_samples << '\n';
  return os.str();
}

std::string format_report_record(const EvalReport& r) {
  std::ostringstream os;
  os << std::setprecision(10);
  os << "bleu=" << r.bleu << " meteor=" << r.meteor_mean << " rouge_l_f1=" << r.rouge_l_f1_mean
     << " relative_perplexity=" << r.relative_perplexity_mean;
  if (r.cosine_mean) os << " cosine=" << *r.cosine_mean;
  os << " n=" << r.n_samples;
  return os.str();
}

}  // namespace pov
