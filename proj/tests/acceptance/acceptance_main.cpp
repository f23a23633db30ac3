// Acceptance suite. One PASS/FAIL line per criterion; `--only N` runs a
// single criterion (each is its own ctest entry).
//
// Criteria 1 and 2 need the released dataset. Point POV_DATASET at a TSV
// with input/output columns (type and split columns when available); without
// it they report FAIL (blocked).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "../unit/test_util.hpp"
#include "pov/classifier.hpp"
#include "pov/corpus.hpp"
#include "pov/error.hpp"
#include "pov/log.hpp"
#include "pov/metrics.hpp"
#include "pov/ngram_lm.hpp"
#include "pov/pipeline.hpp"
#include "pov/text.hpp"
#include "pov/transform.hpp"

using namespace pov;

namespace {

// ---- tolerances
constexpr double kClassifierF1Tol = 0.05;
constexpr double kBleuTarget = 0.466;
constexpr double kMeteorTarget = 0.723;
constexpr double kEndToEndTol = 0.05;
constexpr double kOracleTol = 1e-6;
constexpr double kLmSumTol = 1e-6;
constexpr std::uint64_t kSeed = 13;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double x, int prec = 4) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(prec) << x;
  return os.str();
}

const Converter& converter() {
  static const Converter c = Converter::load(default_data_dir());
  return c;
}

std::optional<std::vector<Sample>> released_dataset(std::string& why) {
  const char* path = std::getenv("POV_DATASET");
  if (!path || !*path) {
    why = "blocked: POV_DATASET not set (released dataset unavailable offline)";
    return std::nullopt;
  }
  try {
    return load_dataset(path);
  } catch (const std::exception& e) {
    why = std::string("blocked: ") + e.what();
    return std::nullopt;
  }
}

// Labeled rows, partitioned by their split tags when every labeled row has
// one, by the seeded 70/15/15 split otherwise.
struct Annotated {
  std::vector<LabeledText> train, validation;
};

Annotated annotated_subset(const std::vector<Sample>& all) {
  std::vector<Sample> labeled;
  for (const auto& s : all)
    if (s.message_type) labeled.push_back(s);
  Annotated out;
  if (labeled.size() < 3) return out;
  auto split = split_dataset(labeled, kSeed);
  for (const auto& s : split.train) out.train.emplace_back(s.input, *s.message_type);
  for (const auto& s : split.validation) out.validation.emplace_back(s.input, *s.message_type);
  return out;
}

LinearModel train_reference_classifier(const Annotated& a) {
  auto fs = build_feature_space(a.train, default_stop_words(default_data_dir()), 188);
  SgdParams p;
  p.iterations = 5000;
  p.seed = kSeed;
  return train_with_eta_grid(a.train, a.validation, fs, p);
}

// ---- 1
Outcome classifier_reproduction() {
  std::string why;
  auto all = released_dataset(why);
  if (!all) return {false, why};
  auto a = annotated_subset(*all);
  if (a.train.empty() || a.validation.empty()) return {false, "blocked: dataset has no message-type labels"};
  auto model = train_reference_classifier(a);
  auto report = evaluate_classifier(model, a.validation);
  const std::map<MessageType, double> target = {
      {MessageType::Stmt, 0.94}, {MessageType::AskWH, 0.98}, {MessageType::Req, 0.91}, {MessageType::AskYN, 0.95}};
  bool ok = true;
  std::string detail = "train=" + std::to_string(a.train.size()) + " valid=" + std::to_string(a.validation.size());
  for (const auto& [type, f1] : target) {
    const auto& m = report.per_class[index_of(type)];
    const double got = m.f1.value_or(-1.0);
    ok = ok && std::abs(got - f1) <= kClassifierF1Tol;
    detail += " " + std::string(to_string(type)) + "=" + fmt(got, 3) + "(" + fmt(f1, 2) + ")";
  }
  return {ok, detail};
}

// ---- 2
Outcome end_to_end_reproduction() {
  std::string why;
  auto all = released_dataset(why);
  if (!all) return {false, why};
  auto test = split_dataset(*all, kSeed).test;
  std::optional<LinearModel> model;
  auto a = annotated_subset(*all);
  if (!a.train.empty() && !a.validation.empty()) model = train_reference_classifier(a);

  PipelineOptions opts;  // @SCN@ source, neutral gender, greeting on
  std::vector<EvalPair> pairs;
  std::size_t failures = 0;
  for (const auto& s : test) {
    std::string hyp;
    try {
      hyp = convert_utterance(converter(), model ? &*model : nullptr, s.input, opts).conversion.output;
    } catch (const Error&) {
      ++failures;
      hyp = s.input;  // scored as-is rather than dropped
    }
    pairs.push_back({prepare_for_scoring(hyp), prepare_for_scoring(s.output)});
  }
  const double bleu = corpus_bleu(pairs);
  double meteor_sum = 0.0;
  for (const auto& p : pairs) meteor_sum += meteor(p.hypothesis, p.reference);
  const double meteor_mean = meteor_sum / static_cast<double>(pairs.size());
  const bool ok = std::abs(bleu - kBleuTarget) <= kEndToEndTol && std::abs(meteor_mean - kMeteorTarget) <= kEndToEndTol;
  return {ok, "n=" + std::to_string(pairs.size()) + " bleu=" + fmt(bleu) + "(0.466) meteor=" + fmt(meteor_mean) +
                  "(0.723) conversion_errors=" + std::to_string(failures)};
}

// ---- 3
struct Golden {
  const char* label;
  const char* utterance;
  const char* expected;
  const char* scn;
  Gender gender;
  ContractionStyle contractions;
  const char* prepend_id;
};

Outcome golden_examples() {
  using G = Gender;
  using C = ContractionStyle;
  const std::vector<Golden> cases = {
      {"golden-01", "Can you let mom know that I finally mailed her package?", "Teresa says she finally mailed your package.",
       "Teresa", G::Female, C::Keep, nullptr},
      {"golden-02", "Ask Haley can I borrow your juicer?", "Teresa asks if she can borrow your juicer", "Teresa", G::Female,
       C::Keep, nullptr},
      {"golden-03", "Can you ask Blade if he's still having a party tomorrow",
       "Teresa asks you if you're still having a party tomorrow", "Teresa", G::Female, C::Keep, "askyn_05"},
      {"golden-04", "Text alyssa what type of wine do you want", "Teresa asks what type of wine you want", "Teresa",
       G::Female, C::Keep, nullptr},
      {"golden-05", "Ask Jeff what he's doing tonight", "Teresa asks what you are doing tonight", "Teresa", G::Female,
       C::Expand, nullptr},
      {"golden-06", "Text Will to grab some apples on his way home", "Teresa asks you to grab some apples on your way home",
       "Teresa", G::Female, C::Keep, nullptr},
      {"golden-07", "Find out if Nate is bringing anything to the party",
       "Teresa asks if you are bringing anything to the party", "Teresa", G::Female, C::Keep, nullptr},
      {"golden-08", "Tell bob I'm running late", "Joe says he's running late", "Joe", G::Male, C::Keep, nullptr},
      {"golden-09", "Ask Bob if he's coming for dinner", "Joe asks if you are coming for dinner", "Joe", G::Male,
       C::Expand, nullptr},
      {"golden-10", "Tell Bob I am running late", "Joe says he is running late", "Joe", G::Male, C::Keep, nullptr},
      {"golden-11", "Ask Bob if he is coming for dinner", "Joe asks if you are coming for dinner", "Joe", G::Male,
       C::Keep, nullptr},
  };
  std::size_t ok = 0;
  std::string misses;
  for (const auto& g : cases) {
    PipelineOptions o;
    o.source_contact = g.scn;
    o.sender_gender = g.gender;
    o.contractions = g.contractions;
    o.greeting_enabled = false;
    if (g.prepend_id) o.prepend_id = g.prepend_id;
    std::string got;
    try {
      got = convert_utterance(converter(), nullptr, g.utterance, o).conversion.output;
    } catch (const std::exception& e) {
      got = std::string("<error: ") + e.what() + ">";
    }
    if (got == normalize(g.expected)) ++ok;
    else misses += std::string(" ") + g.label + ":'" + got + "'";
  }
  return {ok == cases.size(), std::to_string(ok) + "/" + std::to_string(cases.size()) + " exact" + misses};
}

// ---- 4
class UnigramScorer : public LanguageModelScorer {
 public:
  explicit UnigramScorer(std::map<std::string, double> p) : p_(std::move(p)) {}
  std::vector<double> token_nll(std::string_view text) const override {
    std::vector<double> out;
    for (const auto& t : split_whitespace(text)) out.push_back(-std::log(p_.at(t)));
    return out;
  }

 private:
  std::map<std::string, double> p_;
};

Outcome metric_oracles() {
  struct Check {
    const char* name;
    double got;
    double oracle;
  };
  Embeddings emb;
  emb.add("a", {1.0, 0.0});
  emb.add("b", {0.0, 1.0});
  UnigramScorer lm({{"a", 0.5}, {"b", 0.25}, {"c", 0.25}});
  const std::vector<Check> checks = {
      // p1 = p2 = p3 = 1, c = 3, r = 4
      {"bleu", corpus_bleu({{"the cat sat", "the cat sat down"}}, 3), std::exp(1.0 - 4.0 / 3.0)},
      // m = 4, one chunk, P = R = 1
      {"meteor", meteor("joe is running late", "joe is running late"), 1.0 - 0.5 * std::pow(1.0 / 4.0, 3.0)},
      // LCS 3, P = 1, R = 3/4
      {"rouge_l", rouge_l_f1("a c d", "a b c d"), 2.0 * 0.75 / 1.75},
      {"cosine_orthogonal", cosine_similarity("a", "b", emb), 0.0},
      // (0.5, 0.5) against (1, 0)
      {"cosine", cosine_similarity("a b", "a", emb), 0.5 / std::sqrt(0.5)},
      // ratios 4/2 and 2/4
      {"relative_perplexity", relative_perplexity({{"a a", "b c"}, {"b", "a"}}, lm), (4.0 / 2.0 + 2.0 / 4.0) / 2.0},
  };
  bool ok = true;
  std::string detail;
  for (const auto& c : checks) {
    const bool pass = std::abs(c.got - c.oracle) <= kOracleTol;
    ok = ok && pass;
    detail += std::string(" ") + c.name + "=" + fmt(c.got, 7) + (pass ? "" : "!=" + fmt(c.oracle, 7));
  }
  return {ok, detail.substr(1)};
}

// ---- 5
std::string pick(Rng& rng, const std::vector<std::string>& v) { return v[static_cast<std::size_t>(rng.below(v.size()))]; }

std::pair<std::string, MessageType> random_message(Rng& rng) {
  const std::vector<std::string> subj = {"i", "he", "she", "they", "bob"};
  const std::vector<std::string> objs = {"me", "my car", "his keys", "her book", "the dog", "them"};
  const std::vector<std::string> tails = {"", " tonight", " at six", " for dinner", " later"};
  switch (rng.below(5)) {
    case 0:
      return {pick(rng, {"i'm", "i am", "he's", "she is"}) + " " + pick(rng, {"running late", "at home", "ready"}) + pick(rng, tails), MessageType::Stmt};
    case 1:
      return {pick(rng, {"can", "will", "should"}) + " " + pick(rng, subj) + " " + pick(rng, {"borrow", "bring", "call"}) + " " + pick(rng, objs) + pick(rng, tails), MessageType::AskYN};
    case 2:
      return {pick(rng, {"if", "whether"}) + " " + pick(rng, subj) + " " + pick(rng, {"is", "can"}) + " " + pick(rng, {"come", "coming"}) + pick(rng, tails), MessageType::AskYN};
    case 3:
      return {pick(rng, {"what", "when", "where"}) + " " + pick(rng, {"are you", "is he", "do you", "does she", "am i"}) + " " + pick(rng, {"doing", "want", "bring"}) + pick(rng, tails), MessageType::AskWH};
    default:
      return {pick(rng, {"call", "pick up", "meet"}) + " " + pick(rng, objs) + pick(rng, tails), MessageType::Req};
  }
}

std::multiset<std::string> content(const std::vector<std::string>& toks) {
  static const std::set<std::string> pronouns = {
      "i", "me", "my", "mine", "myself", "you", "your", "yours", "yourself", "he", "him", "his", "himself", "she",
      "her", "hers", "herself", "they", "them", "their", "theirs", "themself", "themselves", "it", "its"};
  std::multiset<std::string> out;
  for (const auto& t : toks) {
    if (pronouns.contains(t) || converter().lexicon().auxiliaries.contains(t) || is_do_form(t) || t == "if" ||
        t == "whether" || t == "bob" || t == "am" || t == "n't")
      continue;
    out.insert(to_base_form(t));
  }
  return out;
}

Outcome property_suites() {
  std::vector<std::string> failed;
  Rng rng(kSeed);

  // metrics: ranges, self pairs, permutation
  {
    const std::vector<std::string> pool = {"joe", "says", "asks", "if", "you", "are", "late", "dinner", "is", "ready"};
    bool ok = true;
    set_warnings_enabled(false);
    for (int i = 0; i < 200 && ok; ++i) {
      std::vector<EvalPair> pairs;
      for (int k = 0; k < 5; ++k)
        pairs.push_back({testkit::random_sentence(rng, pool, 1, 7), testkit::random_sentence(rng, pool, 1, 7)});
      const double b = corpus_bleu(pairs);
      ok = ok && b >= 0.0 && b <= 1.0;
      auto shuffled = pairs;
      rng.shuffle(std::span<EvalPair>(shuffled));
      ok = ok && corpus_bleu(shuffled) == b;
      for (const auto& p : pairs) {
        const double m = meteor(p.hypothesis, p.reference), r = rouge_l_f1(p.hypothesis, p.reference);
        ok = ok && m >= 0.0 && m <= 1.0 && r >= 0.0 && r <= 1.0 && rouge_l_f1(p.hypothesis, p.hypothesis) == 1.0;
      }
      // unsmoothed: without any 4-gram even a self corpus scores 0
      std::vector<EvalPair> self;
      std::size_t longest = 0;
      for (const auto& p : pairs) {
        self.push_back({p.reference, p.reference});
        longest = std::max(longest, split_whitespace(p.reference).size());
      }
      ok = ok && std::abs(corpus_bleu(self) - (longest >= 4 ? 1.0 : 0.0)) < 1e-12;
    }
    set_warnings_enabled(true);
    if (!ok) failed.emplace_back("metrics");
  }

  // transform: first-person absence, reorder idempotence, content, determinism
  {
    const std::set<std::string> banned = {"i", "me", "my", "mine", "myself", "am", "'m"};
    bool first_person = true, idempotent = true, preserved = true, deterministic = true;
    for (int i = 0; i < 400; ++i) {
      auto [msg, type] = random_message(rng);
      ConversionRequest r;
      r.message = msg;
      r.message_type = type;
      r.contact = "bob";
      r.greeting_enabled = false;
      r.sender_gender = static_cast<Gender>(rng.below(3));
      r.rng_seed = rng.next();
      auto res = converter().convert(r);
      auto toks = split_clitics(res.output);
      for (const auto& t : toks) first_person = first_person && !banned.contains(t);
      const auto& rule = *converter().prepends().find(res.trace.back().substr(8));
      std::vector<std::string> body(toks.begin() + static_cast<std::ptrdiff_t>(split_whitespace(rule.template_text).size()), toks.end());
      preserved = preserved && content(body) == content(split_clitics(msg));
      deterministic = deterministic && converter().convert(r).output == res.output;
      const auto once = reorder_question(analyze_message(msg, converter().lexicon()));
      idempotent = idempotent && reorder_question(analyze_message(once, converter().lexicon())) == once;
    }
    if (!first_person) failed.emplace_back("first-person");
    if (!idempotent) failed.emplace_back("reorder-idempotence");
    if (!preserved) failed.emplace_back("content-preservation");
    if (!deterministic) failed.emplace_back("transform-determinism");
  }

  // classifier: determinism, positive scaling
  {
    std::vector<LabeledText> data;
    const std::vector<std::pair<std::string, MessageType>> seeds = {
        {"tell bob dinner is ready", MessageType::Stmt}, {"ask bob if he is coming", MessageType::AskYN},
        {"ask bob when he is coming", MessageType::AskWH}, {"remind bob to call", MessageType::Req}};
    const std::vector<std::string> extra = {"now", "tonight", "soon", "today", "please"};
    for (const auto& [t, y] : seeds)
      for (const auto& e : extra) data.emplace_back(t + " " + e, y);
    auto fs = build_feature_space(data, default_stop_words(default_data_dir()), 188);
    SgdParams p;
    p.iterations = 100;
    auto m1 = train_sgd(data, fs, p);
    auto m2 = train_sgd(data, fs, p);
    bool ok = m1 == m2;
    auto scaled = m1;
    for (auto& w : scaled.weights)
      for (auto& v : w) v *= 7.5;
    for (auto& b : scaled.bias) b *= 7.5;
    const std::vector<std::string> pool = {"ask", "bob", "if", "when", "to", "tell", "dinner", "call", "ready"};
    for (int i = 0; i < 300; ++i) {
      auto t = testkit::random_sentence(rng, pool, 1, 6);
      ok = ok && predict(scaled, t) == predict(m1, t);
    }
    if (!ok) failed.emplace_back("classifier");
  }

  // n-gram LM normalization over sampled contexts
  {
    const std::vector<std::string> pool = {"joe", "says", "asks", "if", "you", "are", "late", "dinner", "is", "ready"};
    std::vector<std::string> corpus;
    for (int i = 0; i < 200; ++i) corpus.push_back(testkit::random_sentence(rng, pool, 1, 8));
    auto lm = NgramLM::train(corpus);
    auto vocab = lm.predictable_vocabulary();
    auto ctx_pool = vocab;
    ctx_pool.emplace_back("<s>");
    bool ok = true;
    for (int i = 0; i < 100; ++i) {
      std::vector<std::string> ctx = {pick(rng, ctx_pool), pick(rng, ctx_pool)};
      double sum = 0.0;
      for (const auto& w : vocab) sum += lm.prob(ctx, w);
      ok = ok && std::abs(sum - 1.0) <= kLmSumTol;
    }
    if (!ok) failed.emplace_back("lm-normalization");
  }

  if (failed.empty()) return {true, "metrics, transform, classifier and LM invariants hold"};
  std::string d = "violated:";
  for (const auto& f : failed) d += " " + f;
  return {false, d};
}

// ---- 6
Outcome external_hypotheses() {
  // An externally produced hypothesis file, scored through the same path
  // the CLI uses, and the self-ratio check under three different scorers.
  testkit::TempDir dir;
  testkit::write_file(dir / "external.tsv",
                      "hi @CN@, @SCN@ says he's running late\thi @CN@, @SCN@ says he's running late\n"
                      "@SCN@ asks if you are coming\t@SCN@ asks if you're coming for dinner\n"
                      "@SCN@ wants you to call\t@SCN@ asks you to call them back\n");
  std::vector<EvalPair> pairs;
  std::ifstream in(dir / "external.tsv");
  std::string line;
  while (std::getline(in, line)) {
    auto tab = line.find('\t');
    pairs.push_back({line.substr(0, tab), line.substr(tab + 1)});
  }
  std::vector<std::string> lm_corpus;
  for (const auto& p : pairs) lm_corpus.push_back(prepare_for_scoring(p.reference));
  set_warnings_enabled(false);
  auto ngram = NgramLM::train(lm_corpus);
  set_warnings_enabled(true);
  auto report = evaluate(pairs, ngram);

  UnigramScorer uni({{"a", 0.2}, {"b", 0.3}, {"c", 0.5}});
  std::vector<EvalPair> self;
  for (const auto& p : pairs) self.push_back({p.reference, p.reference});
  const std::vector<EvalPair> abc = {{"a b c", "a b c"}, {"c c", "c c"}};
  const bool self_ok = evaluate(self, ngram).relative_perplexity_mean == 1.0 &&
                       relative_perplexity(abc, uni) == 1.0 && relative_perplexity(self, ngram) == 1.0;
  const bool ok = self_ok && report.n_samples == 3 && report.bleu > 0.0 && report.bleu < 1.0;
  return {ok, "external file scored (n=3 bleu=" + fmt(report.bleu) + ") self-ratio=1 under n-gram and unigram scorers;"
              " seq2seq rows, GPT perplexities and metric correlations excluded"};
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (a == "--only" && i + 1 < argc) only = std::atoi(argv[++i]);
    else {
      std::cerr << "usage: pov_acceptance [--only N]\n";
      return 2;
    }
  }

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"classifier reproduction (per-class F1 within 0.05)", classifier_reproduction},
      {"rule-based end-to-end (BLEU/METEOR within 0.05)", end_to_end_reproduction},
      {"golden examples", golden_examples},
      {"metric oracles (1e-6)", metric_oracles},
      {"property suites", property_suites},
      {"external hypotheses and self-ratio", external_hypotheses},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (only && only != id) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << (o.pass ? "PASS" : "FAIL") << "  [" << id << "] " << criteria[i].first << ": " << o.detail << " ("
              << fmt(secs, 2) << "s)\n";
    if (!o.pass) ++failures;
  }
  return failures ? 1 : 0;
}
