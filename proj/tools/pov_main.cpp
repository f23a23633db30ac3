// pov: dataset splitting, classifier training, point-of-view conversion and
// evaluation from the command line.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pov/classifier.hpp"
#include "pov/corpus.hpp"
#include "pov/error.hpp"
#include "pov/lexicon.hpp"
#include "pov/log.hpp"
#include "pov/metrics.hpp"
#include "pov/ngram_lm.hpp"
#include "pov/pipeline.hpp"
#include "pov/text.hpp"
#include "pov/transform.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::uint64_t kDefaultSeed = 13;

struct RunConfig {
  fs::path data_dir = pov::default_data_dir();
  pov::ColumnMapping columns;
  std::uint64_t seed = kDefaultSeed;

  std::size_t max_features = 188;
  pov::SgdParams sgd;
  std::vector<double> eta_grid = {0.1, 0.01, 0.001};

  std::string scn = "@SCN@";
  std::string gender = "neutral";
  std::string contractions = "keep";
  bool greeting = true;

  int lm_order = 3;
  double lm_discount = 0.75;

  bool deterministic = false;
  bool trace = false;
  bool strict = false;
  bool verbose = false;
};

json to_json(const RunConfig& c) {
  return json{{"data_dir", c.data_dir.string()},
              {"columns",
               {{"input", c.columns.input},
                {"output", c.columns.output},
                {"type", c.columns.type},
                {"split", c.columns.split}}},
              {"seed", c.seed},
              {"classifier",
               {{"max_features", c.max_features},
                {"iterations", c.sgd.iterations},
                {"l2_lambda", c.sgd.l2_lambda},
                {"eta0", c.sgd.eta0},
                {"eta_grid", c.eta_grid}}},
              {"scn", c.scn},
              {"gender", c.gender},
              {"contractions", c.contractions},
              {"greeting", c.greeting},
              {"lm", {{"order", c.lm_order}, {"discount", c.lm_discount}}},
              {"deterministic", c.deterministic},
              {"trace", c.trace},
              {"strict", c.strict}};
}

void apply_config_file(RunConfig& c, const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw pov::IoError("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw pov::FormatError(path.string() + ": " + e.what());
  }
  try {
    if (j.contains("data_dir")) c.data_dir = j["data_dir"].get<std::string>();
    if (j.contains("columns")) {
      const auto& col = j["columns"];
      if (col.contains("input")) c.columns.input = col["input"].get<std::string>();
      if (col.contains("output")) c.columns.output = col["output"].get<std::string>();
      if (col.contains("type")) c.columns.type = col["type"].get<std::string>();
      if (col.contains("split")) c.columns.split = col["split"].get<std::string>();
    }
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("classifier")) {
      const auto& cl = j["classifier"];
      if (cl.contains("max_features")) c.max_features = cl["max_features"].get<std::size_t>();
      if (cl.contains("iterations")) c.sgd.iterations = cl["iterations"].get<int>();
      if (cl.contains("l2_lambda")) c.sgd.l2_lambda = cl["l2_lambda"].get<double>();
      if (cl.contains("eta0")) c.sgd.eta0 = cl["eta0"].get<double>();
      if (cl.contains("eta_grid")) c.eta_grid = cl["eta_grid"].get<std::vector<double>>();
    }
    if (j.contains("scn")) c.scn = j["scn"].get<std::string>();
    if (j.contains("gender")) c.gender = j["gender"].get<std::string>();
    if (j.contains("contractions")) c.contractions = j["contractions"].get<std::string>();
    if (j.contains("greeting")) c.greeting = j["greeting"].get<bool>();
    if (j.contains("lm")) {
      if (j["lm"].contains("order")) c.lm_order = j["lm"]["order"].get<int>();
      if (j["lm"].contains("discount")) c.lm_discount = j["lm"]["discount"].get<double>();
    }
    if (j.contains("deterministic")) c.deterministic = j["deterministic"].get<bool>();
    if (j.contains("trace")) c.trace = j["trace"].get<bool>();
    if (j.contains("strict")) c.strict = j["strict"].get<bool>();
  } catch (const json::exception& e) {
    throw pov::FormatError(path.string() + ": " + e.what());
  }
}

void check_exists(const fs::path& p, std::string_view what) {
  if (!fs::exists(p)) throw pov::IoError(std::string(what) + " not found: " + p.string());
}

// Writes to a sibling temp file and renames over the target.
void write_atomic(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw pov::IoError("cannot write " + tmp.string());
    out << content;
    if (!out) throw pov::IoError("write failed: " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::vector<std::string> read_lines(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw pov::IoError("cannot open " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

std::vector<pov::LabeledText> labeled(const std::vector<pov::Sample>& samples, const fs::path& origin) {
  std::vector<pov::LabeledText> out;
  out.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!samples[i].message_type)
      throw pov::FormatError(origin.string() + ":" + std::to_string(i + 2) + ": row has no message type");
    out.emplace_back(samples[i].input, *samples[i].message_type);
  }
  return out;
}

pov::PipelineOptions pipeline_options(const RunConfig& c) {
  pov::PipelineOptions o;
  o.source_contact = pov::canonicalize_placeholders(c.scn);
  auto g = pov::parse_gender(c.gender);
  if (!g) throw pov::Error("unknown gender: " + c.gender);
  o.sender_gender = *g;
  auto cs = pov::parse_contraction_style(c.contractions);
  if (!cs) throw pov::Error("unknown contraction style: " + c.contractions);
  o.contractions = *cs;
  o.greeting_enabled = c.greeting;
  return o;
}

std::string join_trace(const std::vector<std::string>& trace) { return pov::join(trace, " "); }

// ---- split

struct SplitArgs {
  fs::path input;
  fs::path out_dir;
};

int cmd_split(const RunConfig& c, const SplitArgs& a) {
  check_exists(a.input, "dataset");
  auto samples = pov::load_dataset(a.input, c.columns);
  auto split = pov::split_dataset(samples, c.seed);

  fs::create_directories(a.out_dir);
  const std::vector<std::pair<std::string, const std::vector<pov::Sample>*>> parts = {
      {"train.tsv", &split.train}, {"validation.tsv", &split.validation}, {"test.tsv", &split.test}};
  std::vector<fs::path> temps;
  try {
    for (const auto& [name, rows] : parts) {
      fs::path tmp = a.out_dir / (name + ".tmp");
      temps.push_back(tmp);
      pov::write_dataset(tmp, *rows, c.columns);
    }
    json manifest{{"source", a.input.string()},
                  {"seed", c.seed},
                  {"total", samples.size()},
                  {"train", split.train.size()},
                  {"validation", split.validation.size()},
                  {"test", split.test.size()}};
    fs::path tmp = a.out_dir / "manifest.json.tmp";
    temps.push_back(tmp);
    std::ofstream(tmp) << manifest.dump(2) << "\n";
  } catch (...) {
    for (const auto& t : temps) fs::remove(t);
    throw;
  }
  for (const auto& t : temps) {
    fs::path final_path = t;
    final_path.replace_extension();
    fs::rename(t, final_path);
  }
  std::cout << "train=" << split.train.size() << " validation=" << split.validation.size()
            << " test=" << split.test.size() << "\n";
  return 0;
}

// ---- train

struct TrainArgs {
  fs::path train;
  fs::path validation;
  fs::path model;
  fs::path report;
};

int cmd_train(const RunConfig& c, const TrainArgs& a) {
  check_exists(a.train, "training file");
  const auto train = labeled(pov::load_dataset(a.train, c.columns), a.train);
  std::vector<pov::LabeledText> validation;
  if (!a.validation.empty()) {
    check_exists(a.validation, "validation file");
    validation = labeled(pov::load_dataset(a.validation, c.columns), a.validation);
  }
  if (train.empty()) throw pov::Error("training file has no rows");

  const auto features = pov::build_feature_space(train, pov::default_stop_words(c.data_dir), c.max_features);
  pov::SgdParams params = c.sgd;
  params.seed = c.seed;
  const pov::LinearModel model = validation.empty()
                                     ? pov::train_sgd(train, features, params)
                                     : pov::train_with_eta_grid(train, validation, features, params, c.eta_grid);
  pov::save_model(model, a.model);

  const auto& eval = validation.empty() ? train : validation;
  const std::string report = pov::format_report(pov::evaluate_classifier(model, eval));
  std::cout << (validation.empty() ? "training-set report\n" : "validation report\n") << report;
  std::cout << "eta0=" << model.params.eta0 << " features=" << model.features.size() << "\n";
  if (!a.report.empty()) write_atomic(a.report, report);
  return 0;
}

// ---- classify

struct ClassifyArgs {
  fs::path model;
  std::string text;
  fs::path input;
};

int cmd_classify(const RunConfig&, const ClassifyArgs& a) {
  check_exists(a.model, "model");
  const auto model = pov::load_model(a.model);
  std::vector<std::string> lines;
  if (!a.input.empty()) lines = read_lines(a.input);
  else lines.push_back(a.text);
  for (const auto& line : lines) std::cout << pov::to_string(pov::predict(model, line)) << "\n";
  return 0;
}

// ---- convert

struct ConvertArgs {
  std::string text;
  fs::path input;
  fs::path dataset;
  fs::path output;
  fs::path model;
  std::string type;
  std::string prepend_id;
};

int cmd_convert(const RunConfig& c, const ConvertArgs& a) {
  const auto converter = pov::Converter::load(c.data_dir);
  std::optional<pov::LinearModel> model;
  if (!a.model.empty()) {
    check_exists(a.model, "model");
    model = pov::load_model(a.model);
  }
  pov::PipelineOptions base = pipeline_options(c);
  if (!a.type.empty()) {
    base.message_type = pov::parse_message_type(a.type);
    if (!base.message_type) throw pov::Error("unknown message type: " + a.type);
  }
  if (!a.prepend_id.empty()) base.prepend_id = a.prepend_id;

  std::vector<std::string> inputs;
  std::vector<std::string> references;
  if (!a.dataset.empty()) {
    check_exists(a.dataset, "dataset");
    for (auto& s : pov::load_dataset(a.dataset, c.columns)) {
      inputs.push_back(std::move(s.input));
      references.push_back(std::move(s.output));
    }
  } else if (!a.input.empty()) {
    check_exists(a.input, "input file");
    inputs = read_lines(a.input);
  } else {
    inputs.push_back(a.text);
  }

  std::ostringstream out;
  if (!references.empty()) out << "hypothesis\treference\n";
  int failures = 0;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    pov::PipelineOptions opts = base;
    if (!c.deterministic) opts.rng_seed = c.seed + i;
    std::string line;
    std::string trace;
    try {
      auto r = pov::convert_utterance(converter, model ? &*model : nullptr, inputs[i], opts);
      line = r.conversion.output;
      trace = pov::to_string(r.message_type);
      trace += " " + join_trace(r.conversion.trace);
    } catch (const pov::Error& e) {
      ++failures;
      std::cerr << "line " << (i + 1) << ": " << e.what() << "\n";
      if (c.strict) return 1;
    }
    out << line;
    if (!references.empty()) out << "\t" << references[i];
    if (c.trace) out << "\t" << trace;
    out << "\n";
  }
  if (a.output.empty()) std::cout << out.str();
  else write_atomic(a.output, out.str());
  if (failures > 0) std::cerr << failures << " of " << inputs.size() << " lines failed\n";
  return failures > 0 ? 1 : 0;
}

// ---- eval

struct EvalArgs {
  fs::path hyp;
  fs::path ref;
  fs::path lm_corpus;
  fs::path lm_dataset;
  fs::path embeddings;
  fs::path record;
};

int cmd_eval(const RunConfig& c, const EvalArgs& a) {
  check_exists(a.hyp, "hypothesis file");
  auto hyp_lines = read_lines(a.hyp);
  std::vector<pov::EvalPair> pairs;
  if (!a.ref.empty()) {
    check_exists(a.ref, "reference file");
    auto ref_lines = read_lines(a.ref);
    if (hyp_lines.empty() || ref_lines.empty()) throw pov::Error("empty hypothesis or reference file");
    if (hyp_lines.size() != ref_lines.size())
      throw pov::Error("line count mismatch: " + std::to_string(hyp_lines.size()) + " hypotheses vs " +
                       std::to_string(ref_lines.size()) + " references");
    for (std::size_t i = 0; i < hyp_lines.size(); ++i) pairs.push_back({hyp_lines[i], ref_lines[i]});
  } else {
    std::size_t first = 0;
    if (!hyp_lines.empty() && hyp_lines.front().starts_with("hypothesis\treference")) first = 1;
    for (std::size_t i = first; i < hyp_lines.size(); ++i) {
      auto tab = hyp_lines[i].find('\t');
      if (tab == std::string::npos)
        throw pov::FormatError(a.hyp.string() + ":" + std::to_string(i + 1) +
                               ": expected hypothesis<TAB>reference (or pass --ref)");
      auto rest = hyp_lines[i].substr(tab + 1);
      pairs.push_back({hyp_lines[i].substr(0, tab), rest.substr(0, rest.find('\t'))});
    }
    if (pairs.empty()) throw pov::Error("empty hypothesis file");
  }

  std::vector<std::string> lm_corpus;
  if (!a.lm_dataset.empty()) {
    check_exists(a.lm_dataset, "LM dataset");
    for (const auto& s : pov::load_dataset(a.lm_dataset, c.columns))
      lm_corpus.push_back(pov::prepare_for_scoring(s.output));
  } else if (!a.lm_corpus.empty()) {
    check_exists(a.lm_corpus, "LM corpus");
    for (const auto& line : read_lines(a.lm_corpus))
      if (!pov::trim(line).empty()) lm_corpus.push_back(pov::prepare_for_scoring(line));
  } else {
    pov::warn("no LM corpus given; training the n-gram LM on the references");
    for (const auto& p : pairs) lm_corpus.push_back(pov::prepare_for_scoring(p.reference));
  }
  const auto lm = pov::NgramLM::train(lm_corpus, c.lm_order, c.lm_discount);

  std::optional<pov::Embeddings> emb;
  if (!a.embeddings.empty()) {
    check_exists(a.embeddings, "embedding file");
    emb = pov::Embeddings::load(a.embeddings);
  }
  const auto report = pov::evaluate(pairs, lm, emb ? &*emb : nullptr);
  std::cout << pov::format_report_table(report);
  const std::string record = pov::format_report_record(report);
  if (a.record.empty()) std::cout << record << "\n";
  else write_atomic(a.record, record + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"point-of-view conversion for dictated messages"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::uint64_t seed = 0;
  std::string data_dir;
  auto* o_config = app.add_option("--config", config_path, "JSON run configuration");
  auto* o_seed = app.add_option("--seed", seed, "random seed");
  auto* o_data = app.add_option("--data-dir", data_dir, "lexicon and rule directory");
  auto* f_det = app.add_flag("--deterministic", "pin prepend selection to the first rule by id");
  auto* f_trace = app.add_flag("--trace", "append the message type and fired rules to each output line");
  auto* f_strict = app.add_flag("--strict", "stop at the first failing line");
  auto* f_verbose = app.add_flag("--verbose", "print the effective configuration");

  auto columns = [](CLI::App* sub, std::string& in, std::string& out, std::string& type) {
    sub->add_option("--input-column", in, "input column header");
    sub->add_option("--output-column", out, "output column header");
    sub->add_option("--type-column", type, "message type column header");
  };
  std::string col_in, col_out, col_type;

  SplitArgs split_args;
  auto* split = app.add_subcommand("split", "70/15/15 split of a TSV dataset");
  split->add_option("dataset", split_args.input, "dataset TSV")->required();
  split->add_option("-o,--out-dir", split_args.out_dir, "output directory")->required();
  columns(split, col_in, col_out, col_type);

  TrainArgs train_args;
  std::size_t max_features = 0;
  int iterations = 0;
  double eta0 = 0.0;
  auto* train = app.add_subcommand("train", "train the message-type classifier");
  train->add_option("--train", train_args.train, "labeled training TSV")->required();
  train->add_option("--validation", train_args.validation, "labeled validation TSV (enables the eta0 grid)");
  train->add_option("-m,--model", train_args.model, "model output path")->required();
  train->add_option("--report", train_args.report, "write the metrics report here");
  auto* o_maxf = train->add_option("--max-features", max_features, "feature budget");
  auto* o_iter = train->add_option("--iterations", iterations, "SGD epochs");
  auto* o_eta = train->add_option("--eta0", eta0, "initial learning rate (skips the grid)");
  columns(train, col_in, col_out, col_type);

  ClassifyArgs classify_args;
  auto* classify = app.add_subcommand("classify", "predict message types");
  classify->add_option("-m,--model", classify_args.model, "model file")->required();
  auto* c_text = classify->add_option("--text", classify_args.text, "single utterance");
  auto* c_in = classify->add_option("--input", classify_args.input, "one utterance per line");
  c_text->excludes(c_in);
  classify->callback([&] {
    if (!c_text->count() && !c_in->count()) throw CLI::RequiredError("--text or --input");
  });

  ConvertArgs convert_args;
  std::string scn, gender, contractions;
  auto* convert = app.add_subcommand("convert", "convert utterances to the assistant's point of view");
  auto* v_text = convert->add_option("--text", convert_args.text, "single utterance");
  auto* v_in = convert->add_option("--input", convert_args.input, "one utterance per line");
  auto* v_ds = convert->add_option("--dataset", convert_args.dataset,
                                   "dataset TSV; writes hypothesis<TAB>reference rows");
  v_text->excludes(v_in)->excludes(v_ds);
  v_in->excludes(v_ds);
  convert->add_option("-o,--output", convert_args.output, "output file (default stdout)");
  convert->add_option("-m,--model", convert_args.model, "classifier model (default: heuristic typing)");
  convert->add_option("--type", convert_args.type, "force the message type (Stmt|AskYN|AskWH|Req)");
  convert->add_option("--prepend-id", convert_args.prepend_id, "force a prepend rule");
  auto* o_scn = convert->add_option("--scn", scn, "source contact name");
  auto* o_gender = convert->add_option("--gender", gender, "sender gender: male|female|neutral");
  auto* o_contr = convert->add_option("--contractions", contractions, "keep|expand");
  auto* f_nogreet = convert->add_flag("--no-greeting", "omit the 'hi <contact>,' prefix");
  columns(convert, col_in, col_out, col_type);
  convert->callback([&] {
    if (!v_text->count() && !v_in->count() && !v_ds->count())
      throw CLI::RequiredError("--text, --input or --dataset");
  });

  EvalArgs eval_args;
  int lm_order = 0;
  double lm_discount = 0.0;
  auto* eval = app.add_subcommand("eval", "score hypotheses against references");
  eval->add_option("hypotheses", eval_args.hyp, "hypothesis<TAB>reference TSV, or hypotheses only with --ref")
      ->required();
  eval->add_option("--ref", eval_args.ref, "references, one per line");
  auto* e_corpus = eval->add_option("--lm-corpus", eval_args.lm_corpus, "LM training text, one sentence per line");
  auto* e_ds = eval->add_option("--lm-dataset", eval_args.lm_dataset, "LM training dataset TSV (output column)");
  e_corpus->excludes(e_ds);
  eval->add_option("--embeddings", eval_args.embeddings, "word vectors for cosine similarity");
  eval->add_option("--record", eval_args.record, "write the key=value record here");
  auto* o_order = eval->add_option("--lm-order", lm_order, "n-gram order");
  auto* o_disc = eval->add_option("--lm-discount", lm_discount, "Kneser-Ney discount");
  columns(eval, col_in, col_out, col_type);

  CLI11_PARSE(app, argc, argv);

  try {
    RunConfig cfg;
    if (o_config->count()) apply_config_file(cfg, config_path);
    if (o_data->count()) cfg.data_dir = data_dir;
    if (o_seed->count()) cfg.seed = seed;
    if (f_det->count()) cfg.deterministic = true;
    if (f_trace->count()) cfg.trace = true;
    if (f_strict->count()) cfg.strict = true;
    cfg.verbose = f_verbose->count() > 0;
    if (!col_in.empty()) cfg.columns.input = col_in;
    if (!col_out.empty()) cfg.columns.output = col_out;
    if (!col_type.empty()) cfg.columns.type = col_type;
    if (o_maxf->count()) cfg.max_features = max_features;
    if (o_iter->count()) cfg.sgd.iterations = iterations;
    if (o_eta->count()) {
      cfg.sgd.eta0 = eta0;
      cfg.eta_grid = {eta0};
    }
    if (o_scn->count()) cfg.scn = scn;
    if (o_gender->count()) cfg.gender = gender;
    if (o_contr->count()) cfg.contractions = contractions;
    if (f_nogreet->count()) cfg.greeting = false;
    if (o_order->count()) cfg.lm_order = lm_order;
    if (o_disc->count()) cfg.lm_discount = lm_discount;

    if (cfg.verbose) std::cerr << "effective configuration:\n" << to_json(cfg).dump(2) << "\n";
    check_exists(cfg.data_dir, "data directory");

    if (split->parsed()) return cmd_split(cfg, split_args);
    if (train->parsed()) return cmd_train(cfg, train_args);
    if (classify->parsed()) return cmd_classify(cfg, classify_args);
    if (convert->parsed()) return cmd_convert(cfg, convert_args);
    if (eval->parsed()) return cmd_eval(cfg, eval_args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
