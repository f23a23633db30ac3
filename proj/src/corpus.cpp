#include "pov/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <numeric>

#include "pov/error.hpp"
#include "pov/log.hpp"
#include "pov/random.hpp"
#include "pov/text.hpp"

namespace pov {

namespace {

bool g_warnings_enabled = true;

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    auto tab = line.find('\t', start);
    if (tab == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return fields;
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

std::string check_field(const std::string& value) {
  if (value.find_first_of("\t\n") != std::string::npos)
    throw FormatError("field contains a tab or newline: '" + value + "'");
  return value;
}

}  // namespace

void warn(std::string_view message) {
  if (g_warnings_enabled) std::cerr << "warning: " << message << '\n';
}

void set_warnings_enabled(bool enabled) { g_warnings_enabled = enabled; }

std::string_view to_string(SplitTag tag) {
  switch (tag) {
    case SplitTag::Train: return "train";
    case SplitTag::Validation: return "validation";
    case SplitTag::Test: return "test";
  }
  return "train";
}

std::optional<SplitTag> parse_split_tag(std::string_view text) {
  auto lower = to_lower_ascii(trim(text));
  if (lower == "train") return SplitTag::Train;
  if (lower == "validation" || lower == "valid" || lower == "dev") return SplitTag::Validation;
  if (lower == "test") return SplitTag::Test;
  return std::nullopt;
}

std::vector<Sample> load_dataset(const std::filesystem::path& path, const ColumnMapping& columns) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open dataset file: " + path.string());

  std::string line;
  if (!std::getline(in, line)) throw FormatError(path.string() + ": missing header row");
  strip_cr(line);
  const auto header = split_tabs(line);

  auto find_column = [&header](const std::string& name) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return i;
    return std::nullopt;
  };
  const auto input_col = find_column(columns.input);
  const auto output_col = find_column(columns.output);
  if (!input_col) throw FormatError(path.string() + ": missing column '" + columns.input + "'");
  if (!output_col) throw FormatError(path.string() + ": missing column '" + columns.output + "'");
  const auto type_col = find_column(columns.type);
  const auto split_col = find_column(columns.split);

  std::vector<Sample> samples;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) continue;
    auto fields = split_tabs(line);
    if (fields.size() != header.size()) {
      throw FormatError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                        std::to_string(header.size()) + " fields, found " +
                        std::to_string(fields.size()));
    }
    Sample s;
    s.input = canonicalize_placeholders(fields[*input_col]);
    s.output = canonicalize_placeholders(fields[*output_col]);
    if (normalize(s.input).empty())
      throw FormatError(path.string() + ":" + std::to_string(line_no) + ": empty input");
    if (type_col && !fields[*type_col].empty()) {
      s.message_type = parse_message_type(fields[*type_col]);
      if (!s.message_type)
        throw FormatError(path.string() + ":" + std::to_string(line_no) +
                          ": unknown message type '" + fields[*type_col] + "'");
    }
    if (split_col && !fields[*split_col].empty()) {
      s.split = parse_split_tag(fields[*split_col]);
      if (!s.split)
        throw FormatError(path.string() + ":" + std::to_string(line_no) + ": unknown split '" +
                          fields[*split_col] + "'");
    }
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (i == *input_col || i == *output_col || (type_col && i == *type_col) ||
          (split_col && i == *split_col))
        continue;
      s.extra.emplace_back(header[i], fields[i]);
    }
    samples.push_back(std::move(s));
  }
  return samples;
}

void write_dataset(const std::filesystem::path& path, const std::vector<Sample>& samples,
                   const ColumnMapping& columns) {
  const bool any_type = std::any_of(samples.begin(), samples.end(),
                                    [](const Sample& s) { return s.message_type.has_value(); });
  const bool any_split =
      std::any_of(samples.begin(), samples.end(), [](const Sample& s) { return s.split.has_value(); });
  std::vector<std::string> extra_names;
  if (!samples.empty())
    for (const auto& [name, value] : samples.front().extra) extra_names.push_back(name);

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write dataset file: " + path.string());

  std::vector<std::string> header = {columns.input, columns.output};
  if (any_type) header.push_back(columns.type);
  if (any_split) header.push_back(columns.split);
  header.insert(header.end(), extra_names.begin(), extra_names.end());
  out << join(header, "\t") << '\n';

  for (const auto& s : samples) {
    std::vector<std::string> row = {check_field(s.input), check_field(s.output)};
    if (any_type) row.emplace_back(s.message_type ? to_string(*s.message_type) : "");
    if (any_split) row.emplace_back(s.split ? to_string(*s.split) : "");
    if (s.extra.size() != extra_names.size())
      throw FormatError("samples disagree on passthrough columns");
    for (std::size_t i = 0; i < extra_names.size(); ++i) {
      if (s.extra[i].first != extra_names[i])
        throw FormatError("samples disagree on passthrough columns");
      row.push_back(check_field(s.extra[i].second));
    }
    out << join(row, "\t") << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

DatasetSplit split_dataset(const std::vector<Sample>& samples, std::uint64_t seed) {
  if (samples.size() < 3) throw Error("split_dataset needs at least 3 samples");

  DatasetSplit result;
  result.seed = seed;

  const auto tagged = static_cast<std::size_t>(std::count_if(
      samples.begin(), samples.end(), [](const Sample& s) { return s.split.has_value(); }));
  if (tagged == samples.size()) {
    for (const auto& s : samples) {
      switch (*s.split) {
        case SplitTag::Train: result.train.push_back(s); break;
        case SplitTag::Validation: result.validation.push_back(s); break;
        case SplitTag::Test: result.test.push_back(s); break;
      }
    }
    return result;
  }
  if (tagged > 0)
    warn(std::to_string(tagged) + " of " + std::to_string(samples.size()) +
         " samples carry split tags; ignoring tags and shuffling");

  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(order));

  const std::size_t n = samples.size();
  const std::size_t n_train = n * 70 / 100;
  const std::size_t n_valid = n * 15 / 100;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& s = samples[order[i]];
    if (i < n_train) result.train.push_back(s);
    else if (i < n_train + n_valid) result.validation.push_back(s);
    else result.test.push_back(s);
  }
  return result;
}

}  // namespace pov
