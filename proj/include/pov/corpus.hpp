#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pov/message_type.hpp"

namespace pov {

enum class SplitTag { Train, Validation, Test };

std::string_view to_string(SplitTag tag);
std::optional<SplitTag> parse_split_tag(std::string_view text);

struct Sample {
  std::string input;
  std::string output;
  std::optional<MessageType> message_type;
  std::optional<SplitTag> split;
  // passthrough columns in file order
  std::vector<std::pair<std::string, std::string>> extra;

  bool operator==(const Sample&) const = default;
};

struct ColumnMapping {
  std::string input = "input";
  std::string output = "output";
  std::string type = "type";
  std::string split = "split";
};

struct DatasetSplit {
  std::vector<Sample> train;
  std::vector<Sample> validation;
  std::vector<Sample> test;
  std::uint64_t seed = 0;
};

// Tab-separated, header row mandatory. Placeholders are canonicalized; the
// remaining text is kept as written.
std::vector<Sample> load_dataset(const std::filesystem::path& path,
                                 const ColumnMapping& columns = {});

// Writes input/output/type/split (when any sample has them) followed by the
// extra columns of the first sample.
void write_dataset(const std::filesystem::path& path, const std::vector<Sample>& samples,
                   const ColumnMapping& columns = {});

// 70/15/15. Train and validation sizes are floor(0.70 n) and floor(0.15 n);
// test takes the remainder. Fully tagged inputs are partitioned by tag.
DatasetSplit split_dataset(const std::vector<Sample>& samples, std::uint64_t seed);

}  // namespace pov
