#pragma once

#include <filesystem>
#include <string>
#include <unordered_set>
#include <vector>

namespace pov {

using WordSet = std::unordered_set<std::string>;

// Non-empty, non-comment lines of a UTF-8 list file, trimmed. '#' starts a
// comment anywhere on the line.
std::vector<std::string> read_list_file(const std::filesystem::path& path);

WordSet load_word_set(const std::filesystem::path& path);

// $POV_DATA_DIR if set, otherwise the data/ directory of the source tree.
std::filesystem::path default_data_dir();

}  // namespace pov
