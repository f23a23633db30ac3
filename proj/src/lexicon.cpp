#include "pov/lexicon.hpp"

#include <cstdlib>
#include <fstream>

#include "pov/error.hpp"
#include "pov/text.hpp"

#ifndef POV_DEFAULT_DATA_DIR
#define POV_DEFAULT_DATA_DIR "data"
#endif

namespace pov {

std::vector<std::string> read_list_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open list file: " + path.string());
  std::vector<std::string> entries;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto entry = trim(line);
    if (!entry.empty()) entries.push_back(std::move(entry));
  }
  return entries;
}

WordSet load_word_set(const std::filesystem::path& path) {
  WordSet set;
  for (auto& entry : read_list_file(path)) set.insert(to_lower_ascii(entry));
  return set;
}

std::filesystem::path default_data_dir() {
  if (const char* env = std::getenv("POV_DATA_DIR"); env && *env) return env;
  return POV_DEFAULT_DATA_DIR;
}

}  // namespace pov
