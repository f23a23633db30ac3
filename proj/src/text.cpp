#include "pov/text.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace pov {

namespace {

bool iequals_at(std::string_view text, std::size_t pos, std::string_view needle) {
  if (pos + needle.size() > text.size()) return false;
  for (std::size_t i = 0; i < needle.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(text[pos + i])) !=
        std::tolower(static_cast<unsigned char>(needle[i])))
      return false;
  }
  return true;
}

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

constexpr auto kClitics = std::to_array<std::string_view>({"'s", "'re", "'m", "'ve", "'ll", "'d"});

}  // namespace

std::string to_lower_ascii(std::string_view text) {
  std::string out(text);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string trim(std::string_view text) {
  std::size_t b = 0, e = text.size();
  while (b < e && is_space(text[b])) ++b;
  while (e > b && is_space(text[e - 1])) --e;
  return std::string(text.substr(b, e - b));
}

std::string canonicalize_placeholders(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size();) {
    if (iequals_at(text, i, kSourcePlaceholder)) {
      out += kSourcePlaceholder;
      i += kSourcePlaceholder.size();
    } else if (iequals_at(text, i, kContactPlaceholder)) {
      out += kContactPlaceholder;
      i += kContactPlaceholder.size();
    } else {
      out += text[i++];
    }
  }
  return out;
}

std::string normalize(std::string_view text) {
  std::string collapsed;
  collapsed.reserve(text.size());
  bool pending_space = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    // typographic apostrophe (U+2019) folds to ASCII
    if (c == '\xE2' && i + 2 < text.size() && text[i + 1] == '\x80' && text[i + 2] == '\x99') {
      c = '\'';
      i += 2;
    }
    if (is_space(c)) {
      pending_space = !collapsed.empty();
      continue;
    }
    if (pending_space) collapsed += ' ';
    pending_space = false;
    collapsed += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  // terminal punctuation, possibly repeated or separated by spaces ("ok ?!")
  while (!collapsed.empty()) {
    char last = collapsed.back();
    if (last == '.' || last == '?' || last == '!' || last == ' ') {
      collapsed.pop_back();
    } else {
      break;
    }
  }
  return canonicalize_placeholders(collapsed);
}

std::string substitute_placeholders(std::string_view text, std::string_view cn,
                                    std::string_view scn) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size();) {
    if (text.compare(i, kSourcePlaceholder.size(), kSourcePlaceholder) == 0) {
      out += scn;
      i += kSourcePlaceholder.size();
    } else if (text.compare(i, kContactPlaceholder.size(), kContactPlaceholder) == 0) {
      out += cn;
      i += kContactPlaceholder.size();
    } else {
      out += text[i++];
    }
  }
  return out;
}

std::vector<std::string> split_whitespace(std::string_view text) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    std::size_t start = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    if (i > start) tokens.emplace_back(text.substr(start, i - start));
  }
  return tokens;
}

std::string join(const std::vector<std::string>& tokens, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += sep;
    out += tokens[i];
  }
  return out;
}

bool is_placeholder(std::string_view token) {
  return token == kContactPlaceholder || token == kSourcePlaceholder;
}

bool is_clitic(std::string_view token) {
  if (token == "n't") return true;
  return std::find(kClitics.begin(), kClitics.end(), token) != kClitics.end();
}

std::vector<std::string> split_clitics(std::string_view text) {
  std::vector<std::string> out;
  for (auto word : split_whitespace(text)) {
    std::vector<std::string> trailing;
    while (word.size() > 1 && (word.back() == ',' || word.back() == ';' || word.back() == ':')) {
      trailing.insert(trailing.begin(), std::string(1, word.back()));
      word.pop_back();
    }
    std::string lower = to_lower_ascii(word);
    if (lower == "let's" || lower == "o'clock" || lower == "ain't") {
      out.push_back(word);
    } else if (lower.size() > 3 && lower.ends_with("n't")) {
      std::string host = word.substr(0, word.size() - 3);
      std::string host_lower = to_lower_ascii(host);
      if (host_lower == "ca") host = "can";
      else if (host_lower == "wo") host = "will";
      else if (host_lower == "sha") host = "shall";
      out.push_back(host);
      out.emplace_back("n't");
    } else {
      bool split = false;
      for (auto clitic : kClitics) {
        if (lower.size() > clitic.size() && lower.ends_with(clitic)) {
          out.push_back(word.substr(0, word.size() - clitic.size()));
          out.emplace_back(clitic);
          split = true;
          break;
        }
      }
      if (!split) out.push_back(word);
    }
    out.insert(out.end(), trailing.begin(), trailing.end());
  }
  return out;
}

std::string join_clitics(const std::vector<std::string>& tokens) {
  std::string out;
  for (const auto& tok : tokens) {
    if (out.empty()) {
      out = tok;
      continue;
    }
    if (tok == "n't") {
      // undo the host rewrites made by split_clitics
      auto rewrite = [&out](std::string_view from, std::string_view to) {
        if (out.size() >= from.size() && out.ends_with(from) &&
            (out.size() == from.size() || out[out.size() - from.size() - 1] == ' ')) {
          out.replace(out.size() - from.size(), from.size(), to);
          return true;
        }
        return false;
      };
      if (!rewrite("can", "ca") && !rewrite("will", "wo")) rewrite("shall", "sha");
      out += tok;
    } else if (is_clitic(tok) || tok == "," || tok == ";" || tok == ":") {
      out += tok;
    } else {
      out += ' ';
      out += tok;
    }
  }
  return out;
}

}  // namespace pov
