#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace pov {

inline constexpr std::string_view kContactPlaceholder = "@CN@";
inline constexpr std::string_view kSourcePlaceholder = "@SCN@";

// Rewrites every case variant of @cn@ / @scn@ to the canonical uppercase form.
std::string canonicalize_placeholders(std::string_view text);

// Lowercase (placeholders excepted), terminal . ? ! stripped, whitespace
// collapsed. Idempotent.
std::string normalize(std::string_view text);

std::string substitute_placeholders(std::string_view text, std::string_view cn,
                                    std::string_view scn);

std::vector<std::string> split_whitespace(std::string_view text);
std::string join(const std::vector<std::string>& tokens, std::string_view sep = " ");

std::string to_lower_ascii(std::string_view text);
std::string trim(std::string_view text);

bool is_placeholder(std::string_view token);

// Word tokens with clitics ('s 're 'm 've 'll 'd n't) and trailing , ; : split
// off as their own tokens. "can't" -> can n't, "won't" -> will n't.
std::vector<std::string> split_clitics(std::string_view text);

// Inverse of split_clitics.
std::string join_clitics(const std::vector<std::string>& tokens);

bool is_clitic(std::string_view token);

}  // namespace pov
