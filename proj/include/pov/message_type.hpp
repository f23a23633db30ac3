#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

namespace pov {

enum class MessageType { Stmt = 0, AskYN = 1, AskWH = 2, Req = 3 };

inline constexpr std::size_t kNumMessageTypes = 4;
inline constexpr std::array<MessageType, kNumMessageTypes> kAllMessageTypes = {
    MessageType::Stmt, MessageType::AskYN, MessageType::AskWH, MessageType::Req};

std::string_view to_string(MessageType type);

// Case-insensitive; accepts exactly the four canonical names.
std::optional<MessageType> parse_message_type(std::string_view text);

inline std::size_t index_of(MessageType type) { return static_cast<std::size_t>(type); }

}  // namespace pov
