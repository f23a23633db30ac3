#include "pov/message_type.hpp"

#include "pov/text.hpp"

namespace pov {

std::string_view to_string(MessageType type) {
  switch (type) {
    case MessageType::Stmt: return "Stmt";
    case MessageType::AskYN: return "AskYN";
    case MessageType::AskWH: return "AskWH";
    case MessageType::Req: return "Req";
  }
  return "Stmt";
}

std::optional<MessageType> parse_message_type(std::string_view text) {
  auto lower = to_lower_ascii(trim(text));
  if (lower == "stmt") return MessageType::Stmt;
  if (lower == "askyn") return MessageType::AskYN;
  if (lower == "askwh") return MessageType::AskWH;
  if (lower == "req") return MessageType::Req;
  return std::nullopt;
}

}  // namespace pov
