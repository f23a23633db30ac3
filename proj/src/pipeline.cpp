#include "pov/pipeline.hpp"

#include "pov/error.hpp"
#include "pov/text.hpp"

namespace pov {

WordSet default_stop_words(const std::filesystem::path& data_dir) {
  WordSet words = load_word_set(data_dir / "stop_words.txt");
  for (auto& name : load_word_set(data_dir / "names.txt")) words.insert(name);
  return words;
}

MessageType heuristic_type(const CarrierSplit& split, const SyntaxLexicon& lexicon) {
  if (split.complementizer == "to") return MessageType::Req;
  if (split.complementizer == "if" || split.complementizer == "whether") return MessageType::AskYN;
  auto tokens = split_whitespace(split.message);
  if (tokens.empty()) return MessageType::Stmt;
  if (tokens.front() == "to") return MessageType::Req;
  if (tokens.front() == "if" || tokens.front() == "whether") return MessageType::AskYN;
  if (lexicon.wh_words.contains(tokens.front())) return MessageType::AskWH;
  if (is_direct_question(analyze_message(split.message, lexicon))) return MessageType::AskYN;
  return MessageType::Stmt;
}

PipelineResult convert_utterance(const Converter& converter, const LinearModel* model,
                                 std::string_view utterance, const PipelineOptions& options) {
  const std::string text = normalize(utterance);
  if (text.empty()) throw Error("empty utterance");

  PipelineResult result;
  result.carrier = strip_carrier(text, converter.lexicon());
  if (options.message_type) result.message_type = *options.message_type;
  else if (model) result.message_type = predict(*model, text);
  else result.message_type = heuristic_type(result.carrier, converter.lexicon());

  // a consumed complementizer goes back into the message when the type does
  // not supply it through the prepend
  std::string message = result.carrier.message;
  const auto& comp = result.carrier.complementizer;
  if (comp && *comp != "that") {
    const bool supplied = (*comp == "to" && result.message_type == MessageType::Req) ||
                          ((*comp == "if" || *comp == "whether") && result.message_type == MessageType::AskYN);
    if (!supplied) message = *comp + " " + message;
  }
  if (trim(message).empty()) throw Error("no message content after carrier phrase");

  ConversionRequest request;
  request.message = message;
  request.message_type = result.message_type;
  request.source_contact = options.source_contact;
  request.contact = result.carrier.contact;
  request.sender_gender = options.sender_gender;
  request.rng_seed = options.rng_seed;
  request.greeting_enabled = options.greeting_enabled;
  request.contractions = options.contractions;
  request.prepend_id = options.prepend_id;
  result.conversion = converter.convert(request);
  return result;
}

}  // namespace pov
