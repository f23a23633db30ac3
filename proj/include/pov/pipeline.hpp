#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "pov/classifier.hpp"
#include "pov/syntax.hpp"
#include "pov/transform.hpp"

namespace pov {

// stop_words.txt plus the first-name list, both under data_dir.
WordSet default_stop_words(const std::filesystem::path& data_dir);

// Message type from carrier and clause cues alone, used when no trained
// model is supplied.
MessageType heuristic_type(const CarrierSplit& split, const SyntaxLexicon& lexicon);

struct PipelineOptions {
  std::string source_contact = "@SCN@";
  Gender sender_gender = Gender::Neutral;
  bool greeting_enabled = true;
  ContractionStyle contractions = ContractionStyle::Keep;
  std::optional<std::uint64_t> rng_seed;
  std::optional<std::string> prepend_id;
  std::optional<MessageType> message_type;  // overrides model and heuristic
};

struct PipelineResult {
  CarrierSplit carrier;
  MessageType message_type = MessageType::Stmt;
  ConversionResult conversion;
};

// Full utterance ("tell bob i'm running late") to converted text: carrier
// stripping, classification (model when given, else heuristic), convert().
PipelineResult convert_utterance(const Converter& converter, const LinearModel* model,
                                 std::string_view utterance, const PipelineOptions& options);

}  // namespace pov
