#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pov/lexicon.hpp"

namespace pov {

enum class Tag { NNP, VB, VBP, VBZ, WRB, PRP, MD, PRPS, NN, TO, IN, DT };

// PRPS prints as "PRP$".
std::string_view to_string(Tag tag);

struct TaggedToken {
  std::string text;
  Tag tag;

  bool operator==(const TaggedToken&) const = default;
};

enum class QuestionForm { DirectQuestion, IndirectQuestion, Declarative };

std::string_view to_string(QuestionForm form);

struct TokenSpan {
  std::size_t begin = 0;
  std::size_t end = 0;  // exclusive

  bool operator==(const TokenSpan&) const = default;
};

struct ClauseAnalysis {
  std::vector<TaggedToken> tokens;
  QuestionForm question_form = QuestionForm::Declarative;
  std::optional<TokenSpan> subject_span;
  std::optional<std::size_t> aux_index;
  std::optional<std::size_t> wh_index;
};

// One element of a carrier pattern: a literal with alternatives ("tell",
// "can|could"), or the contact slot X. Bracketed elements are optional.
struct CarrierElement {
  std::vector<std::string> alternatives;  // empty for the contact slot
  bool optional = false;

  bool is_slot() const { return alternatives.empty(); }
};

struct CarrierPattern {
  std::vector<CarrierElement> elements;
  std::string source;  // the pattern line as written

  static CarrierPattern parse(std::string_view line);
};

struct SyntaxLexicon {
  WordSet names;
  WordSet auxiliaries;
  WordSet wh_words;
  std::vector<CarrierPattern> carriers;

  // names.txt, auxiliaries.txt, wh_words.txt, carriers.txt
  static SyntaxLexicon load(const std::filesystem::path& data_dir);
};

// Closed-class word tests shared by the analyzer and the transform rules.
bool is_nominative_pronoun(std::string_view word);
bool is_do_form(std::string_view word);
bool is_modal(std::string_view word);

std::vector<TaggedToken> tag(const std::vector<std::string>& tokens, const SyntaxLexicon& lexicon);

ClauseAnalysis analyze_clause(std::vector<TaggedToken> tagged, const SyntaxLexicon& lexicon);

// Tokenizes (clitic split), tags, and analyzes a message.
ClauseAnalysis analyze_message(std::string_view message, const SyntaxLexicon& lexicon);

inline bool is_direct_question(const ClauseAnalysis& analysis) {
  return analysis.question_form == QuestionForm::DirectQuestion;
}

struct CarrierSplit {
  std::string verb_phrase;  // e.g. "tell", "let…know", "find out"; empty when unmatched
  std::optional<std::string> contact;
  std::optional<std::string> complementizer;  // that / if / whether / to, when consumed
  std::string message;
  std::size_t pattern_index = 0;  // valid when verb_phrase is non-empty

  bool matched() const { return !verb_phrase.empty(); }
};

// Longest matching carrier pattern wins; ties go to the earlier pattern. A
// following that/if/whether/to is consumed as the complementizer.
CarrierSplit strip_carrier(std::string_view utterance, const SyntaxLexicon& lexicon);

}  // namespace pov
