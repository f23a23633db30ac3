#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "pov/message_type.hpp"
#include "pov/random.hpp"
#include "pov/syntax.hpp"

namespace pov {

enum class Gender { Male, Female, Neutral };

std::string_view to_string(Gender gender);
std::optional<Gender> parse_gender(std::string_view text);

// Keep: "i'm" -> "he's", "he's" -> "you're". Expand: clitics on a converted
// subject are written out ("he's" -> "you are").
enum class ContractionStyle { Keep, Expand };

std::optional<ContractionStyle> parse_contraction_style(std::string_view text);

struct ConversionRequest {
  std::string message;
  MessageType message_type = MessageType::Stmt;
  std::string source_contact = "@SCN@";
  std::optional<std::string> contact;  // name or @CN@; recovered from the message when absent
  Gender sender_gender = Gender::Neutral;
  std::optional<std::uint64_t> rng_seed;  // absent: deterministic prepend choice
  bool greeting_enabled = true;
  ContractionStyle contractions = ContractionStyle::Keep;
  std::optional<std::string> prepend_id;  // pins the prepend rule
};

struct ConversionResult {
  std::string output;
  std::vector<std::string> trace;
};

struct PrependRule {
  std::string id;
  MessageType message_type = MessageType::Stmt;
  bool requires_if = false;
  std::string template_text;  // contains @SCN@ exactly once
};

class PrependInventory {
 public:
  PrependInventory() = default;
  explicit PrependInventory(std::vector<PrependRule> rules);

  // id<TAB>type<TAB>requires_if<TAB>template per line, '#' comments.
  static PrependInventory load(const std::filesystem::path& path);

  const std::vector<PrependRule>& rules() const { return rules_; }  // sorted by id
  const PrependRule* find(std::string_view id) const;

 private:
  std::vector<PrependRule> rules_;
};

// (source form, role, gender) -> target form. Roles: sender, contact,
// contact_object, contact_possessive. Gender may be "any".
class PronounTable {
 public:
  static PronounTable load(const std::filesystem::path& path);

  void add(std::string source, std::string role, std::string gender, std::string target);
  std::optional<std::string> lookup(std::string_view source, std::string_view role, Gender gender) const;

 private:
  std::map<std::tuple<std::string, std::string, std::string>, std::string, std::less<>> entries_;
};

// Verb re-inflection used by do-deletion and agreement.
std::string to_third_singular(std::string_view base);
std::string to_base_form(std::string_view third_singular);

struct ContactRecovery {
  std::string message;
  std::optional<std::string> contact;
  bool recovered = false;
};

// Binds a lexicon name (or @CN@) in clause-subject position as the contact
// when none is given. Throws AmbiguousContactError on two distinct names.
ContactRecovery recover_contact(std::string_view message, std::optional<std::string> contact,
                                const SyntaxLexicon& lexicon);

struct ReorderResult {
  std::vector<std::string> tokens;
  std::vector<std::string> rules;  // do_deletion / subject_aux_reversal / past_do_fallback
};

// Direct questions only; anything else comes back verbatim.
ReorderResult reorder_question_tokens(const ClauseAnalysis& analysis);
std::string reorder_question(const ClauseAnalysis& analysis);

// Token-level pronoun swap. subject_mask marks tokens that became clause
// subjects through the swap; fix_agreement only re-inflects after those.
struct SwapResult {
  std::vector<std::string> tokens;
  std::vector<bool> subject_mask;
  std::vector<std::string> rules;
};

SwapResult swap_pronoun_tokens(const std::vector<TaggedToken>& tagged, Gender sender_gender,
                               std::optional<std::string_view> contact, const PronounTable& table);
std::string swap_pronouns(std::string_view message, Gender sender_gender,
                          std::optional<std::string_view> contact, const PronounTable& table,
                          const SyntaxLexicon& lexicon);

struct AgreementResult {
  std::vector<std::string> tokens;
  std::vector<std::string> rules;
};

AgreementResult fix_agreement_tokens(std::vector<std::string> tokens, const std::vector<bool>& subject_mask,
                                     ContractionStyle style);
// Every nominative pronoun is treated as a converted subject.
std::string fix_agreement(std::string_view message, ContractionStyle style = ContractionStyle::Keep);

// Rules of the message type, filtered on requires_if: an if-bearing rule is
// needed unless the message already opens with if/whether. Deterministic
// without an rng (first by id), uniform with one.
const PrependRule& select_prepend(const PrependInventory& inventory, MessageType type,
                                  QuestionForm form, bool message_has_if, Rng* rng = nullptr);

class Converter {
 public:
  Converter(SyntaxLexicon lexicon, PronounTable pronouns, PrependInventory prepends);

  // names/auxiliaries/wh_words/carriers + pronouns.tsv + prepends.tsv
  static Converter load(const std::filesystem::path& data_dir);

  ConversionResult convert(const ConversionRequest& request) const;

  const SyntaxLexicon& lexicon() const { return lexicon_; }
  const PronounTable& pronouns() const { return pronouns_; }
  const PrependInventory& prepends() const { return prepends_; }

 private:
  SyntaxLexicon lexicon_;
  PronounTable pronouns_;
  PrependInventory prepends_;
};

}  // namespace pov
