#include "pov/transform.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "pov/error.hpp"
#include "pov/lexicon.hpp"
#include "pov/text.hpp"

namespace pov {

namespace {

template <std::size_t N>
bool in(std::string_view word, const std::array<std::string_view, N>& set) {
  return std::find(set.begin(), set.end(), word) != set.end();
}

constexpr auto kAdverbs = std::to_array<std::string_view>({
    "still",     "really",   "just",     "also",      "always",   "never",    "already", "finally",
    "probably",  "definitely", "actually", "only",    "even",     "usually",  "often",   "sometimes",
    "totally",   "seriously", "literally", "truly",   "honestly", "sure",     "kinda",   "not",
    "certainly", "maybe",     "hopefully", "basically", "almost", "simply"});

constexpr auto kIrregularPast = std::to_array<std::string_view>({
    "went",   "got",    "had",    "was",    "were",  "did",    "said",    "made",  "told",   "saw",
    "came",   "left",   "took",   "bought", "forgot", "found", "thought", "knew",  "sent",   "gave",
    "ate",    "ran",    "lost",   "won",    "felt",  "kept",   "brought", "paid",  "met",    "heard",
    "wrote",  "sold",   "spent",  "built",  "caught", "taught", "drove",  "rode",  "woke",   "slept",
    "stood",  "sat",    "began",  "broke",  "chose", "drank",  "fell",    "flew",  "forgave", "grew",
    "hid",    "held",   "hung",   "led",    "lent",  "meant",  "rang",    "rose",  "shook",  "sang",
    "spoke",  "stole",  "swam",   "threw"});

constexpr auto kNotVerbs = std::to_array<std::string_view>({
    "to",   "the",  "a",    "an",   "and",  "or",   "but",   "so",    "if",    "that",  "this",
    "at",   "in",   "on",   "for",  "with", "from", "of",    "too",   "very",  "here",  "there",
    "now",  "then", "home", "back", "later", "today", "tonight", "tomorrow", "yesterday", "guys"});

constexpr auto kSubjectOpeners = std::to_array<std::string_view>({"if",   "whether", "that",    "and", "but",
                                                              "so",   "because", "while",   "since", ","});

constexpr auto kCopulaFollowers = std::to_array<std::string_view>({
    "not",  "been",   "going", "gonna", "a",      "an",    "the",    "here",
    "there", "home",  "back",  "still", "so",     "very",  "really", "just",
    "always", "never", "late", "ready", "coming", "on",    "at",     "in"});

bool is_alpha_word(std::string_view w) {
  return !w.empty() && std::all_of(w.begin(), w.end(), [](char c) { return c >= 'a' && c <= 'z'; });
}

bool is_number(std::string_view w) {
  return !w.empty() && std::all_of(w.begin(), w.end(), [](char c) {
    return std::isdigit(static_cast<unsigned char>(c)) || c == ':';
  });
}

bool lexical_verb_candidate(std::string_view w) {
  if (!is_alpha_word(w) || w.size() < 2) return false;
  if (in(w, kAdverbs) || in(w, kIrregularPast) || in(w, kNotVerbs)) return false;
  if (is_nominative_pronoun(w) || is_modal(w)) return false;
  if (w.ends_with("ed") || w.ends_with("ing") || w.ends_with("ly")) return false;
  static constexpr auto kFunction = std::to_array<std::string_view>({
      "is", "are", "am", "was", "were", "be", "been", "has", "have", "do", "does", "me", "you", "your"});
  return !in(w, kFunction);
}

// "'s" after a subject: has when a participle follows, is otherwise.
bool clitic_s_is_has(const std::vector<std::string>& toks, std::size_t j) {
  if (j + 1 >= toks.size()) return false;
  const auto& next = toks[j + 1];
  static constexpr auto kParticiples = std::to_array<std::string_view>({
      "been", "got", "gotten", "done", "seen", "taken", "eaten", "gone", "had", "made", "left", "lost"});
  if (in(next, kParticiples)) return true;
  return next.size() > 3 && next.ends_with("ed");
}

bool possessive_s(const std::vector<TaggedToken>& toks, std::size_t s_index) {
  if (s_index + 1 >= toks.size()) return false;
  const auto& next = toks[s_index + 1].text;
  if (in(next, kCopulaFollowers) || next.ends_with("ing") || next.ends_with("ly")) return false;
  return toks[s_index + 1].tag == Tag::NN || toks[s_index + 1].tag == Tag::NNP;
}

std::string lower_name(std::string_view name) {
  return is_placeholder(name) ? std::string(name) : to_lower_ascii(name);
}

std::string arrow(std::string_view from, std::string_view to) {
  return std::string(from) + "→" + std::string(to);
}

}  // namespace

std::string_view to_string(Gender gender) {
  switch (gender) {
    case Gender::Male: return "male";
    case Gender::Female: return "female";
    case Gender::Neutral: return "neutral";
  }
  return "neutral";
}

std::optional<Gender> parse_gender(std::string_view text) {
  auto lower = to_lower_ascii(trim(text));
  if (lower == "male" || lower == "m") return Gender::Male;
  if (lower == "female" || lower == "f") return Gender::Female;
  if (lower == "neutral" || lower == "n") return Gender::Neutral;
  return std::nullopt;
}

std::optional<ContractionStyle> parse_contraction_style(std::string_view text) {
  auto lower = to_lower_ascii(trim(text));
  if (lower == "keep") return ContractionStyle::Keep;
  if (lower == "expand") return ContractionStyle::Expand;
  return std::nullopt;
}

PrependInventory::PrependInventory(std::vector<PrependRule> rules) : rules_(std::move(rules)) {
  for (const auto& r : rules_) {
    const auto first = r.template_text.find(kSourcePlaceholder);
    if (first == std::string::npos ||
        r.template_text.find(kSourcePlaceholder, first + 1) != std::string::npos)
      throw FormatError("prepend rule " + r.id + ": template must contain @SCN@ exactly once");
    if (r.requires_if && r.message_type != MessageType::AskYN)
      throw FormatError("prepend rule " + r.id + ": requires_if is only valid for AskYN");
  }
  std::sort(rules_.begin(), rules_.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < rules_.size(); ++i)
    if (rules_[i].id == rules_[i - 1].id) throw FormatError("duplicate prepend rule id " + rules_[i].id);
}

PrependInventory PrependInventory::load(const std::filesystem::path& path) {
  std::vector<PrependRule> rules;
  for (const auto& line : read_list_file(path)) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      auto tab = line.find('\t', start);
      fields.push_back(trim(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start)));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (fields.size() != 4) throw FormatError(path.string() + ": expected 4 tab-separated fields: " + line);
    PrependRule r;
    r.id = fields[0];
    auto type = parse_message_type(fields[1]);
    if (!type) throw FormatError(path.string() + ": unknown message type " + fields[1]);
    r.message_type = *type;
    auto flag = to_lower_ascii(fields[2]);
    if (flag != "true" && flag != "false") throw FormatError(path.string() + ": requires_if must be true|false");
    r.requires_if = flag == "true";
    r.template_text = canonicalize_placeholders(fields[3]);
    rules.push_back(std::move(r));
  }
  return PrependInventory(std::move(rules));
}

const PrependRule* PrependInventory::find(std::string_view id) const {
  for (const auto& r : rules_)
    if (r.id == id) return &r;
  return nullptr;
}

PronounTable PronounTable::load(const std::filesystem::path& path) {
  PronounTable table;
  for (const auto& line : read_list_file(path)) {
    auto fields = split_whitespace(line);
    if (fields.size() != 4) throw FormatError(path.string() + ": expected 4 fields: " + line);
    table.add(fields[0], fields[1], fields[2], fields[3]);
  }
  return table;
}

void PronounTable::add(std::string source, std::string role, std::string gender, std::string target) {
  entries_[{to_lower_ascii(source), to_lower_ascii(role), to_lower_ascii(gender)}] = std::move(target);
}

std::optional<std::string> PronounTable::lookup(std::string_view source, std::string_view role,
                                                Gender gender) const {
  for (std::string_view g : {to_string(gender), std::string_view("any")}) {
    auto it = entries_.find(std::make_tuple(std::string(source), std::string(role), std::string(g)));
    if (it != entries_.end()) return it->second;
  }
  return std::nullopt;
}

std::string to_third_singular(std::string_view base) {
  if (base == "be") return "is";
  if (base == "have") return "has";
  if (base == "do") return "does";
  if (base == "go") return "goes";
  std::string w(base);
  if (w.ends_with("s") || w.ends_with("x") || w.ends_with("z") || w.ends_with("ch") || w.ends_with("sh") ||
      w.ends_with("o"))
    return w + "es";
  if (w.size() > 1 && w.back() == 'y' && std::string_view("aeiou").find(w[w.size() - 2]) == std::string_view::npos)
    return w.substr(0, w.size() - 1) + "ies";
  return w + "s";
}

std::string to_base_form(std::string_view v) {
  if (v == "is") return "be";
  if (v == "has") return "have";
  if (v == "does") return "do";
  if (v == "goes") return "go";
  std::string w(v);
  if (w.size() > 4 && w.ends_with("ies")) return w.substr(0, w.size() - 3) + "y";
  for (std::string_view suffix : {"sses", "shes", "ches", "xes", "zzes", "oes"}) {
    if (w.size() > suffix.size() && w.ends_with(suffix)) return w.substr(0, w.size() - 2);
  }
  if (w.size() > 2 && w.ends_with('s') && !w.ends_with("ss")) return w.substr(0, w.size() - 1);
  return w;
}

ContactRecovery recover_contact(std::string_view message, std::optional<std::string> contact,
                                const SyntaxLexicon& lexicon) {
  ContactRecovery out;
  out.message = std::string(message);
  out.contact = std::move(contact);
  if (out.contact) return out;

  auto tokens = split_clitics(message);
  if (tokens.empty()) return out;
  auto tagged = tag(tokens, lexicon);

  std::vector<std::string> candidates;
  std::optional<std::size_t> subject_candidate;
  for (std::size_t i = 0; i < tagged.size(); ++i) {
    const auto& t = tagged[i];
    const bool name = t.text == kContactPlaceholder || (t.tag == Tag::NNP && lexicon.names.contains(t.text));
    if (!name) continue;
    if (std::find(candidates.begin(), candidates.end(), t.text) == candidates.end())
      candidates.push_back(t.text);
    const bool subject_position =
        i == 0 || in(tagged[i - 1].text, kSubjectOpeners) || tagged[i - 1].tag == Tag::WRB;
    if (subject_position && !subject_candidate) subject_candidate = i;
  }
  if (candidates.size() >= 2) throw AmbiguousContactError(candidates[0], candidates[1]);
  if (candidates.size() == 1 && subject_candidate) {
    out.contact = tagged[*subject_candidate].text;
    out.recovered = true;
  }
  return out;
}

ReorderResult reorder_question_tokens(const ClauseAnalysis& analysis) {
  ReorderResult out;
  for (const auto& t : analysis.tokens) out.tokens.push_back(t.text);
  if (analysis.question_form != QuestionForm::DirectQuestion) return out;
  if (!analysis.aux_index || !analysis.subject_span)
    throw Error("reorder_question: direct question without auxiliary or subject");

  const std::size_t aux = *analysis.aux_index;
  const auto subj = *analysis.subject_span;
  if (aux >= subj.begin) throw Error("reorder_question: auxiliary does not precede the subject");

  std::size_t aux_end = aux + 1;
  if (aux_end < out.tokens.size() && out.tokens[aux_end] == "n't") ++aux_end;
  const bool negated = aux_end - aux == 2;
  const std::string aux_word = out.tokens[aux];

  std::vector<std::string> result(out.tokens.begin(), out.tokens.begin() + static_cast<std::ptrdiff_t>(aux));
  std::vector<std::string> aux_tokens(out.tokens.begin() + static_cast<std::ptrdiff_t>(aux),
                                      out.tokens.begin() + static_cast<std::ptrdiff_t>(aux_end));
  std::vector<std::string> subject(out.tokens.begin() + static_cast<std::ptrdiff_t>(aux_end),
                                   out.tokens.begin() + static_cast<std::ptrdiff_t>(subj.end));
  std::vector<std::string> rest(out.tokens.begin() + static_cast<std::ptrdiff_t>(subj.end), out.tokens.end());

  if (!negated && (aux_word == "do" || aux_word == "does")) {
    // present do-support: drop the auxiliary, carry its person onto the main verb
    if (aux_word == "does") {
      for (auto& w : rest) {
        if (in(w, kAdverbs)) continue;
        if (lexical_verb_candidate(w) || w == "have" || w == "do" || w == "be") w = to_third_singular(w);
        break;
      }
    }
    result.insert(result.end(), subject.begin(), subject.end());
    result.insert(result.end(), rest.begin(), rest.end());
    out.rules.emplace_back("do_deletion");
  } else {
    if (!negated && aux_word == "did") out.rules.emplace_back("past_do_fallback");
    result.insert(result.end(), subject.begin(), subject.end());
    result.insert(result.end(), aux_tokens.begin(), aux_tokens.end());
    result.insert(result.end(), rest.begin(), rest.end());
    out.rules.emplace_back("subject_aux_reversal");
  }
  out.tokens = std::move(result);
  return out;
}

std::string reorder_question(const ClauseAnalysis& analysis) {
  return join_clitics(reorder_question_tokens(analysis).tokens);
}

SwapResult swap_pronoun_tokens(const std::vector<TaggedToken>& tagged, Gender sender_gender,
                               std::optional<std::string_view> contact, const PronounTable& table) {
  SwapResult out;
  const std::string contact_lower = contact ? lower_name(*contact) : std::string();
  for (std::size_t i = 0; i < tagged.size(); ++i) {
    const std::string& w = tagged[i].text;
    auto emit = [&](std::string target, bool subject) {
      if (target != w) out.rules.push_back("pronoun:" + arrow(w, target));
      out.tokens.push_back(std::move(target));
      out.subject_mask.push_back(subject);
    };

    if (auto t = table.lookup(w, "sender", sender_gender)) {
      emit(*t, w == "i");
      continue;
    }
    if (w == "her" || w == "his") {
      const bool object = tagged[i].tag == Tag::PRP || i + 1 == tagged.size() ||
                          tagged[i + 1].tag == Tag::IN || tagged[i + 1].tag == Tag::TO ||
                          tagged[i + 1].text == ",";
      if (auto t = table.lookup(w, object ? "contact_object" : "contact_possessive", sender_gender)) {
        emit(*t, false);
        continue;
      }
    }
    if (auto t = table.lookup(w, "contact", sender_gender)) {
      emit(*t, is_nominative_pronoun(w));
      continue;
    }
    if (contact && !contact_lower.empty() && w == contact_lower) {
      const bool subject_position = i == 0 || in(tagged[i - 1].text, kSubjectOpeners) ||
                                    tagged[i - 1].tag == Tag::WRB;
      if (i + 1 < tagged.size() && tagged[i + 1].text == "'s" && possessive_s(tagged, i + 1)) {
        out.rules.push_back("contact:" + arrow(w + "'s", "your"));
        out.tokens.emplace_back("your");
        out.subject_mask.push_back(false);
        ++i;
        continue;
      }
      out.rules.push_back("contact:" + arrow(w, "you"));
      out.tokens.emplace_back("you");
      out.subject_mask.push_back(subject_position);
      continue;
    }
    out.tokens.push_back(w);
    out.subject_mask.push_back(false);
  }
  return out;
}

std::string swap_pronouns(std::string_view message, Gender sender_gender,
                          std::optional<std::string_view> contact, const PronounTable& table,
                          const SyntaxLexicon& lexicon) {
  auto tokens = split_clitics(message);
  if (tokens.empty()) return {};
  return join_clitics(swap_pronoun_tokens(tag(tokens, lexicon), sender_gender, contact, table).tokens);
}

AgreementResult fix_agreement_tokens(std::vector<std::string> toks, const std::vector<bool>& subject_mask,
                                     ContractionStyle style) {
  AgreementResult out;
  auto change = [&](std::size_t j, std::string to) {
    if (toks[j] == to) return;
    out.rules.push_back("agree:" + arrow(toks[j], to));
    toks[j] = std::move(to);
  };

  for (std::size_t i = 0; i < toks.size(); ++i) {
    if (i >= subject_mask.size() || !subject_mask[i]) continue;
    const std::string& subj = toks[i];
    const bool plural = subj == "you" || subj == "they" || subj == "we";
    const bool first = subj == "i";

    std::size_t j = i + 1;
    while (j < toks.size() && in(toks[j], kAdverbs) && toks[j] != "not") ++j;
    if (j >= toks.size()) continue;
    const std::string v = toks[j];

    if (first) {
      if (v == "is" || v == "are") change(j, "am");
      else if (v == "'s" && !clitic_s_is_has(toks, j)) change(j, "'m");
      else if (v == "'re") change(j, "'m");
    } else if (plural) {
      if (v == "is" || v == "am") change(j, "are");
      else if (v == "was") change(j, "were");
      else if (v == "has") change(j, "have");
      else if (v == "does") change(j, "do");
      else if (v == "'m") change(j, "'re");
      else if (v == "'s") change(j, clitic_s_is_has(toks, j) ? "'ve" : "'re");
      else if (v.size() > 2 && v.ends_with('s') && !v.ends_with("ss") && lexical_verb_candidate(v))
        change(j, to_base_form(v));
    } else {
      if (v == "am" || v == "are") change(j, "is");
      else if (v == "were") change(j, "was");
      else if (v == "have") change(j, "has");
      else if (v == "do") change(j, "does");
      else if (v == "'m" || v == "'re" || v == "'ve") change(j, "'s");
      else if (lexical_verb_candidate(v) && !(v.ends_with('s') && !v.ends_with("ss")))
        change(j, to_third_singular(v));
    }

    if (style == ContractionStyle::Expand) {
      const std::string& c = toks[j];
      if (c == "'s") change(j, clitic_s_is_has(toks, j) ? "has" : "is");
      else if (c == "'re") change(j, "are");
      else if (c == "'ve") change(j, "have");
      else if (c == "'m") change(j, "am");
    }
  }

  // anything left of "am" has lost its first-person subject
  for (std::size_t j = 0; j < toks.size(); ++j) {
    if (toks[j] != "am" && toks[j] != "'m") continue;
    if (j > 0 && toks[j] == "am" && is_number(toks[j - 1])) {
      change(j, "a.m.");
      continue;
    }
    std::string subject;
    for (std::size_t k = j; k-- > 0;) {
      if (is_nominative_pronoun(toks[k])) {
        subject = toks[k];
        break;
      }
    }
    if (subject == "i") continue;
    const bool plural = subject == "you" || subject == "they" || subject == "we";
    if (toks[j] == "am") change(j, plural ? "are" : "is");
    else change(j, plural ? "'re" : "'s");
  }

  out.tokens = std::move(toks);
  return out;
}

std::string fix_agreement(std::string_view message, ContractionStyle style) {
  auto toks = split_clitics(message);
  std::vector<bool> mask(toks.size(), false);
  for (std::size_t i = 0; i < toks.size(); ++i) {
    mask[i] = is_nominative_pronoun(toks[i]) && toks[i] != "it";
  }
  return join_clitics(fix_agreement_tokens(std::move(toks), mask, style).tokens);
}

const PrependRule& select_prepend(const PrependInventory& inventory, MessageType type, QuestionForm form,
                                  bool message_has_if, Rng* rng) {
  std::vector<const PrependRule*> matching;
  for (const auto& r : inventory.rules()) {
    if (r.message_type != type) continue;
    if (type == MessageType::AskYN && r.requires_if == message_has_if) continue;
    matching.push_back(&r);
  }
  if (matching.empty())
    throw Error("no prepend rule for (" + std::string(to_string(type)) + ", " + std::string(to_string(form)) +
                (message_has_if ? ", message has if)" : ")"));
  if (!rng) return *matching.front();
  return *matching[static_cast<std::size_t>(rng->below(matching.size()))];
}

Converter::Converter(SyntaxLexicon lexicon, PronounTable pronouns, PrependInventory prepends)
    : lexicon_(std::move(lexicon)), pronouns_(std::move(pronouns)), prepends_(std::move(prepends)) {}

Converter Converter::load(const std::filesystem::path& data_dir) {
  return Converter(SyntaxLexicon::load(data_dir), PronounTable::load(data_dir / "pronouns.tsv"),
                   PrependInventory::load(data_dir / "prepends.tsv"));
}

ConversionResult Converter::convert(const ConversionRequest& request) const {
  ConversionResult result;
  auto& trace = result.trace;

  const std::string message = normalize(request.message);
  if (message.empty()) throw Error("convert: empty message");

  // 1. contact recovery
  auto recovery = recover_contact(message, request.contact, lexicon_);
  if (recovery.recovered) trace.push_back("recover_contact:" + *recovery.contact);
  const std::optional<std::string> contact = recovery.contact;

  // 2. word order
  auto tokens = split_clitics(message);
  auto analysis = analyze_clause(tag(tokens, lexicon_), lexicon_);
  const QuestionForm form = analysis.question_form;
  if ((request.message_type == MessageType::AskYN || request.message_type == MessageType::AskWH) &&
      form == QuestionForm::DirectQuestion) {
    auto reordered = reorder_question_tokens(analysis);
    tokens = std::move(reordered.tokens);
    trace.insert(trace.end(), reordered.rules.begin(), reordered.rules.end());
  }

  // 3. pronouns and contact name
  auto swapped = swap_pronoun_tokens(tag(tokens, lexicon_), request.sender_gender,
                                     contact ? std::optional<std::string_view>(*contact) : std::nullopt,
                                     pronouns_);
  trace.insert(trace.end(), swapped.rules.begin(), swapped.rules.end());

  // 4. agreement
  auto agreed = fix_agreement_tokens(std::move(swapped.tokens), swapped.subject_mask, request.contractions);
  trace.insert(trace.end(), agreed.rules.begin(), agreed.rules.end());
  tokens = std::move(agreed.tokens);

  // 5. prepend
  const bool has_if = !tokens.empty() && (tokens.front() == "if" || tokens.front() == "whether");
  const PrependRule* rule = nullptr;
  if (request.prepend_id) {
    rule = prepends_.find(*request.prepend_id);
    if (!rule) throw Error("unknown prepend rule id: " + *request.prepend_id);
  } else if (request.rng_seed) {
    Rng rng(*request.rng_seed);
    rule = &select_prepend(prepends_, request.message_type, form, has_if, &rng);
  } else {
    rule = &select_prepend(prepends_, request.message_type, form, has_if);
  }
  trace.push_back("prepend:" + rule->id);

  std::vector<std::string> out;
  if (request.greeting_enabled && contact) {
    out.emplace_back("hi");
    out.push_back(lower_name(*contact));
    out.emplace_back(",");
    trace.emplace_back("greeting");
  }
  auto template_tokens = split_whitespace(rule->template_text);
  for (auto& t : template_tokens) {
    if (t == kSourcePlaceholder) t = lower_name(request.source_contact);
  }
  if (!template_tokens.empty() && !tokens.empty() && template_tokens.back() == tokens.front())
    tokens.erase(tokens.begin());
  out.insert(out.end(), template_tokens.begin(), template_tokens.end());
  out.insert(out.end(), tokens.begin(), tokens.end());
  result.output = join_clitics(out);
  return result;
}

}  // namespace pov
