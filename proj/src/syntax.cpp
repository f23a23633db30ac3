#include "pov/syntax.hpp"

#include <algorithm>
#include <array>

#include "pov/error.hpp"
#include "pov/text.hpp"

namespace pov {

namespace {

template <std::size_t N>
bool in(std::string_view word, const std::array<std::string_view, N>& set) {
  return std::find(set.begin(), set.end(), word) != set.end();
}

constexpr auto kNominative = std::to_array<std::string_view>({"i", "you", "he", "she", "it", "we", "they"});
constexpr auto kObjectPronouns = std::to_array<std::string_view>({
    "me",       "him",     "her",      "us",         "them",     "myself",
    "yourself", "himself", "herself",  "itself",     "ourselves", "themselves",
    "themself", "mine",    "yours",    "hers",       "ours",     "theirs"});
constexpr auto kPossessive = std::to_array<std::string_view>({"my", "your", "his", "its", "our", "their"});
constexpr auto kModals = std::to_array<std::string_view>({"can",   "could", "will", "would", "shall", "should",
                                                       "may",   "might", "must", "'ll",   "'d"});
constexpr auto kVbzAux = std::to_array<std::string_view>({"is", "was", "'s", "has", "does", "am", "'m"});
constexpr auto kPrepositions = std::to_array<std::string_view>({
    "if",   "whether", "that",   "because", "since",  "though", "although", "while", "of",
    "in",   "on",      "at",     "for",     "with",   "about",  "from",     "by",    "into",
    "after", "before", "until",  "like",    "than",   "so",     "and"});
constexpr auto kDeterminers = std::to_array<std::string_view>({"the",  "a",    "an",      "this", "these",
                                                            "those", "some", "any",     "every", "each",
                                                            "no",   "another", "all"});

bool is_closed_class(std::string_view w, const SyntaxLexicon& lex) {
  return in(w, kNominative) || in(w, kObjectPronouns) || in(w, kPossessive) || in(w, kPrepositions) ||
         in(w, kDeterminers) || w == "to" || lex.auxiliaries.contains(std::string(w)) ||
         lex.wh_words.contains(std::string(w)) || w == "n't" || w == "not";
}

bool is_subject_start(const TaggedToken& t) {
  switch (t.tag) {
    case Tag::PRP: return is_nominative_pronoun(t.text);
    case Tag::NNP:
    case Tag::DT:
    case Tag::PRPS:
    case Tag::NN: return t.text != "n't";
    default: return false;
  }
}

// Pronoun or proper name only; used where a noun would be too permissive.
bool is_strong_subject(const TaggedToken& t) {
  return (t.tag == Tag::PRP && is_nominative_pronoun(t.text)) || t.tag == Tag::NNP;
}

TokenSpan subject_span_at(const std::vector<TaggedToken>& toks, std::size_t i) {
  const auto& t = toks[i];
  if ((t.tag == Tag::DT || t.tag == Tag::PRPS) && i + 1 < toks.size() &&
      (toks[i + 1].tag == Tag::NN || toks[i + 1].tag == Tag::NNP))
    return {i, i + 2};
  return {i, i + 1};
}

bool is_aux_token(const TaggedToken& t, const SyntaxLexicon& lex) {
  return lex.auxiliaries.contains(t.text) &&
         (t.tag == Tag::VBP || t.tag == Tag::VBZ || t.tag == Tag::MD);
}

std::optional<std::size_t> first_aux_after(const std::vector<TaggedToken>& toks, std::size_t from,
                                           const SyntaxLexicon& lex) {
  for (std::size_t i = from; i < toks.size(); ++i)
    if (is_aux_token(toks[i], lex)) return i;
  return std::nullopt;
}

bool slot_can_bind(std::string_view token, const SyntaxLexicon& lex) {
  if (token == kContactPlaceholder) return true;
  if (lex.names.contains(std::string(token))) return true;
  if (is_placeholder(token)) return false;
  return !is_closed_class(token, lex);
}

struct MatchState {
  std::size_t consumed = 0;
  std::optional<std::string> contact;
};

void match_from(const CarrierPattern& pattern, std::size_t elem, const std::vector<std::string>& toks,
                std::size_t pos, std::optional<std::string> contact, const SyntaxLexicon& lex,
                std::optional<MatchState>& best) {
  if (elem == pattern.elements.size()) {
    if (!best || pos > best->consumed) best = MatchState{pos, contact};
    return;
  }
  const auto& e = pattern.elements[elem];
  if (pos < toks.size()) {
    if (e.is_slot()) {
      if (slot_can_bind(toks[pos], lex)) match_from(pattern, elem + 1, toks, pos + 1, toks[pos], lex, best);
    } else if (std::find(e.alternatives.begin(), e.alternatives.end(), toks[pos]) != e.alternatives.end()) {
      match_from(pattern, elem + 1, toks, pos + 1, contact, lex, best);
    }
  }
  if (e.optional) match_from(pattern, elem + 1, toks, pos, contact, lex, best);
}

std::string verb_phrase_of(const CarrierPattern& pattern, const std::vector<std::string>& toks) {
  // literal, non-optional elements as matched; a slot between them becomes "…"
  std::string out;
  bool pending_slot = false;
  std::size_t pos = 0;
  (void)toks;
  for (const auto& e : pattern.elements) {
    if (e.optional) continue;
    if (e.is_slot()) {
      pending_slot = !out.empty();
      continue;
    }
    if (pending_slot) {
      out += "…";
      pending_slot = false;
    } else if (!out.empty()) {
      out += ' ';
    }
    out += e.alternatives.front();
    ++pos;
  }
  return out;
}

}  // namespace

bool is_nominative_pronoun(std::string_view word) { return in(word, kNominative); }
bool is_do_form(std::string_view word) { return word == "do" || word == "does" || word == "did"; }
bool is_modal(std::string_view word) { return in(word, kModals); }

std::string_view to_string(Tag tag) {
  switch (tag) {
    case Tag::NNP: return "NNP";
    case Tag::VB: return "VB";
    case Tag::VBP: return "VBP";
    case Tag::VBZ: return "VBZ";
    case Tag::WRB: return "WRB";
    case Tag::PRP: return "PRP";
    case Tag::MD: return "MD";
    case Tag::PRPS: return "PRP$";
    case Tag::NN: return "NN";
    case Tag::TO: return "TO";
    case Tag::IN: return "IN";
    case Tag::DT: return "DT";
  }
  return "NN";
}

std::string_view to_string(QuestionForm form) {
  switch (form) {
    case QuestionForm::DirectQuestion: return "DirectQuestion";
    case QuestionForm::IndirectQuestion: return "IndirectQuestion";
    case QuestionForm::Declarative: return "Declarative";
  }
  return "Declarative";
}

CarrierPattern CarrierPattern::parse(std::string_view line) {
  CarrierPattern p;
  p.source = trim(line);
  for (auto& raw : split_whitespace(line)) {
    CarrierElement e;
    std::string body = raw;
    if (body.size() >= 2 && body.front() == '[' && body.back() == ']') {
      e.optional = true;
      body = body.substr(1, body.size() - 2);
    }
    if (body.empty()) throw FormatError("bad carrier pattern element in: " + p.source);
    if (body != "X") {
      std::size_t start = 0;
      while (true) {
        auto bar = body.find('|', start);
        auto alt = body.substr(start, bar == std::string::npos ? std::string::npos : bar - start);
        if (alt.empty()) throw FormatError("empty alternative in carrier pattern: " + p.source);
        e.alternatives.push_back(to_lower_ascii(alt));
        if (bar == std::string::npos) break;
        start = bar + 1;
      }
    }
    p.elements.push_back(std::move(e));
  }
  if (p.elements.empty()) throw FormatError("empty carrier pattern");
  return p;
}

SyntaxLexicon SyntaxLexicon::load(const std::filesystem::path& data_dir) {
  SyntaxLexicon lex;
  lex.names = load_word_set(data_dir / "names.txt");
  lex.auxiliaries = load_word_set(data_dir / "auxiliaries.txt");
  lex.wh_words = load_word_set(data_dir / "wh_words.txt");
  for (const auto& line : read_list_file(data_dir / "carriers.txt"))
    lex.carriers.push_back(CarrierPattern::parse(line));
  return lex;
}

std::vector<TaggedToken> tag(const std::vector<std::string>& tokens, const SyntaxLexicon& lex) {
  if (tokens.empty()) throw Error("tag: empty token list");
  std::vector<TaggedToken> out;
  out.reserve(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const std::string& w = tokens[i];
    const std::string lw = is_placeholder(w) ? w : to_lower_ascii(w);
    Tag t = Tag::NN;
    bool resolved = true;
    if (is_placeholder(lw)) {
      t = Tag::NNP;
    } else if (in(lw, kNominative) || (in(lw, kObjectPronouns) && lw != "her")) {
      t = Tag::PRP;
    } else if (lw == "her") {
      // object when nothing noun-like follows
      bool object = i + 1 == tokens.size() || in(tokens[i + 1], kPrepositions) || tokens[i + 1] == "to" ||
                    in(tokens[i + 1], kDeterminers) || tokens[i + 1] == "," || lex.names.contains(tokens[i + 1]);
      t = object ? Tag::PRP : Tag::PRPS;
    } else if (in(lw, kPossessive)) {
      t = Tag::PRPS;
    } else if (lex.auxiliaries.contains(lw)) {
      if (is_modal(lw)) t = Tag::MD;
      else if (in(lw, kVbzAux)) t = Tag::VBZ;
      else t = Tag::VBP;
      // "will" at subject position of a name lexicon entry is not handled: modal wins
      if (lw == "am" || lw == "'m") t = Tag::VBP;
    } else if (lex.wh_words.contains(lw)) {
      t = Tag::WRB;
    } else if (lw == "to") {
      t = Tag::TO;
    } else if (in(lw, kPrepositions)) {
      t = Tag::IN;
    } else if (in(lw, kDeterminers)) {
      t = Tag::DT;
    } else if (lex.names.contains(lw)) {
      t = Tag::NNP;
    } else {
      resolved = false;
    }
    if (!resolved) {
      // open class: verb heuristics keyed on the preceding tag
      const TaggedToken* prev = out.empty() ? nullptr : &out.back();
      const bool after_subject = prev && ((prev->tag == Tag::PRP && is_nominative_pronoun(prev->text)) ||
                                          prev->tag == Tag::NNP);
      const bool alpha = std::all_of(lw.begin(), lw.end(), [](char c) { return c >= 'a' && c <= 'z'; });
      if (alpha && after_subject && !lw.ends_with("ed") && !lw.ends_with("ing")) {
        const bool third = prev->tag == Tag::NNP || prev->text == "he" || prev->text == "she" ||
                           prev->text == "it";
        if (lw.size() > 2 && lw.ends_with('s') && !lw.ends_with("ss") && third) t = Tag::VBZ;
        else if (!third) t = Tag::VBP;
        else t = Tag::VB;
      } else if (alpha && prev && (prev->tag == Tag::TO || prev->tag == Tag::MD)) {
        t = Tag::VB;
      } else if (alpha && !prev) {
        t = Tag::VB;
      } else {
        t = Tag::NN;
      }
    }
    out.push_back({w, t});
  }
  return out;
}

ClauseAnalysis analyze_clause(std::vector<TaggedToken> toks, const SyntaxLexicon& lex) {
  ClauseAnalysis a;
  a.tokens = std::move(toks);
  const auto& t = a.tokens;
  const std::size_t n = t.size();
  if (n == 0) return a;

  auto subject_after_aux = [&](std::size_t aux) -> std::optional<std::size_t> {
    std::size_t s = aux + 1;
    if (s < n && t[s].text == "n't") ++s;
    if (s >= n) return std::nullopt;
    // do/have inversion only with a pronoun or name ("do the dishes" is an imperative)
    const bool strict = is_do_form(t[aux].text) || t[aux].text == "have" || t[aux].text == "has" ||
                        t[aux].text == "had";
    if (strict ? is_strong_subject(t[s]) : is_subject_start(t[s])) return s;
    return std::nullopt;
  };

  // clause-initial auxiliary: inverted yes/no question
  if (is_aux_token(t[0], lex)) {
    if (auto s = subject_after_aux(0)) {
      a.question_form = QuestionForm::DirectQuestion;
      a.aux_index = 0;
      a.subject_span = subject_span_at(t, *s);
      return a;
    }
  }

  if (t[0].tag == Tag::WRB) {
    a.wh_index = 0;
    for (std::size_t i = 1; i < n; ++i) {
      if (is_strong_subject(t[i])) {
        // subject before any auxiliary: embedded order
        a.question_form = QuestionForm::IndirectQuestion;
        a.subject_span = subject_span_at(t, i);
        a.aux_index = first_aux_after(t, a.subject_span->end, lex);
        return a;
      }
      if (is_aux_token(t[i], lex)) {
        if (auto s = subject_after_aux(i)) {
          a.question_form = QuestionForm::DirectQuestion;
          a.aux_index = i;
          a.subject_span = subject_span_at(t, *s);
        } else {
          // the wh-phrase (or the noun after it) is the subject
          a.question_form = QuestionForm::IndirectQuestion;
          a.subject_span = i > 1 ? TokenSpan{1, i} : TokenSpan{0, 1};
          a.aux_index = i;
        }
        return a;
      }
      if (t[i].tag == Tag::VBZ || t[i].tag == Tag::VBP || t[i].tag == Tag::VB) break;
    }
    a.question_form = QuestionForm::IndirectQuestion;
    a.subject_span = TokenSpan{0, 1};
    return a;
  }

  if (t[0].text == "if" || t[0].text == "whether") {
    a.question_form = QuestionForm::IndirectQuestion;
    for (std::size_t i = 1; i < n; ++i) {
      if (is_subject_start(t[i])) {
        a.subject_span = subject_span_at(t, i);
        a.aux_index = first_aux_after(t, a.subject_span->end, lex);
        break;
      }
    }
    return a;
  }

  a.question_form = QuestionForm::Declarative;
  for (std::size_t i = 0; i < n; ++i) {
    if (is_strong_subject(t[i])) {
      a.subject_span = subject_span_at(t, i);
      a.aux_index = first_aux_after(t, a.subject_span->end, lex);
      break;
    }
  }
  return a;
}

ClauseAnalysis analyze_message(std::string_view message, const SyntaxLexicon& lexicon) {
  auto tokens = split_clitics(message);
  if (tokens.empty()) return {};
  return analyze_clause(tag(tokens, lexicon), lexicon);
}

CarrierSplit strip_carrier(std::string_view utterance, const SyntaxLexicon& lex) {
  const auto toks = split_whitespace(utterance);
  CarrierSplit result;

  std::optional<MatchState> best;
  std::size_t best_pattern = 0;
  for (std::size_t p = 0; p < lex.carriers.size(); ++p) {
    std::optional<MatchState> m;
    match_from(lex.carriers[p], 0, toks, 0, std::nullopt, lex, m);
    if (m && m->consumed > 0 && (!best || m->consumed > best->consumed)) {
      best = m;
      best_pattern = p;
    }
  }

  std::size_t pos = 0;
  if (best) {
    result.verb_phrase = verb_phrase_of(lex.carriers[best_pattern], toks);
    result.contact = best->contact;
    result.pattern_index = best_pattern;
    pos = best->consumed;
    if (pos < toks.size() && (toks[pos] == "that" || toks[pos] == "if" || toks[pos] == "whether" ||
                              toks[pos] == "to")) {
      result.complementizer = toks[pos];
      ++pos;
      if (*result.complementizer == "whether" && pos + 1 < toks.size() && toks[pos] == "or" &&
          toks[pos + 1] == "not")
        pos += 2;
    }
  }
  std::vector<std::string> rest(toks.begin() + static_cast<std::ptrdiff_t>(pos), toks.end());
  result.message = join(rest);
  return result;
}

}  // namespace pov
