#include <gtest/gtest.h>

#include "pov/syntax.hpp"
#include "pov/text.hpp"
#include "test_util.hpp"

using namespace pov;

namespace {

const SyntaxLexicon& lex() {
  static const SyntaxLexicon l = SyntaxLexicon::load(default_data_dir());
  return l;
}

std::vector<Tag> tags_of(const std::string& text) {
  std::vector<Tag> out;
  for (const auto& t : tag(split_clitics(text), lex())) out.push_back(t.tag);
  return out;
}

std::string span_text(const ClauseAnalysis& a) {
  std::vector<std::string> toks;
  for (std::size_t i = a.subject_span->begin; i < a.subject_span->end; ++i) toks.push_back(a.tokens[i].text);
  return join(toks);
}

}  // namespace

TEST(Tagger, ClosedClassExamples) {
  auto t = tags_of("are you coming for dinner");
  ASSERT_EQ(t.size(), 5u);
  EXPECT_EQ(t[0], Tag::VBP);
  EXPECT_EQ(t[1], Tag::PRP);
  EXPECT_EQ(t[3], Tag::IN);

  auto h = tags_of("he is coming");
  EXPECT_EQ(h[0], Tag::PRP);
  EXPECT_EQ(h[1], Tag::VBZ);

  EXPECT_EQ(tags_of("bob")[0], Tag::NNP);
  EXPECT_EQ(tags_of("@CN@")[0], Tag::NNP);
  EXPECT_EQ(tags_of("when")[0], Tag::WRB);
  EXPECT_EQ(tags_of("can")[0], Tag::MD);
  EXPECT_EQ(tags_of("my")[0], Tag::PRPS);
  EXPECT_EQ(tags_of("to")[0], Tag::TO);
  EXPECT_EQ(tags_of("the")[0], Tag::DT);
  EXPECT_EQ(to_string(Tag::PRPS), "PRP$");
}

TEST(Tagger, OneTagPerToken) {
  const std::vector<std::string> pool = {"i", "you", "he's", "bob", "wants", "to", "the", "what", "dinner",
                                         "can", "did", "ready", "my", "if", "quickly", "@CN@"};
  Rng rng(4);
  for (int i = 0; i < 300; ++i) {
    auto toks = split_clitics(testkit::random_sentence(rng, pool, 1, 10));
    auto tagged = tag(toks, lex());
    ASSERT_EQ(tagged.size(), toks.size());
    for (std::size_t k = 0; k < toks.size(); ++k) EXPECT_EQ(tagged[k].text, toks[k]);
  }
}

TEST(AnalyzeClause, DirectWhQuestion) {
  auto a = analyze_message("when are you coming for dinner", lex());
  EXPECT_EQ(a.question_form, QuestionForm::DirectQuestion);
  ASSERT_TRUE(a.wh_index && a.aux_index && a.subject_span);
  EXPECT_EQ(a.tokens[*a.wh_index].text, "when");
  EXPECT_EQ(a.tokens[*a.aux_index].text, "are");
  EXPECT_EQ(span_text(a), "you");
  EXPECT_LT(*a.aux_index, a.subject_span->begin);
}

TEST(AnalyzeClause, IndirectWhQuestion) {
  auto a = analyze_message("when he is coming for dinner", lex());
  EXPECT_EQ(a.question_form, QuestionForm::IndirectQuestion);
  ASSERT_TRUE(a.aux_index && a.subject_span);
  EXPECT_EQ(span_text(a), "he");
  EXPECT_EQ(a.tokens[*a.aux_index].text, "is");
  EXPECT_LT(a.subject_span->begin, *a.aux_index);
}

TEST(AnalyzeClause, Declarative) {
  auto a = analyze_message("dinner is ready", lex());
  EXPECT_EQ(a.question_form, QuestionForm::Declarative);
}

TEST(IsDirectQuestion, Examples) {
  EXPECT_TRUE(is_direct_question(analyze_message("can i borrow your juicer", lex())));
  EXPECT_FALSE(is_direct_question(analyze_message("if he's still having a party tomorrow", lex())));
  EXPECT_FALSE(is_direct_question(analyze_message("dinner is ready", lex())));
  EXPECT_TRUE(is_direct_question(analyze_message("do you want pizza", lex())));
  EXPECT_TRUE(is_direct_question(analyze_message("what type of wine do you want", lex())));
}

// Subject-first clauses built from a generator: subject, optional aux, verb,
// object.
TEST(AnalyzeClause, SubjectFirstNeverDirect) {
  const std::vector<std::string> subjects = {"i", "you", "he", "she", "they", "bob", "we", "mom"};
  const std::vector<std::string> aux = {"", "is", "are", "can", "will", "did", "has", "'s", "'m", "would"};
  const std::vector<std::string> verbs = {"coming", "going", "want", "bring", "been", "call"};
  const std::vector<std::string> tails = {"", "home", "the car", "for dinner", "to the party", "tonight"};
  const std::vector<std::string> openers = {"", "if ", "whether ", "what ", "when "};
  Rng rng(31);
  for (int i = 0; i < 500; ++i) {
    auto pick = [&](const std::vector<std::string>& v) { return v[static_cast<std::size_t>(rng.below(v.size()))]; };
    std::string a = pick(aux);
    std::string text = pick(openers) + pick(subjects);
    if (!a.empty()) text += (a.front() == '\'' ? "" : " ") + a;
    text += " " + pick(verbs);
    const std::string t = pick(tails);
    if (!t.empty()) text += " " + t;
    auto an = analyze_message(text, lex());
    EXPECT_NE(an.question_form, QuestionForm::DirectQuestion) << text;
    if (an.question_form == QuestionForm::IndirectQuestion && an.aux_index && an.subject_span)
      EXPECT_LT(an.subject_span->begin, *an.aux_index) << text;
  }
}

TEST(AnalyzeClause, DirectQuestionOrderingProperty) {
  const std::vector<std::string> aux = {"are", "is", "can", "will", "do", "does", "did", "should", "have"};
  const std::vector<std::string> subjects = {"you", "he", "she", "they", "bob", "i"};
  const std::vector<std::string> wh = {"", "what ", "where ", "when ", "why "};
  Rng rng(32);
  for (int i = 0; i < 300; ++i) {
    auto pick = [&](const std::vector<std::string>& v) { return v[static_cast<std::size_t>(rng.below(v.size()))]; };
    std::string text = pick(wh) + pick(aux) + " " + pick(subjects) + " go home";
    auto an = analyze_message(text, lex());
    ASSERT_EQ(an.question_form, QuestionForm::DirectQuestion) << text;
    ASSERT_TRUE(an.aux_index && an.subject_span) << text;
    EXPECT_LT(*an.aux_index, an.subject_span->begin) << text;
  }
}

TEST(StripCarrier, TellContact) {
  auto s = strip_carrier("tell @CN@ i'm running late", lex());
  EXPECT_EQ(s.verb_phrase, "tell");
  EXPECT_EQ(s.contact, "@CN@");
  EXPECT_EQ(s.message, "i'm running late");
}

TEST(StripCarrier, LetKnow) {
  auto s = strip_carrier("can you let mom know that i finally mailed her package", lex());
  EXPECT_EQ(s.verb_phrase, "let…know");
  EXPECT_EQ(s.contact, "mom");
  EXPECT_EQ(s.complementizer, "that");
  EXPECT_EQ(s.message, "i finally mailed her package");
}

TEST(StripCarrier, FindOutWithoutContact) {
  auto s = strip_carrier("find out if nate is bringing anything to the party", lex());
  EXPECT_EQ(s.verb_phrase, "find out");
  EXPECT_FALSE(s.contact);
  EXPECT_EQ(s.message, "nate is bringing anything to the party");
}

TEST(StripCarrier, NoCarrierReturnsInput) {
  const std::vector<std::string> samples = {"dinner is ready", "i'm running late", "are you coming",
                                            "the tell tale", "bob is here"};
  for (const auto& m : samples) {
    auto s = strip_carrier(m, lex());
    EXPECT_FALSE(s.matched()) << m;
    EXPECT_EQ(s.message, m);
    EXPECT_FALSE(s.contact);
  }
}

TEST(CarrierPattern, ParsesOptionalsAndAlternatives) {
  auto p = CarrierPattern::parse("[please] can|could you tell X");
  ASSERT_EQ(p.elements.size(), 5u);
  EXPECT_TRUE(p.elements[0].optional);
  EXPECT_EQ(p.elements[1].alternatives, (std::vector<std::string>{"can", "could"}));
  EXPECT_TRUE(p.elements[4].is_slot());
}
