#include <gtest/gtest.h>

#include "pov/text.hpp"
#include "test_util.hpp"

using namespace pov;

TEST(Normalize, LowercasesAndStripsTerminalPunctuation) {
  EXPECT_EQ(normalize("Ask Haley can I borrow your juicer?"), "ask haley can i borrow your juicer");
}

TEST(Normalize, CollapsesWhitespaceAndCanonicalizesPlaceholders) {
  EXPECT_EQ(normalize("  Tell  @cn@   HI "), "tell @CN@ hi");
}

TEST(Normalize, EmptyStaysEmpty) { EXPECT_EQ(normalize(""), ""); }

TEST(Normalize, KeepsInternalApostrophes) {
  EXPECT_EQ(normalize("I'm  running late!!"), "i'm running late");
  EXPECT_EQ(normalize("Tell @Scn@ it's fine."), "tell @SCN@ it's fine");
}

TEST(Normalize, IdempotentOnRandomText) {
  const std::vector<std::string> pool = {"Tell", "@cn@", "I'm", "  ", "ready?", "DINNER", "!", "\t",
                                         "what's", "@SCN@", ".", "up", "can't", "hi,", "x?!"};
  Rng rng(99);
  for (int i = 0; i < 500; ++i) {
    std::string t = testkit::random_sentence(rng, pool, 0, 12);
    const std::string once = normalize(t);
    EXPECT_EQ(normalize(once), once) << "input: [" << t << "]";
  }
}

TEST(SubstitutePlaceholders, ReplacesBoth) {
  EXPECT_EQ(substitute_placeholders("hi @CN@, @SCN@ says hi", "bob", "john"), "hi bob, john says hi");
}

TEST(SubstitutePlaceholders, EveryOccurrence) {
  EXPECT_EQ(substitute_placeholders("@SCN@ @SCN@", "bob", "john"), "john john");
}

TEST(SubstitutePlaceholders, NoPlaceholderIsByteIdentical) {
  const std::vector<std::string> pool = {"a", "b@c", "@", "CN", "@cn", "x@SC", "  ", "é", "\t"};
  Rng rng(5);
  for (int i = 0; i < 300; ++i) {
    std::string t = testkit::random_sentence(rng, pool, 0, 8);
    EXPECT_EQ(substitute_placeholders(t, "bob", "john"), t);
  }
}

TEST(Clitics, SplitsAndRejoins) {
  EXPECT_EQ(split_clitics("i'm sure he's fine"), (std::vector<std::string>{"i", "'m", "sure", "he", "'s", "fine"}));
  EXPECT_EQ(split_clitics("i can't go"), (std::vector<std::string>{"i", "can", "n't", "go"}));
  EXPECT_EQ(split_clitics("we won't"), (std::vector<std::string>{"we", "will", "n't"}));
  EXPECT_EQ(split_clitics("let's go"), (std::vector<std::string>{"let's", "go"}));
  EXPECT_EQ(split_clitics("hi @CN@, hello"), (std::vector<std::string>{"hi", "@CN@", ",", "hello"}));
  EXPECT_EQ(join_clitics({"you", "'re", "not", "here"}), "you're not here");
  EXPECT_EQ(join_clitics({"hi", "bob", ",", "joe"}), "hi bob, joe");
}

TEST(Clitics, RoundTripOnRandomText) {
  const std::vector<std::string> pool = {"i'm", "he's", "they're", "we've", "you'll", "she'd", "don't",
                                         "let's", "dinner", "ready", "o'clock", "hi,", "bob"};
  Rng rng(11);
  for (int i = 0; i < 300; ++i) {
    std::string t = testkit::random_sentence(rng, pool, 1, 8);
    EXPECT_EQ(join_clitics(split_clitics(t)), t);
  }
}
