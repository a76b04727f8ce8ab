#include <string>
#include <vector>

#include "common/error.h"
#include "doctest.h"
#include "nn/rng.h"
#include "text/resources.h"
#include "text/textproc.h"

using namespace preply;
using namespace preply::text;

TEST_CASE("tokenize keeps internal apostrophes and drops punctuation") {
  CHECK(tokenize("").empty());
  CHECK(tokenize("I am free; Let's go") == Tokens{"i", "am", "free", "let's", "go"});
  CHECK(tokenize("Nice!") == Tokens{"nice"});
  CHECK(tokenize("'quoted' words") == Tokens{"quoted", "words"});
  CHECK(tokenize("can't-stop, won't") == Tokens{"can't", "stop", "won't"});
}

TEST_CASE("tokenize is idempotent on random printable strings") {
  nn::Rng rng(7);
  const std::string alphabet = "abcXYZ019 '.,;!?-\t\n";
  for (int trial = 0; trial < 500; ++trial) {
    std::string s;
    const auto len = rng.below(40);
    for (std::uint64_t i = 0; i < len; ++i) s += alphabet[rng.below(alphabet.size())];
    const Tokens once = tokenize(s);
    CHECK(tokenize(join(once)) == once);
    for (const auto& t : once) {
      CHECK(!t.empty());
      CHECK(tokenize(t) == Tokens{t});
    }
  }
}

TEST_CASE("split_sentences") {
  CHECK(split_sentences("Sorry; I can't make it") ==
        std::vector<std::string>{"Sorry", "I can't make it"});
  CHECK(split_sentences("Ok") == std::vector<std::string>{"Ok"});
  CHECK(split_sentences("").empty());
  CHECK(split_sentences("Sounds good. See you then.") ==
        std::vector<std::string>{"Sounds good", "See you then"});
  // A delimiter not followed by whitespace does not split.
  CHECK(split_sentences("v1.2 is out") == std::vector<std::string>{"v1.2 is out"});
}

TEST_CASE("strip_boilerplate") {
  CHECK(strip_boilerplate("Hi John,\nSee you Friday.\nRegards,\nAlice") == "See you Friday.");
  CHECK(strip_boilerplate("See you Friday.") == "See you Friday.");
  CHECK(strip_boilerplate("Thanks,\nBob") == "");
  CHECK(strip_boilerplate("Dear team:\nShip it.\nBest\nQ") == "Ship it.");
  // "Thanks for the help" is content, not a closing line.
  CHECK(strip_boilerplate("Thanks for the help.") == "Thanks for the help.");
  for (const char* body : {"Hi John,\nSee you Friday.\nRegards,\nAlice", "Hello\n\nok\ncheers",
                           "plain text"}) {
    const std::string once = strip_boilerplate(body);
    CHECK(strip_boilerplate(once) == once);
  }
}

TEST_CASE("filter_dictionary") {
  const Dictionary dict{"see", "you"};
  CHECK(filter_dictionary({"see", "you", "xyzq"}, dict) == Tokens{"see", "you"});
  CHECK(filter_dictionary({}, dict).empty());
  CHECK(filter_dictionary({"you", "see"}, dict) == Tokens{"you", "see"});
  CHECK_THROWS_AS(filter_dictionary({"a"}, Dictionary{}), Error);
}

TEST_CASE("ngrams") {
  CHECK(ngrams({"a", "b", "c"}, 2) == std::vector<Tokens>{{"a", "b"}, {"b", "c"}});
  CHECK(ngrams({"a"}, 3).empty());
  CHECK(ngrams({"i", "am", "free"}, 3) == std::vector<Tokens>{{"i", "am", "free"}});
  CHECK_THROWS_AS(ngrams({"a"}, 0), Error);
  nn::Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    Tokens t(rng.below(9), "w");
    for (std::size_t n = 1; n <= 5; ++n) {
      CHECK(ngrams(t, n).size() == (t.size() >= n ? t.size() - n + 1 : 0));
    }
  }
}

TEST_CASE("length_bucket thresholds and monotonicity") {
  CHECK(length_bucket(Tokens{}) == LengthBucket::kShort);
  CHECK(length_bucket(Tokens(25, "w")) == LengthBucket::kShort);
  CHECK(length_bucket(Tokens(26, "w")) == LengthBucket::kMedium);
  CHECK(length_bucket(Tokens(100, "w")) == LengthBucket::kMedium);
  CHECK(length_bucket(Tokens(101, "w")) == LengthBucket::kLong);
  for (std::size_t n = 0; n < 150; ++n) {
    CHECK(static_cast<int>(length_bucket(Tokens(n, "w"))) <=
          static_cast<int>(length_bucket(Tokens(n + 1, "w"))));
  }
}

TEST_CASE("sentiment rules over the bundled lexicon") {
  const SentimentLexicon& lex = default_lexicon();
  CHECK(sentiment(tokenize("i am terribly sorry"), lex) ==
        Sentiment{Polarity::kNegative, Degree::kStrong});
  CHECK(sentiment(tokenize("ok let's go"), lex) == Sentiment{Polarity::kNeutral, Degree::kNeutral});
  CHECK(sentiment(tokenize("great to hear"), lex) ==
        Sentiment{Polarity::kPositive, Degree::kMild});
  // Two polarity words, no intensifier: strong.
  CHECK(sentiment(tokenize("good news great"), lex).degree == Degree::kStrong);
  // One positive, one negative: tied polarity.
  CHECK(sentiment(tokenize("good but sorry"), lex).polarity == Polarity::kNeutral);
}

TEST_CASE("sentiment with a hand-built lexicon") {
  SentimentLexicon lex;
  lex.polarity["up"] = Polarity::kPositive;
  lex.polarity["down"] = Polarity::kNegative;
  lex.intensifiers.insert("very");
  CHECK(sentiment({"very", "up"}, lex) == Sentiment{Polarity::kPositive, Degree::kStrong});
  CHECK(sentiment({"up", "very"}, lex) == Sentiment{Polarity::kPositive, Degree::kStrong});
  CHECK(sentiment({"very", "x", "up"}, lex) == Sentiment{Polarity::kPositive, Degree::kMild});
  CHECK(sentiment({"down", "down", "up"}, lex).polarity == Polarity::kNegative);
  CHECK(sentiment({"very"}, lex) == Sentiment{Polarity::kNeutral, Degree::kNeutral});
}

TEST_CASE("bundled resources") {
  const Dictionary& dict = default_dictionary();
  CHECK(dict.size() > 9000);
  for (const char* w : {"see", "you", "friday", "meeting", "can't", "let's"}) CHECK(dict.contains(w));
  const SentimentLexicon& lex = default_lexicon();
  for (const auto& w : lex.intensifiers) CHECK(!lex.polarity.contains(w));
  CHECK_THROWS_AS(parse_lexicon(R"({"positive":["a"],"negative":["a"],"intensifiers":[]})"), Error);
  CHECK(parse_dictionary("# header\nfoo\n\nbar\n") == Dictionary{"foo", "bar"});
}

TEST_CASE("preprocess chains strip, tokenize and filter") {
  const Dictionary dict{"see", "you", "friday"};
  CHECK(preprocess("Hi Ann,\nSee you Friday qx7z2.\nThanks,\nBo", dict) ==
        Tokens{"see", "you", "friday"});
}
