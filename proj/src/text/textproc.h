#ifndef PREPLY_TEXT_TEXTPROC_H_
#define PREPLY_TEXT_TEXTPROC_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace preply::text {

// A lowercase run of [a-z0-9] with optional word-internal apostrophes.
using Token = std::string;
using Tokens = std::vector<Token>;
using Dictionary = std::unordered_set<std::string>;

enum class LengthBucket { kShort, kMedium, kLong };
enum class Polarity { kPositive, kNegative, kNeutral };
enum class Degree { kStrong, kMild, kNeutral };

inline constexpr std::size_t kShortMaxTokens = 25;
inline constexpr std::size_t kMediumMaxTokens = 100;

struct SentimentLexicon {
  std::unordered_map<std::string, Polarity> polarity;  // never kNeutral
  std::unordered_set<std::string> intensifiers;
};

struct Sentiment {
  Polarity polarity = Polarity::kNeutral;
  Degree degree = Degree::kNeutral;

  friend bool operator==(const Sentiment&, const Sentiment&) = default;
};

Tokens tokenize(std::string_view text);

std::vector<std::string> split_sentences(std::string_view text);

// Drops leading greeting lines ("Hi John,") and everything from the first
// closing line ("Regards,", "Thanks", ...) to the end of the body.
std::string strip_boilerplate(std::string_view body);

// Order-preserving filter. Throws if `dict` is empty.
Tokens filter_dictionary(const Tokens& tokens, const Dictionary& dict);

// Contiguous windows of length n. Throws if n == 0.
std::vector<Tokens> ngrams(const Tokens& tokens, std::size_t n);

LengthBucket length_bucket(const Tokens& tokens);

Sentiment sentiment(const Tokens& tokens, const SentimentLexicon& lex);

// strip_boilerplate -> tokenize -> filter_dictionary.
Tokens preprocess(std::string_view body, const Dictionary& dict);

std::string join(const Tokens& tokens, std::string_view sep = " ");

std::string_view to_string(LengthBucket b);
std::string_view to_string(Polarity p);
std::string_view to_string(Degree d);
Polarity parse_polarity(std::string_view s);
Degree parse_degree(std::string_view s);

}  // namespace preply::text

#endif  // PREPLY_TEXT_TEXTPROC_H_
