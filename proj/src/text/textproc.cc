#include "text/textproc.h"

#include <array>
#include <cctype>

#include "common/error.h"

namespace preply::text {

namespace {

bool is_word_char(char ch) {
  const auto u = static_cast<unsigned char>(ch);
  return u < 0x80 && std::isalnum(u) != 0;
}

bool is_space(char ch) {
  return ch == ' ' || ch == '\t' || ch == '\n' || ch == '\r' || ch == '\f' || ch == '\v';
}

bool is_sentence_delim(char ch) { return ch == '.' || ch == '!' || ch == '?' || ch == ';'; }

std::string_view trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return s.substr(b, e - b);
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& ch : out) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return out;
}

std::vector<std::string_view> split_lines(std::string_view body) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= body.size(); ++i) {
    if (i == body.size() || body[i] == '\n') {
      std::string_view line = body.substr(start, i - start);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      lines.push_back(line);
      start = i + 1;
    }
  }
  return lines;
}

constexpr std::array<std::string_view, 4> kGreetings = {"hi", "hello", "hey", "dear"};
constexpr std::array<std::string_view, 7> kClosings = {
    "regards", "best regards", "thanks", "thank you", "cheers", "sincerely", "best"};
constexpr std::size_t kMaxGreetingNameWords = 3;

// "<greeting> [name words] [punctuation]", nothing else on the line.
bool is_greeting_line(std::string_view line) {
  const std::string text = lower(trim(line));
  for (std::string_view g : kGreetings) {
    if (text.size() < g.size() || text.compare(0, g.size(), g) != 0) continue;
    std::string_view rest(text);
    rest.remove_prefix(g.size());
    if (!rest.empty() && is_word_char(rest.front())) continue;  // "high", "help"
    while (!rest.empty() && (rest.back() == ',' || rest.back() == '!' ||
                             rest.back() == ':' || rest.back() == '.')) {
      rest.remove_suffix(1);
    }
    std::size_t words = 0;
    bool in_word = false;
    bool ok = true;
    for (char ch : rest) {
      if (is_word_char(ch) || ch == '.' || ch == '-' || ch == '\'') {
        if (!in_word) ++words;
        in_word = true;
      } else if (is_space(ch)) {
        in_word = false;
      } else {
        ok = false;
        break;
      }
    }
    if (ok && words <= kMaxGreetingNameWords) return true;
  }
  return false;
}

bool is_closing_line(std::string_view line) {
  std::string_view t = trim(line);
  if (!t.empty() && t.back() == ',') t.remove_suffix(1);
  const std::string text = lower(trim(t));
  for (std::string_view c : kClosings) {
    if (text == c) return true;
  }
  return false;
}

}  // namespace

Tokens tokenize(std::string_view text) {
  Tokens tokens;
  std::string current;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (is_word_char(ch)) {
      current.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
    } else if (ch == '\'' && !current.empty() && i + 1 < text.size() &&
               is_word_char(text[i + 1])) {
      current.push_back('\'');
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::vector<std::string> split_sentences(std::string_view text) {
  std::vector<std::string> sentences;
  std::size_t start = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!is_sentence_delim(text[i])) {
      ++i;
      continue;
    }
    std::size_t run_end = i;
    while (run_end < text.size() && is_sentence_delim(text[run_end])) ++run_end;
    if (run_end == text.size() || is_space(text[run_end])) {
      std::string_view piece = trim(text.substr(start, i - start));
      if (!piece.empty()) sentences.emplace_back(piece);
      start = run_end;
    }
    i = run_end;
  }
  std::string_view tail = trim(text.substr(std::min(start, text.size())));
  if (!tail.empty()) sentences.emplace_back(tail);
  return sentences;
}

std::string strip_boilerplate(std::string_view body) {
  std::vector<std::string_view> lines = split_lines(body);
  std::size_t first = 0;
  for (;;) {
    while (first < lines.size() && trim(lines[first]).empty()) ++first;
    if (first < lines.size() && is_greeting_line(lines[first])) {
      ++first;
    } else {
      break;
    }
  }
  std::size_t last = first;
  while (last < lines.size() && !is_closing_line(lines[last])) ++last;

  std::string out;
  for (std::size_t i = first; i < last; ++i) {
    if (!out.empty()) out.push_back('\n');
    out.append(lines[i]);
  }
  return std::string(trim(out));
}

Tokens filter_dictionary(const Tokens& tokens, const Dictionary& dict) {
  require(!dict.empty(), ErrorCode::kInvalidArgument,
          "filter_dictionary: dictionary is empty (missing wordlist?)");
  Tokens out;
  out.reserve(tokens.size());
  for (const Token& t : tokens) {
    if (dict.contains(t)) out.push_back(t);
  }
  return out;
}

std::vector<Tokens> ngrams(const Tokens& tokens, std::size_t n) {
  require(n >= 1, ErrorCode::kInvalidArgument, "ngrams: n must be >= 1");
  std::vector<Tokens> out;
  if (tokens.size() < n) return out;
  out.reserve(tokens.size() - n + 1);
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    out.emplace_back(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                     tokens.begin() + static_cast<std::ptrdiff_t>(i + n));
  }
  return out;
}

LengthBucket length_bucket(const Tokens& tokens) {
  if (tokens.size() <= kShortMaxTokens) return LengthBucket::kShort;
  if (tokens.size() <= kMediumMaxTokens) return LengthBucket::kMedium;
  return LengthBucket::kLong;
}

Sentiment sentiment(const Tokens& tokens, const SentimentLexicon& lex) {
  std::size_t positive = 0;
  std::size_t negative = 0;
  bool intensified = false;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    auto it = lex.polarity.find(tokens[i]);
    if (it == lex.polarity.end()) continue;
    (it->second == Polarity::kPositive ? positive : negative) += 1;
    if ((i > 0 && lex.intensifiers.contains(tokens[i - 1])) ||
        (i + 1 < tokens.size() && lex.intensifiers.contains(tokens[i + 1]))) {
      intensified = true;
    }
  }
  Sentiment s;
  if (positive > negative) s.polarity = Polarity::kPositive;
  if (negative > positive) s.polarity = Polarity::kNegative;
  const std::size_t hits = positive + negative;
  if (intensified || hits >= 2) {
    s.degree = Degree::kStrong;
  } else if (hits == 1) {
    s.degree = Degree::kMild;
  }
  return s;
}

Tokens preprocess(std::string_view body, const Dictionary& dict) {
  return filter_dictionary(tokenize(strip_boilerplate(body)), dict);
}

std::string join(const Tokens& tokens, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) out.append(sep);
    out.append(tokens[i]);
  }
  return out;
}

std::string_view to_string(LengthBucket b) {
  switch (b) {
    case LengthBucket::kShort: return "short";
    case LengthBucket::kMedium: return "medium";
    case LengthBucket::kLong: return "long";
  }
  return "short";
}

std::string_view to_string(Polarity p) {
  switch (p) {
    case Polarity::kPositive: return "positive";
    case Polarity::kNegative: return "negative";
    case Polarity::kNeutral: return "neutral";
  }
  return "neutral";
}

std::string_view to_string(Degree d) {
  switch (d) {
    case Degree::kStrong: return "strong";
    case Degree::kMild: return "mild";
    case Degree::kNeutral: return "neutral";
  }
  return "neutral";
}

Polarity parse_polarity(std::string_view s) {
  if (s == "positive") return Polarity::kPositive;
  if (s == "negative") return Polarity::kNegative;
  if (s == "neutral") return Polarity::kNeutral;
  fail(ErrorCode::kParse, "unknown polarity '" + std::string(s) + "'");
}

Degree parse_degree(std::string_view s) {
  if (s == "strong") return Degree::kStrong;
  if (s == "mild") return Degree::kMild;
  if (s == "neutral") return Degree::kNeutral;
  fail(ErrorCode::kParse, "unknown degree '" + std::string(s) + "'");
}

}  // namespace preply::text
