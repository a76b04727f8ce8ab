#include "text/resources.h"

#include <string>

#include "common/error.h"
#include "common/file_util.h"
#include "json.hpp"

namespace preply::text {

namespace detail {
extern const char* const kDictionaryText;
extern const char* const kLexiconText;
}  // namespace detail

Dictionary parse_dictionary(std::string_view text) {
  Dictionary dict;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.remove_suffix(1);
    if (!line.empty() && line.front() != '#') dict.emplace(line);
    start = end + 1;
  }
  return dict;
}

Dictionary load_dictionary(const std::filesystem::path& path) {
  Dictionary dict = parse_dictionary(read_file(path));
  require(!dict.empty(), ErrorCode::kData, "dictionary " + path.string() + " is empty");
  return dict;
}

SentimentLexicon parse_lexicon(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kParse, std::string("sentiment lexicon is not valid JSON: ") + e.what());
  }
  SentimentLexicon lex;
  auto add_polar = [&](const char* key, Polarity p) {
    for (const auto& w : doc.value(key, nlohmann::json::array())) {
      const auto word = w.get<std::string>();
      require(lex.polarity.emplace(word, p).second, ErrorCode::kData,
              "sentiment lexicon lists '" + word + "' more than once");
    }
  };
  try {
    add_polar("positive", Polarity::kPositive);
    add_polar("negative", Polarity::kNegative);
    for (const auto& w : doc.value("intensifiers", nlohmann::json::array())) {
      const auto word = w.get<std::string>();
      require(!lex.polarity.contains(word), ErrorCode::kData,
              "'" + word + "' is both a polarity word and an intensifier");
      lex.intensifiers.insert(word);
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kParse, std::string("malformed sentiment lexicon: ") + e.what());
  }
  return lex;
}

SentimentLexicon load_lexicon(const std::filesystem::path& path) {
  return parse_lexicon(read_file(path));
}

const Dictionary& default_dictionary() {
  static const Dictionary dict = parse_dictionary(detail::kDictionaryText);
  return dict;
}

const SentimentLexicon& default_lexicon() {
  static const SentimentLexicon lex = parse_lexicon(detail::kLexiconText);
  return lex;
}

}  // namespace preply::text
