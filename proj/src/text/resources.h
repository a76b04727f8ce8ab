#ifndef PREPLY_TEXT_RESOURCES_H_
#define PREPLY_TEXT_RESOURCES_H_

#include <filesystem>
#include <string_view>

#include "text/textproc.h"

namespace preply::text {

// dictionary.txt: one lowercase word per line. Blank lines and lines
// starting with '#' are ignored.
Dictionary parse_dictionary(std::string_view text);
Dictionary load_dictionary(const std::filesystem::path& path);

// sentiment_lexicon.json: {"positive": [...], "negative": [...], "intensifiers": [...]}.
// A word may appear in at most one of the three lists.
SentimentLexicon parse_lexicon(std::string_view json_text);
SentimentLexicon load_lexicon(const std::filesystem::path& path);

// Copies bundled into the library at build time.
const Dictionary& default_dictionary();
const SentimentLexicon& default_lexicon();

}  // namespace preply::text

#endif  // PREPLY_TEXT_RESOURCES_H_
