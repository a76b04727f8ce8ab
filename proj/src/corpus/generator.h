#ifndef PREPLY_CORPUS_GENERATOR_H_
#define PREPLY_CORPUS_GENERATOR_H_

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "corpus/corpus.h"
#include "json.hpp"
#include "nn/rng.h"

namespace preply::corpus {

enum class Verbosity { kTerse, kVerbose };
enum class Emotionality { kEmotional, kNeutral, kReserved };

std::string_view to_string(Verbosity v);
std::string_view to_string(Emotionality e);

inline constexpr std::size_t kRegisterCount = 3;

// A synthetic mailbox owner. `template_weights` is the probability of
// answering in each register (emotional, neutral, reserved); the persona's
// own emotionality carries most of the mass.
struct SyntheticPersona {
  std::string name;
  Verbosity verbosity = Verbosity::kTerse;
  Emotionality emotionality = Emotionality::kNeutral;
  std::array<double, kRegisterCount> template_weights{};
};

SyntheticPersona make_persona(std::string name, Verbosity v, Emotionality e,
                              double dominant_weight = 0.8);

// The first `count` personas of a fixed roster alternating terse/verbose and
// cycling emotional/neutral/reserved. count must be in [2, 12].
std::vector<SyntheticPersona> default_personas(std::size_t count);

nlohmann::ordered_json personas_to_json(const std::vector<SyntheticPersona>& personas);
std::vector<SyntheticPersona> personas_from_json(const nlohmann::json& doc);

// For each persona: threads_per_user incoming emails, half answerable
// (short persona-styled reply), a quarter informational (no reply), a
// quarter open-ended (long reply). Emails from all personas are interleaved
// in a deterministic order.
std::vector<Email> generate_corpus(const std::vector<SyntheticPersona>& personas,
                                   std::size_t threads_per_user, nn::Rng& rng);

// Number of emails generate_corpus produces: two per thread, minus the
// informational threads that never get a reply.
std::size_t expected_email_count(std::size_t personas, std::size_t threads_per_user);

struct LabeledSentence {
  std::string text;
  int label = 0;  // 1 = request/question
};

// Balanced (n/2 each, n rounded down to even) request/question vs other
// sentences drawn from the same grammar as the corpus.
std::vector<LabeledSentence> generate_labeled_sentences(std::size_t n, nn::Rng& rng);

std::string labeled_sentences_to_jsonl(const std::vector<LabeledSentence>& sentences);
std::vector<LabeledSentence> parse_labeled_sentences(std::string_view jsonl);

// Reference "now" for the bundled calendar fixture (a Wednesday).
inline constexpr std::string_view kFixtureNow = "2024-01-03T10:00";

// Calendar fixture: the Friday after kFixtureNow is fully booked, other
// days carry short meetings only.
nlohmann::ordered_json calendar_fixture();

}  // namespace preply::corpus

#endif  // PREPLY_CORPUS_GENERATOR_H_
