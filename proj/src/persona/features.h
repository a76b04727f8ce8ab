#ifndef PREPLY_PERSONA_FEATURES_H_
#define PREPLY_PERSONA_FEATURES_H_

#include <array>
#include <span>
#include <string>

#include "json.hpp"
#include "text/textproc.h"

namespace preply::persona {

struct PersonaFeatures {
  double avg_response_length = 0.0;
  // Fractions of responses that are positive, negative, neutral.
  std::array<double, 3> polarity_dist{0.0, 0.0, 1.0};
  text::Degree dominant_degree = text::Degree::kNeutral;

  friend bool operator==(const PersonaFeatures&, const PersonaFeatures&) = default;
};

// Mean token count, per-response polarity fractions and modal degree (a tie
// for the mode resolves to Neutral). Throws on an empty list.
PersonaFeatures persona_features(std::span<const text::Tokens> responses,
                                 const text::SentimentLexicon& lex);

// Buckets used for the source-side persona tokens. Averages are per
// response, so they sit far below the 25/100 email-length buckets.
inline constexpr double kShortPersonaMax = 6.0;
inline constexpr double kMediumPersonaMax = 10.0;

text::LengthBucket length_bucket(const PersonaFeatures& p);
// Argmax of polarity_dist; ties resolve to Neutral.
text::Polarity dominant_polarity(const PersonaFeatures& p);

// "<len:short>", "<pol:neu>", "<deg:mild>" and so on.
std::array<std::string, 3> persona_tokens(const PersonaFeatures& p);
// All nine persona tokens in a fixed order.
std::array<std::string, 9> all_persona_tokens();

nlohmann::ordered_json to_json(const PersonaFeatures& p);
PersonaFeatures features_from_json(const nlohmann::json& doc);

}  // namespace preply::persona

#endif  // PREPLY_PERSONA_FEATURES_H_
