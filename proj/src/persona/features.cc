#include "persona/features.h"

#include <cmath>

#include "common/error.h"

namespace preply::persona {

namespace {

std::string_view short_name(text::Polarity p) {
  switch (p) {
    case text::Polarity::kPositive: return "pos";
    case text::Polarity::kNegative: return "neg";
    case text::Polarity::kNeutral: return "neu";
  }
  return "neu";
}

std::string_view short_name(text::LengthBucket b) {
  switch (b) {
    case text::LengthBucket::kShort: return "short";
    case text::LengthBucket::kMedium: return "med";
    case text::LengthBucket::kLong: return "long";
  }
  return "short";
}

}  // namespace

PersonaFeatures persona_features(std::span<const text::Tokens> responses,
                                 const text::SentimentLexicon& lex) {
  require(!responses.empty(), ErrorCode::kData, "persona_features: no responses");
  std::array<std::size_t, 3> polarity{};
  std::array<std::size_t, 3> degree{};
  double total_len = 0.0;
  for (const auto& r : responses) {
    total_len += static_cast<double>(r.size());
    const text::Sentiment s = text::sentiment(r, lex);
    ++polarity[static_cast<std::size_t>(s.polarity)];
    ++degree[static_cast<std::size_t>(s.degree)];
  }
  const auto n = static_cast<double>(responses.size());
  PersonaFeatures p;
  p.avg_response_length = total_len / n;
  for (std::size_t i = 0; i < 3; ++i) p.polarity_dist[i] = static_cast<double>(polarity[i]) / n;

  std::size_t best = 0;
  std::size_t best_count = 0;
  bool tie = false;
  for (std::size_t i = 0; i < 3; ++i) {
    if (degree[i] > best_count) {
      best = i;
      best_count = degree[i];
      tie = false;
    } else if (degree[i] == best_count) {
      tie = true;
    }
  }
  p.dominant_degree = tie ? text::Degree::kNeutral : static_cast<text::Degree>(best);
  return p;
}

text::LengthBucket length_bucket(const PersonaFeatures& p) {
  if (p.avg_response_length < kShortPersonaMax) return text::LengthBucket::kShort;
  if (p.avg_response_length < kMediumPersonaMax) return text::LengthBucket::kMedium;
  return text::LengthBucket::kLong;
}

text::Polarity dominant_polarity(const PersonaFeatures& p) {
  const auto& d = p.polarity_dist;
  if (d[0] > d[1] && d[0] > d[2]) return text::Polarity::kPositive;
  if (d[1] > d[0] && d[1] > d[2]) return text::Polarity::kNegative;
  return text::Polarity::kNeutral;
}

std::array<std::string, 3> persona_tokens(const PersonaFeatures& p) {
  return {"<len:" + std::string(short_name(length_bucket(p))) + ">",
          "<pol:" + std::string(short_name(dominant_polarity(p))) + ">",
          "<deg:" + std::string(text::to_string(p.dominant_degree)) + ">"};
}

std::array<std::string, 9> all_persona_tokens() {
  return {"<len:short>", "<len:med>",   "<len:long>",  "<pol:pos>",    "<pol:neg>",
          "<pol:neu>",   "<deg:strong>", "<deg:mild>", "<deg:neutral>"};
}

nlohmann::ordered_json to_json(const PersonaFeatures& p) {
  nlohmann::ordered_json doc;
  doc["avg_response_length"] = p.avg_response_length;
  doc["polarity_dist"] = {{"positive", p.polarity_dist[0]},
                          {"negative", p.polarity_dist[1]},
                          {"neutral", p.polarity_dist[2]}};
  doc["dominant_degree"] = text::to_string(p.dominant_degree);
  return doc;
}

PersonaFeatures features_from_json(const nlohmann::json& doc) {
  try {
    PersonaFeatures p;
    p.avg_response_length = doc.at("avg_response_length").get<double>();
    const auto& dist = doc.at("polarity_dist");
    p.polarity_dist = {dist.at("positive").get<double>(), dist.at("negative").get<double>(),
                       dist.at("neutral").get<double>()};
    p.dominant_degree = text::parse_degree(doc.at("dominant_degree").get<std::string>());
    require(p.avg_response_length >= 0.0, ErrorCode::kParse,
            "persona: negative avg_response_length");
    const double sum = p.polarity_dist[0] + p.polarity_dist[1] + p.polarity_dist[2];
    require(std::abs(sum - 1.0) <= 1e-9, ErrorCode::kParse,
            "persona: polarity_dist must sum to 1");
    return p;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kParse, std::string("persona features: ") + e.what());
  }
}

}  // namespace preply::persona
