#include "persona/persona.h"

#include <algorithm>
#include <cmath>

#include "common/error.h"
#include "common/file_util.h"

namespace preply::persona {

UserProfile build_profile(std::string user_id, std::span<const text::Tokens> responses) {
  require(!responses.empty(), ErrorCode::kData,
          "build_profile: no responses for user '" + user_id + "'");
  UserProfile p;
  p.user_id = std::move(user_id);
  for (const auto& r : responses) {
    for (std::size_t n = 1; n <= 3; ++n) {
      for (const auto& gram : text::ngrams(r, n)) {
        p.ngram_counts[text::join(gram, " ")] += 1.0;
        p.total += 1.0;
      }
    }
  }
  return p;
}

double profile_similarity(const UserProfile& a, const UserProfile& b) {
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (const auto& [g, c] : a.ngram_counts) {
    na += c * c;
    auto it = b.ngram_counts.find(g);
    if (it != b.ngram_counts.end()) dot += c * it->second;
  }
  for (const auto& [g, c] : b.ngram_counts) nb += c * c;
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), 0.0, 1.0);
}

UserMatch nearest_user(const UserProfile& profile, std::span<const UserProfile> training) {
  require(!training.empty(), ErrorCode::kData, "nearest_user: no training profiles");
  std::optional<UserMatch> best;
  for (const UserProfile& t : training) {
    const double s = profile_similarity(profile, t);
    if (!best || s > best->similarity ||
        (s == best->similarity && t.user_id < best->user_id)) {
      best = UserMatch{t.user_id, s};
    }
  }
  return *best;
}

double cosine(std::span<const double> a, std::span<const double> b) {
  require(a.size() == b.size(), ErrorCode::kShapeMismatch, "cosine: length mismatch");
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

EmbeddingSimilarity::EmbeddingSimilarity(const responder::Seq2SeqModel& model)
    : model_(&model) {}

std::vector<double> EmbeddingSimilarity::mean_vector(const text::Tokens& tokens) const {
  const nn::Matrix& table = model_->embedding.table.value;
  std::vector<double> mean(table.cols(), 0.0);
  std::size_t n = 0;
  for (const auto& t : tokens) {
    if (!model_->vocab.contains(t)) continue;
    const auto row = table.row(static_cast<std::size_t>(model_->vocab.id(t)));
    for (std::size_t d = 0; d < mean.size(); ++d) mean[d] += row[d];
    ++n;
  }
  if (n > 0) {
    for (double& v : mean) v /= static_cast<double>(n);
  }
  return mean;
}

double EmbeddingSimilarity::operator()(const text::Tokens& a, const text::Tokens& b) const {
  return std::clamp(cosine(mean_vector(a), mean_vector(b)), 0.0, 1.0);
}

std::vector<extractor::RequestResponsePair> boost_dataset(
    std::span<const extractor::RequestResponsePair> user_pairs,
    std::span<const text::Tokens> global_requests, const RequestSimilarity& similarity,
    double threshold) {
  require(threshold > 0.0 && threshold <= 1.0, ErrorCode::kInvalidArgument,
          "boost_dataset: threshold must be in (0, 1]");
  std::vector<extractor::RequestResponsePair> out(user_pairs.begin(), user_pairs.end());
  for (const text::Tokens& g : global_requests) {
    double best = -1.0;
    const extractor::RequestResponsePair* match = nullptr;
    for (const auto& p : user_pairs) {
      const double s = similarity(g, p.request);
      if (s > best) {
        best = s;
        match = &p;
      }
    }
    if (match != nullptr && best >= threshold) {
      extractor::RequestResponsePair extra = *match;
      extra.request = g;
      out.push_back(std::move(extra));
    }
  }
  return out;
}

responder::Seq2SeqModel personalize(const responder::Seq2SeqModel& global_model,
                                    std::span<const extractor::RequestResponsePair> user_pairs,
                                    std::span<const extractor::RequestResponsePair> boosted_pairs,
                                    const PersonaFeatures& persona,
                                    const responder::Seq2SeqOptions& opts, nn::Rng& rng) {
  const auto source = boosted_pairs.empty() ? user_pairs : boosted_pairs;
  require(!source.empty(), ErrorCode::kData, "personalize: no user pairs");
  responder::Seq2SeqModel model = global_model;
  if (opts.epochs == 0) return model;
  std::vector<extractor::RequestResponsePair> pairs(source.begin(), source.end());
  for (auto& p : pairs) p.persona = persona;
  responder::Seq2SeqOptions tuned = opts;
  tuned.generic_persona_rate = 0.0;
  responder::fit(model, pairs, tuned, rng);
  return model;
}

nlohmann::ordered_json profile_to_json(const UserProfile& profile, const PersonaFeatures& persona) {
  nlohmann::ordered_json doc;
  doc["user_id"] = profile.user_id;
  doc["total"] = profile.total;
  doc["ngrams"] = nlohmann::ordered_json::object();
  for (const auto& [g, c] : profile.ngram_counts) doc["ngrams"][g] = c;
  doc["persona"] = to_json(persona);
  return doc;
}

std::pair<UserProfile, PersonaFeatures> profile_from_json(const nlohmann::json& doc) {
  try {
    UserProfile p;
    p.user_id = doc.at("user_id").get<std::string>();
    for (const auto& [g, c] : doc.at("ngrams").items()) {
      const double count = c.get<double>();
      require(count >= 1.0, ErrorCode::kParse, "profile: n-gram counts must be >= 1");
      p.ngram_counts[g] = count;
      p.total += count;
    }
    return {std::move(p), features_from_json(doc.at("persona"))};
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kParse, std::string("profile: ") + e.what());
  }
}

void save_profile(const UserProfile& profile, const PersonaFeatures& persona,
                  const std::filesystem::path& path) {
  write_file(path, profile_to_json(profile, persona).dump(2) + "\n");
}

std::pair<UserProfile, PersonaFeatures> load_profile(const std::filesystem::path& path) {
  try {
    return profile_from_json(nlohmann::json::parse(read_file(path)));
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kParse, path.string() + ": " + e.what());
  }
}

}  // namespace preply::persona
