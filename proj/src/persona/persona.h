#ifndef PREPLY_PERSONA_PERSONA_H_
#define PREPLY_PERSONA_PERSONA_H_

#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "extractor/extractor.h"
#include "nn/rng.h"
#include "persona/features.h"
#include "responder/seq2seq.h"
#include "text/textproc.h"

namespace preply::persona {

// Counts of the 1/2/3-grams (joined by single spaces) over a user's
// responses.
struct UserProfile {
  std::string user_id;
  std::map<std::string, double> ngram_counts;
  double total = 0.0;
};

UserProfile build_profile(std::string user_id, std::span<const text::Tokens> responses);

struct UserMatch {
  std::string user_id;
  double similarity = 0.0;
};

// Cosine similarity of n-gram count vectors, clamped to [0, 1]; a zero
// profile has similarity 0 with everything.
double profile_similarity(const UserProfile& a, const UserProfile& b);

// Most similar training profile; ties go to the lexicographically smaller
// user_id. Throws on an empty training set.
UserMatch nearest_user(const UserProfile& profile, std::span<const UserProfile> training);

// Below this many responses a user's own persona features are replaced by
// those of the nearest training user.
inline constexpr std::size_t kMinOwnResponses = 5;

// Request-to-request similarity in [0, 1].
using RequestSimilarity = std::function<double(const text::Tokens&, const text::Tokens&)>;

// Cosine of mean embedding vectors taken from a trained model, clamped to
// [0, 1]. Tokens missing from the vocab are skipped; a request with no known
// tokens has similarity 0.
class EmbeddingSimilarity {
 public:
  explicit EmbeddingSimilarity(const responder::Seq2SeqModel& model);
  double operator()(const text::Tokens& a, const text::Tokens& b) const;
  std::vector<double> mean_vector(const text::Tokens& tokens) const;

 private:
  const responder::Seq2SeqModel* model_;
};

double cosine(std::span<const double> a, std::span<const double> b);

// user_pairs followed by one extra pair for every global request whose best
// similarity to a user request reaches `threshold`; the extra pair reuses
// the response of that most similar user request (first one on ties).
std::vector<extractor::RequestResponsePair> boost_dataset(
    std::span<const extractor::RequestResponsePair> user_pairs,
    std::span<const text::Tokens> global_requests, const RequestSimilarity& similarity,
    double threshold);

// Fine-tunes a copy of `global_model` on `boosted_pairs` (or `user_pairs`
// when no boosted set is given), with every source carrying `persona`'s
// tokens. Zero epochs returns the global model unchanged.
responder::Seq2SeqModel personalize(const responder::Seq2SeqModel& global_model,
                                    std::span<const extractor::RequestResponsePair> user_pairs,
                                    std::span<const extractor::RequestResponsePair> boosted_pairs,
                                    const PersonaFeatures& persona,
                                    const responder::Seq2SeqOptions& opts, nn::Rng& rng);

nlohmann::ordered_json profile_to_json(const UserProfile& profile, const PersonaFeatures& persona);
std::pair<UserProfile, PersonaFeatures> profile_from_json(const nlohmann::json& doc);
void save_profile(const UserProfile& profile, const PersonaFeatures& persona,
                  const std::filesystem::path& path);
std::pair<UserProfile, PersonaFeatures> load_profile(const std::filesystem::path& path);

}  // namespace preply::persona

#endif  // PREPLY_PERSONA_PERSONA_H_
