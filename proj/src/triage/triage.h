#ifndef PREPLY_TRIAGE_TRIAGE_H_
#define PREPLY_TRIAGE_TRIAGE_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "corpus/corpus.h"
#include "nn/rng.h"
#include "nn/serialize.h"
#include "text/textproc.h"

namespace preply::triage {

enum class Label { kNegative, kPositive };

inline constexpr std::size_t kMaxReplySentences = 2;
inline constexpr std::size_t kMaxReplyTokens = 25;
inline constexpr unsigned kHashBits = 20;

// Feature id string ("2:see_you", "len:short") -> count. Ordered so that
// iteration, and therefore training, is reproducible.
using TriageFeatures = std::map<std::string, double>;

// Positive iff a reply exists and its stripped text has at most two
// sentences and at most 25 tokens. Throws if reply->in_reply_to != email.id.
Label label_email(const corpus::Email& email, const corpus::Email* reply);

// 2/3/4-gram counts over the preprocessed body plus exactly one length
// bucket feature. Never emits unigrams.
TriageFeatures featurize(const corpus::Email& email, const text::Dictionary& dict);
TriageFeatures featurize_tokens(const text::Tokens& tokens);

std::uint32_t feature_index(std::string_view feature_id);

// Logistic regression over hashed features. There is no bias slot.
struct TriageModel {
  double lambda = 0.0;
  std::map<std::uint32_t, double> weights;  // sparse, only non-zero entries

  double score(const TriageFeatures& features) const;
  double l2_norm() const;
};

struct TriageOptions {
  double lambda = 0.1;
  double lr = 0.1;
  std::size_t epochs = 20;
};

using Example = std::pair<TriageFeatures, Label>;

// Fraction of positives must lie in [0.45, 0.55].
void check_balance(std::size_t positives, std::size_t total, std::string_view what);

// Deterministically drops examples of the majority class (seeded) until the
// positive fraction is exactly balanced to within one example.
std::vector<Example> balance(std::vector<Example> data, nn::Rng& rng);

// Shuffled SGD on the mean regularized log loss. The L2 part of each step is
// applied implicitly: w <- (w - lr (sigma - y) x) / (1 + lr lambda / N),
// which stays stable for arbitrarily large lambda.
TriageModel train_triage(const std::vector<Example>& data, const TriageOptions& opts,
                         nn::Rng& rng);

double predict_triage(const TriageModel& model, const TriageFeatures& features);
double predict_triage(const TriageModel& model, const corpus::Email& email,
                      const text::Dictionary& dict);

inline constexpr std::string_view kModelKind = "triage";

nn::ModelFile to_model_file(const TriageModel& model);
TriageModel from_model_file(const nn::ModelFile& file);
void save(const TriageModel& model, const std::filesystem::path& path);
TriageModel load(const std::filesystem::path& path);

}  // namespace preply::triage

#endif  // PREPLY_TRIAGE_TRIAGE_H_
