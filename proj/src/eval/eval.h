#ifndef PREPLY_EVAL_EVAL_H_
#define PREPLY_EVAL_EVAL_H_

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "corpus/corpus.h"
#include "extractor/extractor.h"
#include "persona/features.h"
#include "responder/seq2seq.h"
#include "text/textproc.h"

namespace preply::eval {

struct BleuScore {
  double score = 0.0;
  std::vector<double> precisions;  // n = 1..max_n
  double brevity_penalty = 1.0;
};

// Sentence BLEU: clipped n-gram precisions, add-one smoothed for n >= 2,
// geometric mean, brevity penalty against the closest reference length
// (ties to the shorter). Throws on an empty candidate, an empty reference
// set or an empty reference.
BleuScore bleu(const text::Tokens& candidate, std::span<const text::Tokens> references,
               std::size_t max_n = 4);

struct UserEvaluation {
  std::vector<double> scores;  // one per pair, rank-1 suggestion vs actual reply
  std::vector<text::Tokens> outputs;
  double mean = 0.0;
};

// Greedy rank-1 decode of each pair's request. Sources carry `persona` when
// given, else each pair's own persona. Throws on an empty pair list.
UserEvaluation evaluate_user(const responder::Seq2SeqModel& model,
                             std::span<const extractor::RequestResponsePair> pairs,
                             const persona::PersonaFeatures* persona = nullptr);

// Arithmetic mean per recipient type; types without results are absent.
std::map<std::string, double> recipient_breakdown(
    std::span<const std::pair<corpus::RecipientType, double>> results);

struct VarianceComparison {
  double var_personalized = 0.0;
  double var_generic = 0.0;
};

// Population variance across users of each user's mean decoded length.
// outer index = user; both systems decode the same request set. Throws with
// fewer than two users or mismatched user counts.
VarianceComparison cross_user_variance(std::span<const std::vector<text::Tokens>> personalized,
                                       std::span<const std::vector<text::Tokens>> generic);

double mean_length(std::span<const text::Tokens> outputs);
double population_variance(std::span<const double> values);

}  // namespace preply::eval

#endif  // PREPLY_EVAL_EVAL_H_
