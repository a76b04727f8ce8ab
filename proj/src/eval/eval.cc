#include "eval/eval.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "common/error.h"

namespace preply::eval {

namespace {

std::map<text::Tokens, std::size_t> count_ngrams(const text::Tokens& tokens, std::size_t n) {
  std::map<text::Tokens, std::size_t> counts;
  for (auto& g : text::ngrams(tokens, n)) ++counts[std::move(g)];
  return counts;
}

}  // namespace

BleuScore bleu(const text::Tokens& candidate, std::span<const text::Tokens> references,
               std::size_t max_n) {
  require(!candidate.empty(), ErrorCode::kInvalidArgument, "bleu: empty candidate");
  require(!references.empty(), ErrorCode::kInvalidArgument, "bleu: no references");
  require(max_n >= 1, ErrorCode::kInvalidArgument, "bleu: max_n must be >= 1");
  for (const auto& r : references) {
    require(!r.empty(), ErrorCode::kInvalidArgument, "bleu: empty reference");
  }

  BleuScore out;
  double log_sum = 0.0;
  bool zero = false;
  for (std::size_t n = 1; n <= max_n; ++n) {
    const auto cand = count_ngrams(candidate, n);
    std::map<text::Tokens, std::size_t> max_ref;
    for (const auto& r : references) {
      for (const auto& [g, c] : count_ngrams(r, n)) max_ref[g] = std::max(max_ref[g], c);
    }
    std::size_t matched = 0;
    std::size_t total = 0;
    for (const auto& [g, c] : cand) {
      total += c;
      auto it = max_ref.find(g);
      if (it != max_ref.end()) matched += std::min(c, it->second);
    }
    double p;
    if (n == 1) {
      p = static_cast<double>(matched) / static_cast<double>(total);
    } else {
      p = static_cast<double>(matched + 1) / static_cast<double>(total + 1);
    }
    out.precisions.push_back(p);
    if (p == 0.0) {
      zero = true;
    } else {
      log_sum += std::log(p);
    }
  }

  const std::size_t c = candidate.size();
  std::size_t r = references.front().size();
  for (const auto& ref : references) {
    const std::size_t len = ref.size();
    const auto d_new = static_cast<long long>(len) - static_cast<long long>(c);
    const auto d_old = static_cast<long long>(r) - static_cast<long long>(c);
    if (std::llabs(d_new) < std::llabs(d_old) || (std::llabs(d_new) == std::llabs(d_old) && len < r)) {
      r = len;
    }
  }
  out.brevity_penalty =
      c > r ? 1.0 : std::exp(1.0 - static_cast<double>(r) / static_cast<double>(c));
  out.score = zero ? 0.0
                   : out.brevity_penalty * std::exp(log_sum / static_cast<double>(max_n));
  out.score = std::clamp(out.score, 0.0, 1.0);
  return out;
}

UserEvaluation evaluate_user(const responder::Seq2SeqModel& model,
                             std::span<const extractor::RequestResponsePair> pairs,
                             const persona::PersonaFeatures* persona) {
  require(!pairs.empty(), ErrorCode::kData, "evaluate_user: no held-out pairs");
  UserEvaluation ev;
  double total = 0.0;
  for (const auto& p : pairs) {
    const responder::ScoredResponse r =
        responder::greedy_decode(model, p.request, persona ? *persona : p.persona);
    const text::Tokens refs[] = {p.response};
    const double s = r.tokens.empty() ? 0.0 : bleu(r.tokens, refs).score;
    ev.scores.push_back(s);
    ev.outputs.push_back(r.tokens);
    total += s;
  }
  ev.mean = total / static_cast<double>(pairs.size());
  return ev;
}

std::map<std::string, double> recipient_breakdown(
    std::span<const std::pair<corpus::RecipientType, double>> results) {
  std::map<std::string, std::pair<double, std::size_t>> acc;
  for (const auto& [type, score] : results) {
    auto& [sum, n] = acc[std::string(corpus::to_string(type))];
    sum += score;
    ++n;
  }
  std::map<std::string, double> out;
  for (const auto& [type, sn] : acc) out[type] = sn.first / static_cast<double>(sn.second);
  return out;
}

double mean_length(std::span<const text::Tokens> outputs) {
  require(!outputs.empty(), ErrorCode::kData, "mean_length: no outputs");
  double total = 0.0;
  for (const auto& o : outputs) total += static_cast<double>(o.size());
  return total / static_cast<double>(outputs.size());
}

double population_variance(std::span<const double> values) {
  require(!values.empty(), ErrorCode::kData, "population_variance: no values");
  // Shifted by the first value so that constant input gives exactly 0.
  const double shift = values.front();
  double mean = 0.0;
  for (double v : values) mean += v - shift;
  mean /= static_cast<double>(values.size());
  double var = 0.0;
  for (double v : values) var += (v - shift - mean) * (v - shift - mean);
  return var / static_cast<double>(values.size());
}

VarianceComparison cross_user_variance(std::span<const std::vector<text::Tokens>> personalized,
                                       std::span<const std::vector<text::Tokens>> generic) {
  require(personalized.size() >= 2, ErrorCode::kData,
          "cross_user_variance: need at least two users");
  require(personalized.size() == generic.size(), ErrorCode::kInvalidArgument,
          "cross_user_variance: user count differs between systems");
  std::vector<double> p;
  std::vector<double> g;
  for (std::size_t u = 0; u < personalized.size(); ++u) {
    p.push_back(mean_length(personalized[u]));
    g.push_back(mean_length(generic[u]));
  }
  return {population_variance(p), population_variance(g)};
}

}  // namespace preply::eval
