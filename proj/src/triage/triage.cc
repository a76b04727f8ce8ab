#include "triage/triage.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>

#include "common/error.h"

namespace preply::triage {

namespace {

constexpr std::uint32_t kHashMask = (1u << kHashBits) - 1;
// Lazy scale is folded back into the weights once it drops below this.
constexpr double kMinScale = 1e-60;

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

using SparseRow = std::vector<std::pair<std::uint32_t, double>>;

SparseRow hashed(const TriageFeatures& features) {
  std::map<std::uint32_t, double> merged;
  for (const auto& [id, count] : features) merged[feature_index(id)] += count;
  return {merged.begin(), merged.end()};
}

}  // namespace

Label label_email(const corpus::Email& email, const corpus::Email* reply) {
  if (reply == nullptr) return Label::kNegative;
  require(reply->in_reply_to.has_value() && *reply->in_reply_to == email.id,
          ErrorCode::kInvalidArgument,
          "label_email: reply '" + reply->id + "' does not answer '" + email.id + "'");
  const std::string body = text::strip_boilerplate(reply->body);
  const bool short_reply = text::split_sentences(body).size() <= kMaxReplySentences &&
                           text::tokenize(body).size() <= kMaxReplyTokens;
  return short_reply ? Label::kPositive : Label::kNegative;
}

TriageFeatures featurize_tokens(const text::Tokens& tokens) {
  TriageFeatures features;
  for (std::size_t n = 2; n <= 4; ++n) {
    for (const text::Tokens& gram : text::ngrams(tokens, n)) {
      features[std::to_string(n) + ":" + text::join(gram, "_")] += 1.0;
    }
  }
  features["len:" + std::string(text::to_string(text::length_bucket(tokens)))] = 1.0;
  return features;
}

TriageFeatures featurize(const corpus::Email& email, const text::Dictionary& dict) {
  return featurize_tokens(text::preprocess(email.body, dict));
}

std::uint32_t feature_index(std::string_view feature_id) {
  return static_cast<std::uint32_t>(nn::fnv1a64(feature_id)) & kHashMask;
}

double TriageModel::score(const TriageFeatures& features) const {
  double z = 0.0;
  for (const auto& [index, count] : hashed(features)) {
    auto it = weights.find(index);
    if (it != weights.end()) z += it->second * count;
  }
  return z;
}

double TriageModel::l2_norm() const {
  double s = 0.0;
  for (const auto& [index, w] : weights) s += w * w;
  return std::sqrt(s);
}

void check_balance(std::size_t positives, std::size_t total, std::string_view what) {
  require(total > 0, ErrorCode::kData, std::string(what) + ": no training data");
  const double frac = static_cast<double>(positives) / static_cast<double>(total);
  require(frac >= 0.45 && frac <= 0.55, ErrorCode::kData,
          std::string(what) + ": class balance " + std::to_string(frac) +
              " outside [0.45, 0.55]");
}

std::vector<Example> balance(std::vector<Example> data, nn::Rng& rng) {
  std::vector<std::size_t> pos;
  std::vector<std::size_t> neg;
  for (std::size_t i = 0; i < data.size(); ++i) {
    (data[i].second == Label::kPositive ? pos : neg).push_back(i);
  }
  auto& major = pos.size() > neg.size() ? pos : neg;
  const std::size_t keep = std::min(pos.size(), neg.size()) + 1;
  if (major.size() <= keep) return data;
  rng.shuffle(std::span<std::size_t>(major));
  std::vector<bool> drop(data.size(), false);
  for (std::size_t i = keep; i < major.size(); ++i) drop[major[i]] = true;
  std::vector<Example> out;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (!drop[i]) out.push_back(std::move(data[i]));
  }
  return out;
}

TriageModel train_triage(const std::vector<Example>& data, const TriageOptions& opts,
                         nn::Rng& rng) {
  require(!data.empty(), ErrorCode::kData, "train_triage: empty training set");
  require(opts.lambda >= 0.0, ErrorCode::kInvalidArgument, "train_triage: lambda < 0");
  require(opts.lr > 0.0, ErrorCode::kInvalidArgument, "train_triage: lr must be > 0");
  const auto positives = static_cast<std::size_t>(
      std::count_if(data.begin(), data.end(),
                    [](const Example& e) { return e.second == Label::kPositive; }));
  check_balance(positives, data.size(), "train_triage");

  std::vector<SparseRow> rows;
  rows.reserve(data.size());
  for (const auto& [features, label] : data) rows.push_back(hashed(features));

  // w = scale * v; the implicit L2 shrink only touches `scale`.
  std::vector<double> v(std::size_t{1} << kHashBits, 0.0);
  std::vector<std::uint32_t> touched;
  std::vector<bool> is_touched(v.size(), false);
  double scale = 1.0;
  const double shrink =
      1.0 / (1.0 + opts.lr * opts.lambda / static_cast<double>(data.size()));

  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t epoch = 0; epoch < opts.epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    for (std::size_t i : order) {
      const SparseRow& x = rows[i];
      double z = 0.0;
      for (const auto& [index, count] : x) z += v[index] * count;
      z *= scale;
      const double y = data[i].second == Label::kPositive ? 1.0 : 0.0;
      const double step = opts.lr * (sigmoid(z) - y) / scale;
      for (const auto& [index, count] : x) {
        v[index] -= step * count;
        if (!is_touched[index]) {
          is_touched[index] = true;
          touched.push_back(index);
        }
      }
      scale *= shrink;
      if (scale < kMinScale) {
        for (std::uint32_t index : touched) v[index] *= scale;
        scale = 1.0;
      }
    }
  }

  TriageModel model;
  model.lambda = opts.lambda;
  for (std::uint32_t index : touched) {
    const double w = v[index] * scale;
    if (w != 0.0) model.weights.emplace(index, w);
  }
  return model;
}

double predict_triage(const TriageModel& model, const TriageFeatures& features) {
  return sigmoid(model.score(features));
}

double predict_triage(const TriageModel& model, const corpus::Email& email,
                      const text::Dictionary& dict) {
  return predict_triage(model, featurize(email, dict));
}

nn::ModelFile to_model_file(const TriageModel& model) {
  nn::ModelFile file;
  file.kind = std::string(kModelKind);
  file.meta["lambda"] = model.lambda;
  file.meta["hash_bits"] = kHashBits;
  const std::size_t n = model.weights.size();
  nn::Matrix index(n, 1);
  nn::Matrix weight(n, 1);
  std::size_t r = 0;
  for (const auto& [i, w] : model.weights) {
    index[r] = static_cast<double>(i);
    weight[r] = w;
    ++r;
  }
  file.add("index", std::move(index));
  file.add("weight", std::move(weight));
  return file;
}

TriageModel from_model_file(const nn::ModelFile& file) {
  require(file.meta.value("hash_bits", 0u) == kHashBits, ErrorCode::kParse,
          "triage model: unsupported hash_bits");
  TriageModel model;
  model.lambda = file.meta.value("lambda", 0.0);
  const nn::Matrix& index = file.tensor("index");
  const nn::Matrix& weight = file.tensor("weight");
  require(index.size() == weight.size(), ErrorCode::kParse,
          "triage model: index/weight length mismatch");
  for (std::size_t r = 0; r < index.size(); ++r) {
    const double i = index[r];
    require(i >= 0 && i <= kHashMask && i == std::floor(i), ErrorCode::kParse,
            "triage model: bad feature index");
    model.weights.emplace(static_cast<std::uint32_t>(i), weight[r]);
  }
  return model;
}

void save(const TriageModel& model, const std::filesystem::path& path) {
  nn::save_model(path, to_model_file(model));
}

TriageModel load(const std::filesystem::path& path) {
  return from_model_file(nn::load_model(path, kModelKind));
}

}  // namespace preply::triage
