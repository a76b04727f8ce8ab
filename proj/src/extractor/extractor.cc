#include "extractor/extractor.h"

#include <algorithm>
#include <numeric>
#include <optional>

#include "common/error.h"
#include "nn/sequence.h"
#include "nn/tape.h"
#include "triage/triage.h"

namespace preply::extractor {

namespace {

nn::TimeMajorBatch batch_of(const std::vector<std::vector<int>>& ids,
                            std::span<const std::size_t> rows) {
  std::vector<std::vector<int>> seqs;
  seqs.reserve(rows.size());
  for (std::size_t r : rows) seqs.push_back(ids[r]);
  return nn::time_major(seqs);
}

}  // namespace

std::vector<nn::Parameter*> SentenceClassifier::parameters() {
  return {&embedding.table, &lstm.W, &lstm.U, &lstm.b, &dense.W, &dense.b};
}

std::vector<int> encode_sentence(const SentenceClassifier& model, const text::Tokens& sentence) {
  std::vector<int> ids = model.vocab.encode(sentence);
  if (ids.size() > model.max_len) ids.resize(model.max_len);
  return ids;
}

SentenceClassifier train_sentence_classifier(const std::vector<corpus::LabeledSentence>& data,
                                             const ClassifierOptions& opts, nn::Rng& rng) {
  require(!data.empty(), ErrorCode::kData, "train_sentence_classifier: empty training set");
  require(opts.batch_size > 0 && opts.max_len > 0, ErrorCode::kInvalidArgument,
          "train_sentence_classifier: batch_size and max_len must be positive");
  std::size_t positives = 0;
  std::vector<text::Tokens> tokens;
  tokens.reserve(data.size());
  for (const auto& s : data) {
    require(s.label == 0 || s.label == 1, ErrorCode::kData,
            "train_sentence_classifier: labels must be 0 or 1");
    positives += static_cast<std::size_t>(s.label);
    tokens.push_back(text::tokenize(s.text));
  }
  triage::check_balance(positives, data.size(), "train_sentence_classifier");

  nn::Rng init = rng.fork("init");
  SentenceClassifier model;
  model.vocab = responder::build_vocab(tokens, opts.vocab_size);
  model.max_len = opts.max_len;
  model.embedding = nn::EmbeddingTable("embedding", model.vocab.size(), opts.embed_dim, init);
  model.lstm = nn::LstmParams("lstm", opts.embed_dim, opts.hidden_dim, init);
  model.dense = nn::Dense("dense", opts.hidden_dim, 1, init);

  // Empty sentences carry no signal and would leave the state at zero.
  std::vector<std::vector<int>> ids;
  std::vector<double> labels;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (tokens[i].empty()) continue;
    ids.push_back(encode_sentence(model, tokens[i]));
    labels.push_back(static_cast<double>(data[i].label));
  }
  require(!ids.empty(), ErrorCode::kData, "train_sentence_classifier: all sentences empty");

  nn::Rng order_rng = rng.fork("order");
  nn::Rng dropout_rng = rng.fork("dropout");
  const std::size_t H = opts.hidden_dim;
  std::vector<nn::Parameter*> params = model.parameters();
  require(opts.optimizer == "adam" || opts.optimizer == "sgd", ErrorCode::kInvalidArgument,
          "train_sentence_classifier: optimizer must be 'adam' or 'sgd'");
  std::optional<nn::Adam> adam;
  if (opts.optimizer == "adam") adam.emplace(params, nn::Adam::Options{.lr = opts.lr, .clip = opts.clip});
  std::vector<std::size_t> order(ids.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  nn::Tape tape;
  for (std::size_t epoch = 0; epoch < opts.epochs; ++epoch) {
    order_rng.shuffle(std::span<std::size_t>(order));
    for (std::size_t start = 0; start < order.size(); start += opts.batch_size) {
      const std::size_t end = std::min(order.size(), start + opts.batch_size);
      const std::span<const std::size_t> rows(order.data() + start, end - start);
      const nn::TimeMajorBatch batch = batch_of(ids, rows);
      const std::size_t B = rows.size();

      tape.clear();
      nn::zero_grads(params);
      const auto hc0 = tape.input(nn::Matrix(2 * H, B));
      const auto hc = nn::run_lstm(tape, model.lstm, model.embedding.table, batch, hc0);
      auto h = tape.top_rows(hc, H);
      if (opts.dropout > 0.0) {
        h = tape.mul_const(h, nn::Matrix(H, B, nn::dropout_mask(dropout_rng, H * B, opts.dropout)));
      }
      const auto logits = tape.add_bias(tape.matmul(tape.param(model.dense.W), h),
                                        tape.param(model.dense.b));
      std::vector<double> y;
      y.reserve(B);
      for (std::size_t r : rows) y.push_back(labels[r]);
      const auto loss = tape.sigmoid_bce(logits, std::move(y), 1.0 / static_cast<double>(B));
      tape.backward(loss);
      if (adam) {
        adam->step();
      } else {
        nn::sgd_step(params, opts.lr, opts.clip);
      }
    }
  }
  return model;
}

std::vector<double> classify_batch(const SentenceClassifier& model,
                                   const std::vector<text::Tokens>& sentences) {
  std::vector<std::vector<int>> ids;
  ids.reserve(sentences.size());
  for (const auto& s : sentences) {
    require(!s.empty(), ErrorCode::kInvalidArgument, "classify_sentence: empty sentence");
    ids.push_back(encode_sentence(model, s));
  }
  if (ids.empty()) return {};
  const std::size_t H = model.lstm.hidden_dim;
  const nn::Matrix hc = nn::run_lstm(model.lstm, model.embedding.table.value,
                                     nn::time_major(ids), nn::Matrix(2 * H, ids.size()));
  std::vector<double> probs(ids.size());
  for (std::size_t j = 0; j < ids.size(); ++j) {
    double z = model.dense.b.value[0];
    for (std::size_t k = 0; k < H; ++k) z += model.dense.W.value(0, k) * hc(k, j);
    probs[j] = nn::sigmoid(z);
  }
  return probs;
}

double classify_sentence(const SentenceClassifier& model, const text::Tokens& sentence) {
  return classify_batch(model, {sentence}).front();
}

std::vector<std::string> extract_requests(const SentenceClassifier& model,
                                          const corpus::Email& email) {
  std::vector<std::string> sentences = text::split_sentences(text::strip_boilerplate(email.body));
  std::vector<std::string> kept;
  std::vector<text::Tokens> tokens;
  for (auto& s : sentences) {
    text::Tokens t = text::tokenize(s);
    if (t.empty()) continue;
    kept.push_back(std::move(s));
    tokens.push_back(std::move(t));
  }
  const std::vector<double> probs = classify_batch(model, tokens);
  std::vector<std::string> requests;
  for (std::size_t i = 0; i < kept.size(); ++i) {
    if (probs[i] >= 0.5) requests.push_back(std::move(kept[i]));
  }
  return requests;
}

std::vector<RequestResponsePair> extract_pairs(const SentenceClassifier& model,
                                               const corpus::Email& email,
                                               const corpus::Email& reply,
                                               const std::string& user_id,
                                               const text::Dictionary& dict) {
  require(triage::label_email(email, &reply) == triage::Label::kPositive,
          ErrorCode::kInvalidArgument,
          "extract_pairs: thread '" + email.id + "' is not triage-positive");
  text::Tokens response = text::preprocess(reply.body, dict);
  std::vector<RequestResponsePair> pairs;
  if (response.empty()) return pairs;
  for (const std::string& sentence : extract_requests(model, email)) {
    text::Tokens request = text::filter_dictionary(text::tokenize(sentence), dict);
    if (request.empty()) continue;
    RequestResponsePair p;
    p.request = std::move(request);
    p.response = response;
    p.user_id = user_id;
    p.recipient_type = email.recipient_type;
    pairs.push_back(std::move(p));
  }
  return pairs;
}

nn::ModelFile to_model_file(const SentenceClassifier& model) {
  nn::ModelFile file;
  file.kind = std::string(kModelKind);
  file.meta["vocab"] = model.vocab.to_json();
  file.meta["max_len"] = model.max_len;
  file.add("embedding", model.embedding.table.value);
  file.add("lstm.W", model.lstm.W.value);
  file.add("lstm.U", model.lstm.U.value);
  file.add("lstm.b", model.lstm.b.value);
  file.add("dense.W", model.dense.W.value);
  file.add("dense.b", model.dense.b.value);
  return file;
}

SentenceClassifier from_model_file(const nn::ModelFile& file) {
  SentenceClassifier m;
  try {
    m.vocab = responder::Vocab::from_json(file.meta.at("vocab"));
    m.max_len = file.meta.at("max_len").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kParse, std::string("sentence classifier meta: ") + e.what());
  }
  m.embedding.table = nn::Parameter("embedding", file.tensor("embedding"));
  m.lstm.W = nn::Parameter("lstm.W", file.tensor("lstm.W"));
  m.lstm.U = nn::Parameter("lstm.U", file.tensor("lstm.U"));
  m.lstm.b = nn::Parameter("lstm.b", file.tensor("lstm.b"));
  m.dense.W = nn::Parameter("dense.W", file.tensor("dense.W"));
  m.dense.b = nn::Parameter("dense.b", file.tensor("dense.b"));
  const std::size_t H = m.lstm.U.value.cols();
  m.lstm.hidden_dim = H;
  m.lstm.input_dim = m.lstm.W.value.cols();
  require(m.embedding.vocab_size() == m.vocab.size() &&
              m.embedding.dim() == m.lstm.input_dim && m.lstm.U.value.rows() == 4 * H &&
              m.lstm.W.value.rows() == 4 * H && m.lstm.b.value.rows() == 4 * H &&
              m.dense.W.value.rows() == 1 && m.dense.W.value.cols() == H &&
              m.dense.b.value.size() == 1,
          ErrorCode::kParse, "sentence classifier: inconsistent tensor shapes");
  return m;
}

void save(const SentenceClassifier& model, const std::filesystem::path& path) {
  nn::save_model(path, to_model_file(model));
}

SentenceClassifier load(const std::filesystem::path& path) {
  return from_model_file(nn::load_model(path, kModelKind));
}

}  // namespace preply::extractor
