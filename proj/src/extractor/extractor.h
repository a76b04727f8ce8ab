#ifndef PREPLY_EXTRACTOR_EXTRACTOR_H_
#define PREPLY_EXTRACTOR_EXTRACTOR_H_

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "corpus/corpus.h"
#include "corpus/generator.h"
#include "nn/layers.h"
#include "nn/rng.h"
#include "nn/serialize.h"
#include "persona/features.h"
#include "responder/vocab.h"
#include "text/textproc.h"

namespace preply::extractor {

struct ClassifierOptions {
  std::size_t embed_dim = 64;
  std::size_t hidden_dim = 100;
  std::size_t batch_size = 64;
  double dropout = 0.2;
  std::size_t epochs = 3;
  // "adam" or "sgd". 39 plain SGD steps from the default init do not
  // separate the classes reliably.
  std::string optimizer = "adam";
  double lr = 0.01;
  double clip = nn::kDefaultClip;
  std::size_t max_len = 30;
  std::size_t vocab_size = 5000;
};

// Embedding -> LSTM -> last hidden state -> dense(1) -> sigmoid.
struct SentenceClassifier {
  responder::Vocab vocab;
  nn::EmbeddingTable embedding;
  nn::LstmParams lstm;
  nn::Dense dense;
  std::size_t max_len = 30;

  std::vector<nn::Parameter*> parameters();
};

// Labels must be 0/1 and balanced to within [0.45, 0.55].
SentenceClassifier train_sentence_classifier(const std::vector<corpus::LabeledSentence>& data,
                                             const ClassifierOptions& opts, nn::Rng& rng);

// Sentence ids, truncated to max_len; unknown tokens become <unk>.
std::vector<int> encode_sentence(const SentenceClassifier& model, const text::Tokens& sentence);

// Probability that the sentence is a request or question. Throws on an
// empty sentence.
double classify_sentence(const SentenceClassifier& model, const text::Tokens& sentence);
std::vector<double> classify_batch(const SentenceClassifier& model,
                                   const std::vector<text::Tokens>& sentences);

// Sentences of the stripped body scored >= 0.5, in original order. An empty
// result means the email gets no automatic reply.
std::vector<std::string> extract_requests(const SentenceClassifier& model,
                                          const corpus::Email& email);

struct RequestResponsePair {
  text::Tokens request;
  text::Tokens response;
  std::string user_id;
  corpus::RecipientType recipient_type = corpus::RecipientType::kWork;
  persona::PersonaFeatures persona;

  friend bool operator==(const RequestResponsePair&, const RequestResponsePair&) = default;
};

// One pair per extracted request sentence, each with the whole preprocessed
// reply. Throws on broken linkage or when the thread is not triage-positive.
std::vector<RequestResponsePair> extract_pairs(const SentenceClassifier& model,
                                               const corpus::Email& email,
                                               const corpus::Email& reply,
                                               const std::string& user_id,
                                               const text::Dictionary& dict);

inline constexpr std::string_view kModelKind = "sentence-classifier";

nn::ModelFile to_model_file(const SentenceClassifier& model);
SentenceClassifier from_model_file(const nn::ModelFile& file);
void save(const SentenceClassifier& model, const std::filesystem::path& path);
SentenceClassifier load(const std::filesystem::path& path);

}  // namespace preply::extractor

#endif  // PREPLY_EXTRACTOR_EXTRACTOR_H_
