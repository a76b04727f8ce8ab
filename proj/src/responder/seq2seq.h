#ifndef PREPLY_RESPONDER_SEQ2SEQ_H_
#define PREPLY_RESPONDER_SEQ2SEQ_H_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "extractor/extractor.h"
#include "nn/layers.h"
#include "nn/rng.h"
#include "nn/serialize.h"
#include "persona/features.h"
#include "responder/vocab.h"
#include "text/textproc.h"

namespace preply::responder {

inline constexpr std::size_t kMaxDecodeTokens = 25;

struct Seq2SeqOptions {
  std::size_t embed_dim = 64;
  std::size_t hidden_dim = 256;
  std::size_t batch_size = 64;
  std::size_t vocab_size = 2000;
  double clip = nn::kDefaultClip;
  double lr = 0.5;
  // lr is halved every `halve_every` epochs once `decay_start` epochs have
  // passed; 0 disables decay.
  std::size_t halve_every = 5;
  std::size_t decay_start = 0;
  std::size_t epochs = 30;
  std::size_t max_source_len = 30;
  // Fraction of training pairs whose persona tokens are replaced by the
  // corpus-wide persona, so that persona-blind decoding sees familiar input.
  double generic_persona_rate = 0.0;
};

double learning_rate(const Seq2SeqOptions& opts, std::size_t epoch);

// Shared embedding, encoder and decoder LSTMs, dense output over the vocab.
// The decoder always starts from the encoder's final (h, c).
struct Seq2SeqModel {
  Vocab vocab;
  nn::EmbeddingTable embedding;
  nn::LstmParams encoder;
  nn::LstmParams decoder;
  nn::Dense output;
  std::size_t max_source_len = 30;
  // Persona used for persona-blind ("generic") decoding.
  std::optional<persona::PersonaFeatures> generic_persona;

  std::vector<nn::Parameter*> parameters();
  std::vector<const nn::Parameter*> parameters() const;
  std::size_t hidden_dim() const { return encoder.hidden_dim; }
};

struct ScoredResponse {
  text::Tokens tokens;
  double logprob = 0.0;

  friend bool operator==(const ScoredResponse&, const ScoredResponse&) = default;
};

// Vocabulary over requests and responses with the nine persona tokens
// appended; total size never exceeds max_size.
Vocab build_pair_vocab(std::span<const extractor::RequestResponsePair> pairs,
                       std::size_t max_size);

// [len, pol, deg persona tokens] ++ request ids ++ [<eos>]. The request is
// truncated to max_source_len.
std::vector<int> encode_source(const Seq2SeqModel& model, const text::Tokens& request,
                               const persona::PersonaFeatures& persona);

struct TrainReport {
  std::vector<double> epoch_loss;  // mean per-sentence loss
};

// Untrained model over `vocab` with uniform initialization.
Seq2SeqModel init_model(Vocab vocab, const Seq2SeqOptions& opts, nn::Rng& rng);

// Fresh model: build_pair_vocab, init_model, then fit().
Seq2SeqModel train_seq2seq(std::span<const extractor::RequestResponsePair> pairs,
                           const Seq2SeqOptions& opts, nn::Rng& rng,
                           TrainReport* report = nullptr);

// Teacher-forced training of an existing model: decoder input is
// <bos> ++ response, target is response ++ <eos>. Tokens outside the
// model's vocab map to <unk>.
void fit(Seq2SeqModel& model, std::span<const extractor::RequestResponsePair> pairs,
         const Seq2SeqOptions& opts, nn::Rng& rng, TrainReport* report = nullptr);

// Loss of one batch without updating anything; used by gradient tests.
double batch_loss(Seq2SeqModel& model, std::span<const extractor::RequestResponsePair> pairs);

// Encoder final state [h; c] for a source id sequence.
nn::Matrix encode(const Seq2SeqModel& model, std::span<const int> source);

// Logits of the first decoder step starting from `state`.
std::vector<double> first_step_logits(const Seq2SeqModel& model, const nn::Matrix& state);

// Argmax decoding from <bos> until <eos> or 25 tokens. Ties go to the lower
// id; <pad>, <unk>, <bos> and persona tokens are never emitted.
ScoredResponse greedy_decode(const Seq2SeqModel& model, const text::Tokens& request,
                             const persona::PersonaFeatures& persona);

// Beam search scored by summed log-softmax. Returns up to k distinct
// finished responses, logprob descending. Candidate ties are broken by
// parent beam then token id, so beam_width = k = 1 reproduces
// greedy_decode exactly. Throws if k > beam_width or k == 0.
std::vector<ScoredResponse> nbest(const Seq2SeqModel& model, const text::Tokens& request,
                                  const persona::PersonaFeatures& persona,
                                  std::size_t beam_width, std::size_t k);

inline constexpr std::string_view kModelKind = "seq2seq";

nn::ModelFile to_model_file(const Seq2SeqModel& model);
Seq2SeqModel from_model_file(const nn::ModelFile& file);
void save(const Seq2SeqModel& model, const std::filesystem::path& path);
Seq2SeqModel load(const std::filesystem::path& path);

}  // namespace preply::responder

#endif  // PREPLY_RESPONDER_SEQ2SEQ_H_
