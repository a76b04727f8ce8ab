#ifndef PREPLY_PIPELINE_CONFIG_H_
#define PREPLY_PIPELINE_CONFIG_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "extractor/extractor.h"
#include "responder/seq2seq.h"
#include "signals/signals.h"
#include "triage/triage.h"

namespace preply::pipeline {

struct CorpusOptions {
  std::size_t personas = 10;
  std::size_t threads_per_user = 120;
  std::size_t labeled_sentences = 1000;
};

struct PersonaOptions {
  double boost_threshold = 0.85;
  double lr = 0.05;
  std::size_t epochs = 20;
  std::size_t batch_size = 64;
  // Extra boosted pairs per own pair; 0 keeps every match.
  std::size_t max_boost_ratio = 0;
};

struct SuggestOptions {
  std::size_t beam_width = 5;
  std::size_t k = 3;
};

struct EvalOptions {
  std::size_t variance_requests = 100;
};

// The library's seq2seq schedule (0.5, halved every 5 epochs) stalls on the
// full synthetic corpus; the pipeline trains at a constant rate instead and
// replaces a fifth of the personas with the corpus-wide one so that generic
// decoding stays in distribution.
inline responder::Seq2SeqOptions pipeline_seq2seq_defaults() {
  responder::Seq2SeqOptions o;
  o.lr = 1.0;
  o.halve_every = 0;
  o.epochs = 60;
  o.generic_persona_rate = 0.2;
  return o;
}

struct PipelineConfig {
  std::uint64_t seed = 42;
  CorpusOptions corpus;
  triage::TriageOptions triage;
  extractor::ClassifierOptions extractor;
  responder::Seq2SeqOptions seq2seq = pipeline_seq2seq_defaults();
  PersonaOptions persona;
  signals::SignalOptions signals;
  SuggestOptions suggest;
  EvalOptions eval;
};

// The defaults every command uses unless a config file overrides them.
PipelineConfig default_config();

// Flat "key = value" lines; blank lines and '#' comments are ignored.
// Unknown keys, duplicate keys and malformed values are errors naming the
// line. Keys not mentioned keep their defaults.
PipelineConfig parse_config(std::string_view text);
PipelineConfig load_config(const std::filesystem::path& path);

// Every key in a fixed order, so equal configs serialize identically and
// parse_config(serialize_config(c)) == c.
std::string serialize_config(const PipelineConfig& config);

// Sets one key from its textual value, with the same validation as the file.
void set_value(PipelineConfig& config, std::string_view key, std::string_view value);
std::string get_value(const PipelineConfig& config, std::string_view key);
std::vector<std::string> config_keys();

// FNV-1a of the serialized config with the seed left out; the seed is
// recorded separately.
std::string config_hash(const PipelineConfig& config);

// Range checks across fields (positive sizes, probabilities in [0, 1], ...).
void validate(const PipelineConfig& config);

bool operator==(const PipelineConfig& a, const PipelineConfig& b);

}  // namespace preply::pipeline

#endif  // PREPLY_PIPELINE_CONFIG_H_
