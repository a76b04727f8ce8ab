#include "pipeline/config.h"

#include <array>
#include <charconv>
#include <cstdio>
#include <set>
#include <system_error>
#include <type_traits>
#include <variant>

#include "common/error.h"
#include "common/file_util.h"
#include "nn/rng.h"

namespace preply::pipeline {

namespace {

// The seed shares the size_t slot type; both are 64-bit unsigned here.
static_assert(std::is_same_v<std::uint64_t, std::size_t>);
using Slot = std::variant<std::size_t*, int*, double*, std::string*>;

struct Binding {
  std::string_view key;
  Slot slot;
};

std::vector<Binding> bindings(PipelineConfig& c) {
  return {
      {"seed", &c.seed},
      {"corpus.personas", &c.corpus.personas},
      {"corpus.threads_per_user", &c.corpus.threads_per_user},
      {"corpus.labeled_sentences", &c.corpus.labeled_sentences},
      {"triage.lambda", &c.triage.lambda},
      {"triage.lr", &c.triage.lr},
      {"triage.epochs", &c.triage.epochs},
      {"extractor.embed_dim", &c.extractor.embed_dim},
      {"extractor.hidden_dim", &c.extractor.hidden_dim},
      {"extractor.batch_size", &c.extractor.batch_size},
      {"extractor.dropout", &c.extractor.dropout},
      {"extractor.epochs", &c.extractor.epochs},
      {"extractor.optimizer", &c.extractor.optimizer},
      {"extractor.lr", &c.extractor.lr},
      {"extractor.clip", &c.extractor.clip},
      {"extractor.max_len", &c.extractor.max_len},
      {"extractor.vocab_size", &c.extractor.vocab_size},
      {"seq2seq.embed_dim", &c.seq2seq.embed_dim},
      {"seq2seq.hidden_dim", &c.seq2seq.hidden_dim},
      {"seq2seq.batch_size", &c.seq2seq.batch_size},
      {"seq2seq.vocab_size", &c.seq2seq.vocab_size},
      {"seq2seq.clip", &c.seq2seq.clip},
      {"seq2seq.lr", &c.seq2seq.lr},
      {"seq2seq.halve_every", &c.seq2seq.halve_every},
      {"seq2seq.decay_start", &c.seq2seq.decay_start},
      {"seq2seq.epochs", &c.seq2seq.epochs},
      {"seq2seq.max_source_len", &c.seq2seq.max_source_len},
      {"seq2seq.generic_persona_rate", &c.seq2seq.generic_persona_rate},
      {"persona.boost_threshold", &c.persona.boost_threshold},
      {"persona.lr", &c.persona.lr},
      {"persona.epochs", &c.persona.epochs},
      {"persona.batch_size", &c.persona.batch_size},
      {"persona.max_boost_ratio", &c.persona.max_boost_ratio},
      {"signals.busy_hours", &c.signals.busy_hours},
      {"signals.business_start_hour", &c.signals.business_start_hour},
      {"signals.business_end_hour", &c.signals.business_end_hour},
      {"suggest.beam_width", &c.suggest.beam_width},
      {"suggest.k", &c.suggest.k},
      {"eval.variance_requests", &c.eval.variance_requests},
  };
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
  T value{};
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  require(ec == std::errc() && end == text.data() + text.size(), ErrorCode::kParse,
          "config: bad value '" + std::string(text) + "' for " + std::string(key));
  return value;
}

std::string format_double(double v) {
  std::array<char, 32> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  std::string out(buf.data(), end);
  // Keep a visible decimal point so the value reads as a real number.
  if (out.find_first_of(".e") == std::string::npos && out.find("inf") == std::string::npos &&
      out.find("nan") == std::string::npos) {
    out += ".0";
  }
  return out;
}

Slot find_slot(PipelineConfig& config, std::string_view key) {
  for (const auto& b : bindings(config)) {
    if (b.key == key) return b.slot;
  }
  fail(ErrorCode::kInvalidArgument, "config: unknown key '" + std::string(key) + "'");
}

void check(bool ok, std::string_view key, std::string_view why) {
  require(ok, ErrorCode::kInvalidArgument,
          "config: " + std::string(key) + " " + std::string(why));
}

}  // namespace

PipelineConfig default_config() { return PipelineConfig{}; }

void set_value(PipelineConfig& config, std::string_view key, std::string_view value) {
  value = trim(value);
  std::visit(
      [&](auto* p) {
        using T = std::remove_pointer_t<decltype(p)>;
        if constexpr (std::is_same_v<T, std::string>) {
          require(!value.empty(), ErrorCode::kParse,
                  "config: empty value for " + std::string(key));
          *p = std::string(value);
        } else {
          *p = parse_number<T>(key, value);
        }
      },
      find_slot(config, key));
}

std::string get_value(const PipelineConfig& config, std::string_view key) {
  PipelineConfig copy = config;
  return std::visit(
      [](auto* p) -> std::string {
        using T = std::remove_pointer_t<decltype(p)>;
        if constexpr (std::is_same_v<T, std::string>) {
          return *p;
        } else if constexpr (std::is_same_v<T, double>) {
          return format_double(*p);
        } else {
          return std::to_string(*p);
        }
      },
      find_slot(copy, key));
}

std::vector<std::string> config_keys() {
  PipelineConfig c;
  std::vector<std::string> keys;
  for (const auto& b : bindings(c)) keys.emplace_back(b.key);
  return keys;
}

void validate(const PipelineConfig& c) {
  check(c.corpus.personas >= 2 && c.corpus.personas <= 12, "corpus.personas",
        "must be in [2, 12]");
  check(c.corpus.threads_per_user >= 8, "corpus.threads_per_user", "must be >= 8");
  check(c.corpus.labeled_sentences >= 10, "corpus.labeled_sentences", "must be >= 10");
  check(c.triage.lambda >= 0.0, "triage.lambda", "must be >= 0");
  check(c.triage.lr > 0.0, "triage.lr", "must be > 0");
  check(c.extractor.embed_dim > 0 && c.extractor.hidden_dim > 0 && c.extractor.batch_size > 0,
        "extractor", "dimensions and batch size must be > 0");
  check(c.extractor.dropout >= 0.0 && c.extractor.dropout < 1.0, "extractor.dropout",
        "must be in [0, 1)");
  check(c.extractor.optimizer == "adam" || c.extractor.optimizer == "sgd",
        "extractor.optimizer", "must be adam or sgd");
  check(c.extractor.lr > 0.0 && c.extractor.clip > 0.0, "extractor", "lr and clip must be > 0");
  check(c.extractor.max_len > 0 && c.extractor.vocab_size > 4, "extractor",
        "max_len must be > 0 and vocab_size > 4");
  check(c.seq2seq.embed_dim > 0 && c.seq2seq.hidden_dim > 0 && c.seq2seq.batch_size > 0,
        "seq2seq", "dimensions and batch size must be > 0");
  check(c.seq2seq.vocab_size > 13, "seq2seq.vocab_size", "must leave room for words");
  check(c.seq2seq.lr > 0.0 && c.seq2seq.clip > 0.0, "seq2seq", "lr and clip must be > 0");
  check(c.seq2seq.max_source_len > 0, "seq2seq.max_source_len", "must be > 0");
  check(c.seq2seq.generic_persona_rate >= 0.0 && c.seq2seq.generic_persona_rate <= 1.0,
        "seq2seq.generic_persona_rate", "must be in [0, 1]");
  check(c.persona.boost_threshold > 0.0 && c.persona.boost_threshold <= 1.0,
        "persona.boost_threshold", "must be in (0, 1]");
  check(c.persona.lr > 0.0 && c.persona.batch_size > 0, "persona",
        "lr and batch size must be > 0");
  check(c.signals.business_start_hour >= 0 &&
            c.signals.business_start_hour < c.signals.business_end_hour &&
            c.signals.business_end_hour <= 24,
        "signals", "business hours must satisfy 0 <= start < end <= 24");
  check(c.signals.busy_hours > 0.0, "signals.busy_hours", "must be > 0");
  check(c.suggest.k > 0 && c.suggest.k <= c.suggest.beam_width, "suggest",
        "k must be in [1, beam_width]");
  check(c.eval.variance_requests > 0, "eval.variance_requests", "must be > 0");
}

PipelineConfig parse_config(std::string_view text) {
  PipelineConfig config;
  std::set<std::string, std::less<>> seen;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = "config line " + std::to_string(line_no) + ": ";
    const auto eq = line.find('=');
    require(eq != std::string_view::npos, ErrorCode::kParse, where + "expected key = value");
    const std::string_view key = trim(line.substr(0, eq));
    require(!key.empty(), ErrorCode::kParse, where + "missing key");
    require(seen.insert(std::string(key)).second, ErrorCode::kParse,
            where + "duplicate key '" + std::string(key) + "'");
    try {
      set_value(config, key, line.substr(eq + 1));
    } catch (const Error& e) {
      fail(e.code(), where + e.what());
    }
  }
  validate(config);
  return config;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  try {
    return parse_config(read_file(path));
  } catch (const Error& e) {
    fail(e.code(), path.string() + ": " + e.what());
  }
}

std::string serialize_config(const PipelineConfig& config) {
  std::string out;
  for (const std::string& key : config_keys()) {
    out += key + " = " + get_value(config, key) + "\n";
  }
  return out;
}

std::string config_hash(const PipelineConfig& config) {
  PipelineConfig unseeded = config;
  unseeded.seed = 0;
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(nn::fnv1a64(serialize_config(unseeded))));
  return buf;
}

bool operator==(const PipelineConfig& a, const PipelineConfig& b) {
  return serialize_config(a) == serialize_config(b);
}

}  // namespace preply::pipeline
