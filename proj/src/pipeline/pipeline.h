#ifndef PREPLY_PIPELINE_PIPELINE_H_
#define PREPLY_PIPELINE_PIPELINE_H_

#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "common/error.h"
#include "extractor/extractor.h"
#include "json.hpp"
#include "persona/features.h"
#include "pipeline/config.h"

namespace preply::pipeline {

// An Error tagged with the pipeline stage that raised it ("load", "triage",
// "extractor", "seq2seq", "persona", "suggest", "eval", ...).
class StageError : public Error {
 public:
  StageError(std::string stage, ErrorCode code, const std::string& message)
      : Error(code, message), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

// Progress and diagnostic lines; never part of any output file.
using Logger = std::function<void(std::string_view)>;

// File names inside a data directory.
inline constexpr std::string_view kEmailsFile = "emails.jsonl";
inline constexpr std::string_view kPersonasFile = "personas.json";
inline constexpr std::string_view kCalendarFile = "calendar.json";
inline constexpr std::string_view kSentencesFile = "sentences.jsonl";

// File names inside a models directory.
inline constexpr std::string_view kManifestFile = "manifest.json";
inline constexpr std::string_view kTriageFile = "triage.json";
inline constexpr std::string_view kClassifierFile = "classifier.json";
inline constexpr std::string_view kSeq2SeqFile = "seq2seq.json";
inline constexpr std::string_view kPairsFile = "pairs.json";
inline constexpr std::string_view kUserModelFile = "model.json";
inline constexpr std::string_view kUserProfileFile = "profile.json";
inline constexpr std::string_view kReportFile = "eval_report.json";

// Writes the synthetic corpus, generator personas, calendar fixture and the
// labeled sentence set. Refuses a non-empty out_dir unless `force`.
void cmd_gen(const PipelineConfig& config, const std::filesystem::path& out_dir, bool force,
             const Logger& log = {});

// Triage, sentence classifier, pair extraction with the per-user split,
// persona features and the global seq2seq model, plus a manifest.
void cmd_train(const PipelineConfig& config, const std::filesystem::path& data_dir,
               const std::filesystem::path& models_dir, const Logger& log = {});

// Profile, boosted dataset and fine-tuned model under users/<user_id>/.
void cmd_build_user(const PipelineConfig& config, const std::filesystem::path& models_dir,
                    const std::string& user_id, const Logger& log = {});
// Every user known to the trained pairs, in user_id order.
void cmd_build_all_users(const PipelineConfig& config, const std::filesystem::path& models_dir,
                         const Logger& log = {});
std::vector<std::string> trained_users(const std::filesystem::path& models_dir);

struct SuggestRequest {
  std::string user_id;
  std::filesystem::path email_file;  // one email JSON object
  std::optional<std::filesystem::path> calendar_file;
  std::optional<std::string> now;    // defaults to the email's timestamp
  std::optional<std::size_t> k;      // defaults to suggest.k
};

// {"user_id", "email_id", "requests", "suggestions": [{"text", "logprob",
// "conflict"}...], "reason"}; reason is "triage", "no_request" or
// "no_suggestion" when there are no suggestions, null otherwise.
nlohmann::ordered_json cmd_suggest(const PipelineConfig& config,
                                   const std::filesystem::path& models_dir,
                                   const SuggestRequest& request, const Logger& log = {});

// Writes eval_report.json (to `report_path`, default models_dir) and, when
// given, a flat per-user CSV. Returns the report.
nlohmann::ordered_json cmd_eval(const PipelineConfig& config,
                                const std::filesystem::path& models_dir,
                                const std::filesystem::path& data_dir,
                                const std::optional<std::filesystem::path>& report_path = {},
                                const std::optional<std::filesystem::path>& csv_path = {},
                                const Logger& log = {});

// Pair (de)serialization used by pairs.json.
nlohmann::ordered_json pair_to_json(const extractor::RequestResponsePair& p);
extractor::RequestResponsePair pair_from_json(const nlohmann::json& doc);

struct TrainedPairs {
  std::vector<extractor::RequestResponsePair> train;
  std::vector<extractor::RequestResponsePair> test;
  // Which user each persona came from: itself, or the nearest neighbour
  // when it had fewer than the minimum number of responses.
  std::map<std::string, std::string> persona_source;
  persona::PersonaFeatures generic;
};

TrainedPairs load_pairs(const std::filesystem::path& models_dir);

}  // namespace preply::pipeline

#endif  // PREPLY_PIPELINE_PIPELINE_H_
