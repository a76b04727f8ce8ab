#include "persona_reply/persona_reply.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <sstream>
#include <string>
#include <vector>

#include "common/error.h"
#include "eval/eval.h"
#include "json.hpp"
#include "pipeline/config.h"
#include "pipeline/pipeline.h"

struct pr_config {
  preply::pipeline::PipelineConfig config;
  pr_log_fn log = nullptr;
  void* log_user = nullptr;
};

namespace {

thread_local std::string g_last_error;

std::string_view code_name(pr_status s) {
  switch (s) {
    case PR_OK: return "ok";
    case PR_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case PR_ERR_SHAPE_MISMATCH: return "shape_mismatch";
    case PR_ERR_IO: return "io";
    case PR_ERR_PARSE: return "parse";
    case PR_ERR_DATA: return "data";
    case PR_ERR_STATE: return "state";
    case PR_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

pr_status record(pr_status status, std::string_view stage, std::string_view message) {
  nlohmann::ordered_json doc = {{"stage", stage},
                                {"code", code_name(status)},
                                {"message", message}};
  g_last_error = doc.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
  return status;
}

// Every entry point runs its body through here so that no exception crosses
// the C boundary.
template <typename F>
pr_status guarded(std::string_view stage, F&& body) {
  try {
    body();
    g_last_error.clear();
    return PR_OK;
  } catch (const preply::pipeline::StageError& e) {
    return record(static_cast<pr_status>(e.code()), e.stage(), e.what());
  } catch (const preply::Error& e) {
    return record(static_cast<pr_status>(e.code()), stage, e.what());
  } catch (const nlohmann::json::exception& e) {
    return record(PR_ERR_PARSE, stage, e.what());
  } catch (const std::bad_alloc&) {
    return record(PR_ERR_INTERNAL, stage, "out of memory");
  } catch (const std::exception& e) {
    return record(PR_ERR_INTERNAL, stage, e.what());
  } catch (...) {
    return record(PR_ERR_INTERNAL, stage, "unknown failure");
  }
}

void need(const void* p, const char* what) {
  if (p == nullptr) {
    preply::fail(preply::ErrorCode::kInvalidArgument, std::string(what) + " must not be NULL");
  }
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

preply::pipeline::Logger logger_of(const pr_config* c) {
  if (c->log == nullptr) return {};
  return [fn = c->log, user = c->log_user](std::string_view line) {
    const std::string copy(line);
    fn(copy.c_str(), user);
  };
}

std::vector<std::string> split_ws(const char* text) {
  std::istringstream in(text);
  std::vector<std::string> out;
  for (std::string t; in >> t;) out.push_back(t);
  return out;
}

}  // namespace

extern "C" {

const char* pr_version(void) { return "0.1.0"; }

const char* pr_status_name(pr_status status) { return code_name(status).data(); }

const char* pr_last_error(void) { return g_last_error.c_str(); }

void pr_string_free(char* s) { std::free(s); }

pr_status pr_config_new(pr_config** out) {
  return guarded("config", [&] {
    need(out, "out");
    *out = new pr_config{};
  });
}

pr_status pr_config_load(const char* path, pr_config** out) {
  return guarded("config", [&] {
    need(path, "path");
    need(out, "out");
    *out = new pr_config{preply::pipeline::load_config(path)};
  });
}

pr_status pr_config_parse(const char* text, pr_config** out) {
  return guarded("config", [&] {
    need(text, "text");
    need(out, "out");
    *out = new pr_config{preply::pipeline::parse_config(text)};
  });
}

void pr_config_free(pr_config* config) { delete config; }

pr_status pr_config_set(pr_config* config, const char* key, const char* value) {
  return guarded("config", [&] {
    need(config, "config");
    need(key, "key");
    need(value, "value");
    preply::pipeline::PipelineConfig next = config->config;
    preply::pipeline::set_value(next, key, value);
    preply::pipeline::validate(next);
    config->config = std::move(next);
  });
}

pr_status pr_config_get(const pr_config* config, const char* key, char** out) {
  return guarded("config", [&] {
    need(config, "config");
    need(key, "key");
    need(out, "out");
    *out = dup(preply::pipeline::get_value(config->config, key));
  });
}

pr_status pr_config_serialize(const pr_config* config, char** out) {
  return guarded("config", [&] {
    need(config, "config");
    need(out, "out");
    *out = dup(preply::pipeline::serialize_config(config->config));
  });
}

pr_status pr_config_hash(const pr_config* config, char** out) {
  return guarded("config", [&] {
    need(config, "config");
    need(out, "out");
    *out = dup(preply::pipeline::config_hash(config->config));
  });
}

pr_status pr_config_set_logger(pr_config* config, pr_log_fn fn, void* user_data) {
  return guarded("config", [&] {
    need(config, "config");
    config->log = fn;
    config->log_user = user_data;
  });
}

pr_status pr_gen(const pr_config* config, const char* out_dir, int force) {
  return guarded("gen", [&] {
    need(config, "config");
    need(out_dir, "out_dir");
    preply::pipeline::cmd_gen(config->config, out_dir, force != 0, logger_of(config));
  });
}

pr_status pr_train(const pr_config* config, const char* data_dir, const char* models_dir) {
  return guarded("train", [&] {
    need(config, "config");
    need(data_dir, "data_dir");
    need(models_dir, "models_dir");
    preply::pipeline::cmd_train(config->config, data_dir, models_dir, logger_of(config));
  });
}

pr_status pr_build_user(const pr_config* config, const char* models_dir, const char* user_id) {
  return guarded("build-user", [&] {
    need(config, "config");
    need(models_dir, "models_dir");
    need(user_id, "user_id");
    preply::pipeline::cmd_build_user(config->config, models_dir, user_id, logger_of(config));
  });
}

pr_status pr_build_all_users(const pr_config* config, const char* models_dir) {
  return guarded("build-user", [&] {
    need(config, "config");
    need(models_dir, "models_dir");
    preply::pipeline::cmd_build_all_users(config->config, models_dir, logger_of(config));
  });
}

pr_status pr_suggest(const pr_config* config, const char* models_dir, const pr_suggest_args* args,
                     char** json_out) {
  return guarded("suggest", [&] {
    need(config, "config");
    need(models_dir, "models_dir");
    need(args, "args");
    need(args->user_id, "args->user_id");
    need(args->email_file, "args->email_file");
    need(json_out, "json_out");
    preply::pipeline::SuggestRequest req;
    req.user_id = args->user_id;
    req.email_file = args->email_file;
    if (args->calendar_file != nullptr) req.calendar_file = args->calendar_file;
    if (args->now != nullptr) req.now = args->now;
    if (args->k != 0) req.k = args->k;
    const auto doc = preply::pipeline::cmd_suggest(config->config, models_dir, req,
                                                   logger_of(config));
    *json_out = dup(doc.dump(2));
  });
}

pr_status pr_eval(const pr_config* config, const char* models_dir, const char* data_dir,
                  const char* report_path, const char* csv_path, char** json_out) {
  return guarded("eval", [&] {
    need(config, "config");
    need(models_dir, "models_dir");
    need(data_dir, "data_dir");
    std::optional<std::filesystem::path> report;
    std::optional<std::filesystem::path> csv;
    if (report_path != nullptr) report = report_path;
    if (csv_path != nullptr) csv = csv_path;
    const auto doc = preply::pipeline::cmd_eval(config->config, models_dir, data_dir, report, csv,
                                                logger_of(config));
    if (json_out != nullptr) *json_out = dup(doc.dump(2));
  });
}

pr_status pr_bleu(const char* candidate, const char* const* references, size_t n_refs,
                  double* score) {
  return guarded("eval", [&] {
    need(candidate, "candidate");
    need(score, "score");
    if (n_refs > 0) need(references, "references");
    std::vector<std::vector<std::string>> refs;
    for (size_t i = 0; i < n_refs; ++i) {
      need(references[i], "references[i]");
      refs.push_back(split_ws(references[i]));
    }
    *score = preply::eval::bleu(split_ws(candidate), refs).score;
  });
}

}  // extern "C"
