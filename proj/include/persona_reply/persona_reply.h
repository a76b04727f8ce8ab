#ifndef PERSONA_REPLY_PERSONA_REPLY_H_
#define PERSONA_REPLY_PERSONA_REPLY_H_

#include <stddef.h>

#if defined(PREPLY_BUILDING_LIBRARY)
#define PR_API __attribute__((visibility("default")))
#else
#define PR_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pr_status {
  PR_OK = 0,
  PR_ERR_INVALID_ARGUMENT = 1,
  PR_ERR_SHAPE_MISMATCH = 2,
  PR_ERR_IO = 3,
  PR_ERR_PARSE = 4,
  PR_ERR_DATA = 5,
  PR_ERR_STATE = 6,
  PR_ERR_INTERNAL = 99
} pr_status;

/* Pipeline configuration plus an optional progress logger. */
typedef struct pr_config pr_config;

typedef void (*pr_log_fn)(const char* line, void* user_data);

PR_API const char* pr_version(void);
PR_API const char* pr_status_name(pr_status status);

/* Details of the last failure on the calling thread as one JSON object line:
   {"stage": ..., "code": ..., "message": ...}. Empty after a success. The
   pointer stays valid until the next call on the same thread. */
PR_API const char* pr_last_error(void);

/* Strings returned through char** out-parameters are owned by the caller. */
PR_API void pr_string_free(char* s);

PR_API pr_status pr_config_new(pr_config** out);
PR_API pr_status pr_config_load(const char* path, pr_config** out);
PR_API pr_status pr_config_parse(const char* text, pr_config** out);
PR_API void pr_config_free(pr_config* config);
PR_API pr_status pr_config_set(pr_config* config, const char* key, const char* value);
PR_API pr_status pr_config_get(const pr_config* config, const char* key, char** out);
PR_API pr_status pr_config_serialize(const pr_config* config, char** out);
PR_API pr_status pr_config_hash(const pr_config* config, char** out);
/* fn may be NULL to silence logging. */
PR_API pr_status pr_config_set_logger(pr_config* config, pr_log_fn fn, void* user_data);

PR_API pr_status pr_gen(const pr_config* config, const char* out_dir, int force);
PR_API pr_status pr_train(const pr_config* config, const char* data_dir, const char* models_dir);
PR_API pr_status pr_build_user(const pr_config* config, const char* models_dir,
                               const char* user_id);
PR_API pr_status pr_build_all_users(const pr_config* config, const char* models_dir);

typedef struct pr_suggest_args {
  const char* user_id;       /* required */
  const char* email_file;    /* required: one email JSON object */
  const char* calendar_file; /* optional */
  const char* now;           /* optional, YYYY-MM-DDTHH:MM */
  size_t k;                  /* 0 = configured default */
} pr_suggest_args;

/* Writes the suggestion document (JSON) to *json_out. */
PR_API pr_status pr_suggest(const pr_config* config, const char* models_dir,
                            const pr_suggest_args* args, char** json_out);

/* report_path and csv_path may be NULL; json_out may be NULL. */
PR_API pr_status pr_eval(const pr_config* config, const char* models_dir, const char* data_dir,
                         const char* report_path, const char* csv_path, char** json_out);

/* Sentence BLEU over whitespace-separated tokens. */
PR_API pr_status pr_bleu(const char* candidate, const char* const* references, size_t n_refs,
                         double* score);

#ifdef __cplusplus
}
#endif

#endif /* PERSONA_REPLY_PERSONA_REPLY_H_ */
