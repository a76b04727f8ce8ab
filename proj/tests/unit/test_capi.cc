// Exercises the shared library through its C header only.
#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "persona_reply/persona_reply.h"

namespace {

std::string take(char* s) {
  std::string out = s == nullptr ? "" : s;
  pr_string_free(s);
  return out;
}

nlohmann::json last_error() { return nlohmann::json::parse(pr_last_error()); }

}  // namespace

TEST_CASE("version and status names") {
  CHECK(std::strlen(pr_version()) > 0);
  CHECK(std::string(pr_status_name(PR_OK)) == "ok");
  CHECK(std::string(pr_status_name(PR_ERR_PARSE)) != std::string(pr_status_name(PR_ERR_IO)));
}

TEST_CASE("config handle") {
  pr_config* cfg = nullptr;
  REQUIRE(pr_config_new(&cfg) == PR_OK);
  CHECK(std::string(pr_last_error()).empty());

  char* value = nullptr;
  REQUIRE(pr_config_get(cfg, "seed", &value) == PR_OK);
  CHECK(take(value) == "42");
  CHECK(pr_config_set(cfg, "suggest.k", "4") == PR_OK);
  REQUIRE(pr_config_get(cfg, "suggest.k", &value) == PR_OK);
  CHECK(take(value) == "4");

  CHECK(pr_config_set(cfg, "no.such.key", "1") == PR_ERR_INVALID_ARGUMENT);
  const auto err = last_error();
  CHECK(err.contains("stage"));
  CHECK(err["code"] == "invalid_argument");
  CHECK(err["message"].get<std::string>().find("no.such.key") != std::string::npos);
  CHECK(pr_config_set(cfg, "suggest.k", "0") != PR_OK);
  REQUIRE(pr_config_get(cfg, "suggest.k", &value) == PR_OK);
  CHECK(take(value) == "4");

  char* text = nullptr;
  REQUIRE(pr_config_serialize(cfg, &text) == PR_OK);
  const std::string serialized = take(text);
  pr_config* copy = nullptr;
  REQUIRE(pr_config_parse(serialized.c_str(), &copy) == PR_OK);
  char* h1 = nullptr;
  char* h2 = nullptr;
  REQUIRE(pr_config_hash(cfg, &h1) == PR_OK);
  REQUIRE(pr_config_hash(copy, &h2) == PR_OK);
  CHECK(take(h1) == take(h2));

  pr_config* bad = nullptr;
  CHECK(pr_config_parse("seed = x\n", &bad) == PR_ERR_PARSE);
  CHECK(bad == nullptr);
  CHECK(pr_config_load("/nonexistent/preply.conf", &bad) == PR_ERR_IO);

  pr_config_free(copy);
  pr_config_free(cfg);
  pr_config_free(nullptr);
}

TEST_CASE("null arguments are rejected") {
  CHECK(pr_config_new(nullptr) == PR_ERR_INVALID_ARGUMENT);
  CHECK(pr_config_set(nullptr, "seed", "1") == PR_ERR_INVALID_ARGUMENT);
  CHECK(pr_gen(nullptr, "/tmp/x", 0) == PR_ERR_INVALID_ARGUMENT);
  double score = -1.0;
  CHECK(pr_bleu(nullptr, nullptr, 0, &score) == PR_ERR_INVALID_ARGUMENT);
  pr_config* cfg = nullptr;
  REQUIRE(pr_config_new(&cfg) == PR_OK);
  CHECK(pr_suggest(cfg, "/tmp", nullptr, nullptr) == PR_ERR_INVALID_ARGUMENT);
  pr_suggest_args args{};
  char* out = nullptr;
  CHECK(pr_suggest(cfg, "/tmp", &args, &out) == PR_ERR_INVALID_ARGUMENT);
  CHECK(out == nullptr);
  pr_config_free(cfg);
}

TEST_CASE("pipeline errors carry their stage") {
  pr_config* cfg = nullptr;
  REQUIRE(pr_config_new(&cfg) == PR_OK);
  const auto empty = std::filesystem::temp_directory_path() / "preply_capi_empty";
  std::filesystem::create_directories(empty);
  CHECK(pr_train(cfg, empty.c_str(), (empty / "models").c_str()) == PR_ERR_IO);
  CHECK(last_error()["stage"] == "load");
  CHECK(pr_build_user(cfg, empty.c_str(), "alice") == PR_ERR_STATE);
  std::filesystem::remove_all(empty);
  pr_config_free(cfg);
}

TEST_CASE("pr_bleu") {
  double score = 0.0;
  const char* refs[] = {"sounds good see you monday"};
  REQUIRE(pr_bleu("sounds good see you friday", refs, 1, &score) == PR_OK);
  CHECK(std::abs(score - 0.7521206186172787) < 1e-9);
  const char* two[] = {"ok see you", "see you then ok bye"};
  REQUIRE(pr_bleu("ok see you then", two, 2, &score) == PR_OK);
  CHECK(std::abs(score - 0.8408964152537145) < 1e-9);
  CHECK(pr_bleu("", refs, 1, &score) == PR_ERR_INVALID_ARGUMENT);
  CHECK(pr_bleu("a", refs, 0, &score) == PR_ERR_INVALID_ARGUMENT);
}
