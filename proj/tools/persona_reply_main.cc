// persona-reply: command-line front end over the C API.
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "persona_reply/persona_reply.h"

namespace {

struct ConfigDeleter {
  void operator()(pr_config* c) const { pr_config_free(c); }
};
using ConfigPtr = std::unique_ptr<pr_config, ConfigDeleter>;

struct StringDeleter {
  void operator()(char* s) const { pr_string_free(s); }
};
using OwnedString = std::unique_ptr<char, StringDeleter>;

// Errors leave as one JSON line on stderr; the exit code is the status.
int report(pr_status status) {
  if (status == PR_OK) return 0;
  std::cerr << pr_last_error() << '\n';
  return static_cast<int>(status);
}

int usage_error(const std::string& message) {
  nlohmann::ordered_json doc = {{"stage", "cli"}, {"code", "invalid_argument"},
                                {"message", message}};
  std::cerr << doc.dump() << '\n';
  return static_cast<int>(PR_ERR_INVALID_ARGUMENT);
}

void log_line(const char* line, void*) { std::cerr << line << '\n'; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Personalized smart-reply pipeline", "persona-reply"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(pr_version()));

  std::string config_path;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
  app.add_option("--config", config_path, "Config file (key = value lines)");
  app.add_option("--seed", seed, "Override the configured seed");
  app.add_flag("-q,--quiet", quiet, "No progress lines on stderr");

  std::string out_dir;
  bool force = false;
  auto* gen = app.add_subcommand("gen", "Generate the synthetic corpus and calendar fixture");
  gen->add_option("--out", out_dir, "Output data directory")->required();
  gen->add_flag("--force", force, "Write into a non-empty directory");

  std::string data_dir;
  std::string models_dir;
  auto* train = app.add_subcommand("train", "Train triage, extractor and global seq2seq");
  train->add_option("--data", data_dir, "Data directory from gen")->required();
  train->add_option("--models", models_dir, "Models directory")->required();

  std::string user_id;
  bool all_users = false;
  auto* build = app.add_subcommand("build-user", "Build a personalized model");
  build->add_option("--models", models_dir, "Models directory")->required();
  auto* user_opt = build->add_option("--user", user_id, "User id");
  auto* all_opt = build->add_flag("--all", all_users, "Every user in the training data");
  user_opt->excludes(all_opt);

  std::string email_file;
  std::string calendar_file;
  std::string now;
  std::size_t k = 0;
  auto* suggest = app.add_subcommand("suggest", "Suggest replies for one email");
  suggest->add_option("--models", models_dir, "Models directory")->required();
  suggest->add_option("--user", user_id, "Recipient user id")->required();
  suggest->add_option("--email", email_file, "Email JSON object")->required();
  suggest->add_option("--calendar", calendar_file, "Calendar JSON array");
  suggest->add_option("--now", now, "Reference time, YYYY-MM-DDTHH:MM");
  suggest->add_option("-k", k, "Number of suggestions")->check(CLI::PositiveNumber);

  std::string report_path;
  std::string csv_path;
  auto* eval = app.add_subcommand("eval", "Evaluate personalized vs generic models");
  eval->add_option("--models", models_dir, "Models directory")->required();
  eval->add_option("--data", data_dir, "Data directory")->required();
  eval->add_option("--out", report_path, "Report path (default <models>/eval_report.json)");
  eval->add_option("--csv", csv_path, "Also write a per-user CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return usage_error(e.what());
  }

  pr_config* raw = nullptr;
  const pr_status loaded =
      config_path.empty() ? pr_config_new(&raw) : pr_config_load(config_path.c_str(), &raw);
  if (loaded != PR_OK) return report(loaded);
  ConfigPtr config(raw);
  if (seed) {
    if (const pr_status s = pr_config_set(config.get(), "seed", std::to_string(*seed).c_str());
        s != PR_OK) {
      return report(s);
    }
  }
  if (!quiet) pr_config_set_logger(config.get(), log_line, nullptr);

  if (gen->parsed()) return report(pr_gen(config.get(), out_dir.c_str(), force ? 1 : 0));
  if (train->parsed()) {
    return report(pr_train(config.get(), data_dir.c_str(), models_dir.c_str()));
  }
  if (build->parsed()) {
    if (all_users) return report(pr_build_all_users(config.get(), models_dir.c_str()));
    if (user_id.empty()) return usage_error("build-user needs --user or --all");
    return report(pr_build_user(config.get(), models_dir.c_str(), user_id.c_str()));
  }
  if (suggest->parsed()) {
    pr_suggest_args args{};
    args.user_id = user_id.c_str();
    args.email_file = email_file.c_str();
    args.calendar_file = calendar_file.empty() ? nullptr : calendar_file.c_str();
    args.now = now.empty() ? nullptr : now.c_str();
    args.k = k;
    char* json = nullptr;
    const pr_status s = pr_suggest(config.get(), models_dir.c_str(), &args, &json);
    OwnedString owned(json);
    if (s == PR_OK) std::cout << owned.get() << '\n';
    return report(s);
  }
  if (eval->parsed()) {
    const pr_status s = pr_eval(config.get(), models_dir.c_str(), data_dir.c_str(),
                                report_path.empty() ? nullptr : report_path.c_str(),
                                csv_path.empty() ? nullptr : csv_path.c_str(), nullptr);
    return report(s);
  }
  return usage_error("no command given");
}
