#include "pipeline/pipeline.h"

#include <algorithm>
#include <array>
#include <charconv>
#include <set>
#include <utility>

#include "common/datetime.h"
#include "common/file_util.h"
#include "corpus/corpus.h"
#include "corpus/generator.h"
#include "eval/eval.h"
#include "nn/rng.h"
#include "persona/persona.h"
#include "responder/seq2seq.h"
#include "signals/signals.h"
#include "text/resources.h"
#include "triage/triage.h"

namespace preply::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;
using extractor::RequestResponsePair;

namespace {

inline constexpr std::string_view kManifestFormat = "persona-reply-manifest/1";
inline constexpr std::string_view kReportFormat = "persona-reply-eval/1";

template <typename F>
auto in_stage(std::string_view name, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError(std::string(name), e.code(), e.what());
  } catch (const json::exception& e) {
    throw StageError(std::string(name), ErrorCode::kParse, e.what());
  } catch (const fs::filesystem_error& e) {
    throw StageError(std::string(name), ErrorCode::kIo, e.what());
  }
}

void note(const Logger& log, const std::string& line) {
  if (log) log(line);
}

std::string fmt(double v) {
  std::array<char, 32> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), end);
}

fs::path at(const fs::path& dir, std::string_view name) { return dir / std::string(name); }

fs::path user_dir(const fs::path& models_dir, const std::string& user_id) {
  return models_dir / "users" / user_id;
}

void write_json(const fs::path& path, const ordered_json& doc) {
  write_file(path, doc.dump(2) + "\n");
}

json read_json(const fs::path& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::exception& e) {
    fail(ErrorCode::kParse, path.string() + ": " + e.what());
  }
}

// Refuses to work with models trained under a different configuration.
void check_manifest(const PipelineConfig& config, const fs::path& models_dir) {
  const fs::path path = at(models_dir, kManifestFile);
  require(fs::exists(path), ErrorCode::kState,
          "no manifest in " + models_dir.string() + "; run train first");
  const json manifest = read_json(path);
  require(manifest.value("format", "") == kManifestFormat, ErrorCode::kParse,
          path.string() + ": unknown manifest format");
  const std::string trained = manifest.at("config_hash").get<std::string>();
  const std::string current = config_hash(config);
  require(trained == current, ErrorCode::kState,
          "models were trained under config " + trained + " but the current config is " +
              current + "; pass the same --config used for train");
}

double accuracy(std::size_t correct, std::size_t total) {
  return total == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(total);
}

responder::Seq2SeqOptions fine_tune_options(const PipelineConfig& config) {
  responder::Seq2SeqOptions opts = config.seq2seq;
  opts.lr = config.persona.lr;
  opts.epochs = config.persona.epochs;
  opts.batch_size = config.persona.batch_size;
  opts.halve_every = 0;
  return opts;
}

std::vector<text::Tokens> responses_of(std::span<const RequestResponsePair> pairs) {
  std::vector<text::Tokens> out;
  for (const auto& p : pairs) out.push_back(p.response);
  return out;
}

}  // namespace

ordered_json pair_to_json(const RequestResponsePair& p) {
  return {{"user_id", p.user_id},
          {"recipient_type", corpus::to_string(p.recipient_type)},
          {"request", p.request},
          {"response", p.response},
          {"persona", persona::to_json(p.persona)}};
}

RequestResponsePair pair_from_json(const json& doc) {
  RequestResponsePair p;
  p.user_id = doc.at("user_id").get<std::string>();
  p.recipient_type = corpus::parse_recipient_type(doc.at("recipient_type").get<std::string>());
  p.request = doc.at("request").get<text::Tokens>();
  p.response = doc.at("response").get<text::Tokens>();
  p.persona = persona::features_from_json(doc.at("persona"));
  return p;
}

TrainedPairs load_pairs(const fs::path& models_dir) {
  const json doc = read_json(at(models_dir, kPairsFile));
  TrainedPairs out;
  for (const auto& p : doc.at("train")) out.train.push_back(pair_from_json(p));
  for (const auto& p : doc.at("test")) out.test.push_back(pair_from_json(p));
  out.persona_source = doc.at("persona_source").get<std::map<std::string, std::string>>();
  out.generic = persona::features_from_json(doc.at("generic_persona"));
  return out;
}

void cmd_gen(const PipelineConfig& config, const fs::path& out_dir, bool force,
             const Logger& log) {
  in_stage("gen", [&] {
    validate(config);
    if (fs::exists(out_dir)) {
      require(fs::is_directory(out_dir), ErrorCode::kIo,
              out_dir.string() + " exists and is not a directory");
      require(force || fs::is_empty(out_dir), ErrorCode::kState,
              out_dir.string() + " is not empty; pass --force to overwrite");
    } else {
      fs::create_directories(out_dir);
    }
    const nn::Rng root(config.seed);
    nn::Rng corpus_rng = root.fork("corpus");
    nn::Rng sentence_rng = root.fork("sentences");

    const auto personas = corpus::default_personas(config.corpus.personas);
    const auto emails =
        corpus::generate_corpus(personas, config.corpus.threads_per_user, corpus_rng);
    const auto sentences =
        corpus::generate_labeled_sentences(config.corpus.labeled_sentences, sentence_rng);

    corpus::save_corpus(emails, at(out_dir, kEmailsFile));
    write_json(at(out_dir, kPersonasFile), corpus::personas_to_json(personas));
    write_json(at(out_dir, kCalendarFile), corpus::calendar_fixture());
    write_file(at(out_dir, kSentencesFile), corpus::labeled_sentences_to_jsonl(sentences));
    note(log, "gen: " + std::to_string(emails.size()) + " emails, " +
                  std::to_string(sentences.size()) + " labeled sentences, " +
                  std::to_string(personas.size()) + " personas");
  });
}

void cmd_train(const PipelineConfig& config, const fs::path& data_dir, const fs::path& models_dir,
               const Logger& log) {
  in_stage("config", [&] { validate(config); });
  const text::Dictionary& dict = text::default_dictionary();
  const nn::Rng root(config.seed);

  const auto emails = in_stage("load", [&] {
    return corpus::load_corpus(at(data_dir, kEmailsFile));
  });
  const auto threads = corpus::build_threads(emails);
  in_stage("load", [&] { fs::create_directories(models_dir); });

  ordered_json metrics = ordered_json::object();

  in_stage("triage", [&] {
    std::vector<triage::Example> examples;
    for (const auto& t : threads) {
      examples.emplace_back(triage::featurize(*t.request, dict),
                            triage::label_email(*t.request, t.reply));
    }
    nn::Rng rng = root.fork("triage");
    nn::Rng balance_rng = rng.fork("balance");
    nn::Rng split_rng = rng.fork("split");
    nn::Rng train_rng = rng.fork("train");
    auto [train, test] = corpus::split_80_20(triage::balance(std::move(examples), balance_rng),
                                             split_rng);
    const triage::TriageModel model = triage::train_triage(train, config.triage, train_rng);
    std::size_t correct = 0;
    for (const auto& [features, label] : test) {
      const bool positive = triage::predict_triage(model, features) >= 0.5;
      correct += positive == (label == triage::Label::kPositive);
    }
    metrics["triage_accuracy"] = accuracy(correct, test.size());
    triage::save(model, at(models_dir, kTriageFile));
    note(log, "triage: held-out accuracy " + fmt(accuracy(correct, test.size())) + " on " +
                  std::to_string(test.size()) + " emails");
  });

  const extractor::SentenceClassifier classifier = in_stage("extractor", [&] {
    auto sentences = corpus::parse_labeled_sentences(read_file(at(data_dir, kSentencesFile)));
    nn::Rng rng = root.fork("extractor");
    nn::Rng split_rng = rng.fork("split");
    nn::Rng train_rng = rng.fork("train");
    auto [train, test] = corpus::split_80_20(std::move(sentences), split_rng);
    auto model = extractor::train_sentence_classifier(train, config.extractor, train_rng);
    std::vector<text::Tokens> tokens;
    std::vector<int> labels;
    for (const auto& s : test) {
      text::Tokens t = text::tokenize(s.text);
      if (t.empty()) continue;
      tokens.push_back(std::move(t));
      labels.push_back(s.label);
    }
    const auto probs = extractor::classify_batch(model, tokens);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < probs.size(); ++i) correct += (probs[i] >= 0.5) == (labels[i] == 1);
    metrics["classifier_accuracy"] = accuracy(correct, probs.size());
    extractor::save(model, at(models_dir, kClassifierFile));
    note(log, "extractor: held-out accuracy " + fmt(accuracy(correct, probs.size())) + " on " +
                  std::to_string(probs.size()) + " sentences");
    return model;
  });

  TrainedPairs pairs = in_stage("pairs", [&] {
    std::vector<RequestResponsePair> all;
    for (const auto& t : threads) {
      if (t.reply == nullptr) continue;
      if (triage::label_email(*t.request, t.reply) != triage::Label::kPositive) continue;
      auto extracted = extractor::extract_pairs(classifier, *t.request, *t.reply,
                                                corpus::user_of(t.reply->from), dict);
      for (auto& p : extracted) all.push_back(std::move(p));
    }
    nn::Rng split_rng = root.fork("pairs");
    auto [train, test] = corpus::split_80_20_by<RequestResponsePair>(
        std::move(all), [](const RequestResponsePair& p) { return p.user_id; }, split_rng);
    TrainedPairs out;
    out.train = std::move(train);
    out.test = std::move(test);
    return out;
  });

  in_stage("persona", [&] {
    const text::SentimentLexicon& lex = text::default_lexicon();
    std::map<std::string, std::vector<text::Tokens>> own;
    std::set<std::string> users;
    for (const auto& p : pairs.train) own[p.user_id].push_back(p.response);
    for (const auto& p : pairs.train) users.insert(p.user_id);
    for (const auto& p : pairs.test) users.insert(p.user_id);
    require(!own.empty(), ErrorCode::kData, "no training pairs were extracted");

    pairs.generic = persona::persona_features(responses_of(pairs.train), lex);

    std::vector<persona::UserProfile> eligible;
    std::map<std::string, persona::PersonaFeatures> features;
    for (const auto& [user, responses] : own) {
      if (responses.size() < persona::kMinOwnResponses) continue;
      eligible.push_back(persona::build_profile(user, responses));
      features[user] = persona::persona_features(responses, lex);
      pairs.persona_source[user] = user;
    }
    for (const std::string& user : users) {
      if (features.contains(user)) continue;
      const auto it = own.find(user);
      if (it == own.end() || eligible.empty()) {
        features[user] = pairs.generic;
        pairs.persona_source[user] = "";
        note(log, "persona: user " + user + " has no usable responses; using the generic persona");
        continue;
      }
      const persona::UserMatch match =
          persona::nearest_user(persona::build_profile(user, it->second), eligible);
      features[user] = features.at(match.user_id);
      pairs.persona_source[user] = match.user_id;
      note(log, "persona: user " + user + " has " + std::to_string(it->second.size()) +
                    " responses; persona taken from nearest user " + match.user_id);
    }
    for (auto* set : {&pairs.train, &pairs.test}) {
      for (auto& p : *set) p.persona = features.at(p.user_id);
    }

    ordered_json doc;
    doc["generic_persona"] = persona::to_json(pairs.generic);
    doc["persona_source"] = pairs.persona_source;
    doc["train"] = ordered_json::array();
    doc["test"] = ordered_json::array();
    for (const auto& p : pairs.train) doc["train"].push_back(pair_to_json(p));
    for (const auto& p : pairs.test) doc["test"].push_back(pair_to_json(p));
    write_json(at(models_dir, kPairsFile), doc);
    metrics["pairs_train"] = pairs.train.size();
    metrics["pairs_test"] = pairs.test.size();
    metrics["users"] = users.size();
    note(log, "pairs: " + std::to_string(pairs.train.size()) + " train, " +
                  std::to_string(pairs.test.size()) + " test across " +
                  std::to_string(users.size()) + " users");
  });

  in_stage("seq2seq", [&] {
    nn::Rng rng = root.fork("seq2seq");
    responder::Seq2SeqModel model = responder::init_model(
        responder::build_pair_vocab(pairs.train, config.seq2seq.vocab_size), config.seq2seq, rng);
    model.generic_persona = pairs.generic;
    responder::TrainReport report;
    responder::fit(model, pairs.train, config.seq2seq, rng, &report);
    responder::save(model, at(models_dir, kSeq2SeqFile));
    const double last = report.epoch_loss.empty() ? 0.0 : report.epoch_loss.back();
    metrics["seq2seq_final_loss"] = last;
    note(log, "seq2seq: " + std::to_string(report.epoch_loss.size()) +
                  " epochs, final loss " + fmt(last) + ", vocab " +
                  std::to_string(model.vocab.size()));
  });

  in_stage("manifest", [&] {
    ordered_json manifest;
    manifest["format"] = kManifestFormat;
    manifest["config_hash"] = config_hash(config);
    manifest["seed"] = config.seed;
    ordered_json cfg = ordered_json::object();
    for (const auto& key : config_keys()) cfg[key] = get_value(config, key);
    manifest["config"] = std::move(cfg);
    manifest["metrics"] = metrics;
    manifest["files"] = {kTriageFile, kClassifierFile, kSeq2SeqFile, kPairsFile};
    write_json(at(models_dir, kManifestFile), manifest);
  });
}

std::vector<std::string> trained_users(const fs::path& models_dir) {
  const TrainedPairs pairs = load_pairs(models_dir);
  std::vector<std::string> users;
  for (const auto& [user, source] : pairs.persona_source) users.push_back(user);
  return users;
}

void cmd_build_user(const PipelineConfig& config, const fs::path& models_dir,
                    const std::string& user_id, const Logger& log) {
  in_stage("build-user", [&] {
    check_manifest(config, models_dir);
    const TrainedPairs pairs = load_pairs(models_dir);
    const auto source = pairs.persona_source.find(user_id);
    require(source != pairs.persona_source.end(), ErrorCode::kData,
            "user '" + user_id + "' does not appear in the corpus");

    std::vector<RequestResponsePair> own;
    std::set<text::Tokens> others;
    for (const auto& p : pairs.train) {
      if (p.user_id == user_id) {
        own.push_back(p);
      } else {
        others.insert(p.request);
      }
    }
    require(!own.empty(), ErrorCode::kData, "user '" + user_id + "' has no training pairs");
    if (source->second != user_id) {
      note(log, "build-user: " + user_id + " has fewer than " +
                    std::to_string(persona::kMinOwnResponses) + " responses; persona prior from " +
                    (source->second.empty() ? std::string("the generic persona")
                                            : "nearest user " + source->second));
    }

    const responder::Seq2SeqModel global = responder::load(at(models_dir, kSeq2SeqFile));
    const persona::PersonaFeatures features = own.front().persona;
    const persona::UserProfile profile = persona::build_profile(user_id, responses_of(own));

    const std::vector<text::Tokens> global_requests(others.begin(), others.end());
    std::vector<RequestResponsePair> boosted = persona::boost_dataset(
        own, global_requests, persona::EmbeddingSimilarity(global),
        config.persona.boost_threshold);
    if (config.persona.max_boost_ratio > 0) {
      boosted.resize(std::min(boosted.size(), own.size() * (1 + config.persona.max_boost_ratio)));
    }

    nn::Rng rng = nn::Rng(config.seed).fork("user:" + user_id);
    const responder::Seq2SeqModel model =
        persona::personalize(global, own, boosted, features, fine_tune_options(config), rng);

    const fs::path dir = user_dir(models_dir, user_id);
    fs::create_directories(dir);
    responder::save(model, at(dir, kUserModelFile));
    persona::save_profile(profile, features, at(dir, kUserProfileFile));
    note(log, "build-user: " + user_id + " " + std::to_string(own.size()) + " own pairs, " +
                  std::to_string(boosted.size() - own.size()) + " boosted");
  });
}

void cmd_build_all_users(const PipelineConfig& config, const fs::path& models_dir,
                         const Logger& log) {
  const auto users = in_stage("build-user", [&] {
    check_manifest(config, models_dir);
    return trained_users(models_dir);
  });
  for (const auto& u : users) cmd_build_user(config, models_dir, u, log);
}

ordered_json cmd_suggest(const PipelineConfig& config, const fs::path& models_dir,
                         const SuggestRequest& request, const Logger& log) {
  return in_stage("suggest", [&] {
    check_manifest(config, models_dir);
    const text::Dictionary& dict = text::default_dictionary();
    const corpus::Email email = corpus::email_from_json(read_json(request.email_file));
    const std::size_t k = request.k.value_or(config.suggest.k);
    require(k > 0, ErrorCode::kInvalidArgument, "k must be > 0");

    ordered_json out;
    out["user_id"] = request.user_id;
    out["email_id"] = email.id;
    out["requests"] = ordered_json::array();
    out["suggestions"] = ordered_json::array();
    out["reason"] = nullptr;

    const fs::path dir = user_dir(models_dir, request.user_id);
    require(fs::exists(at(dir, kUserModelFile)), ErrorCode::kState,
            "no model for user '" + request.user_id + "'; run build-user first");

    const triage::TriageModel gate = triage::load(at(models_dir, kTriageFile));
    if (triage::predict_triage(gate, email, dict) < 0.5) {
      out["reason"] = "triage";
      return out;
    }
    const auto classifier = extractor::load(at(models_dir, kClassifierFile));
    std::vector<text::Tokens> requests;
    text::Tokens context;
    for (const std::string& sentence : extractor::extract_requests(classifier, email)) {
      text::Tokens tokens = text::filter_dictionary(text::tokenize(sentence), dict);
      if (tokens.empty()) continue;
      out["requests"].push_back(sentence);
      context.insert(context.end(), tokens.begin(), tokens.end());
      requests.push_back(std::move(tokens));
    }
    if (requests.empty()) {
      out["reason"] = "no_request";
      return out;
    }

    const responder::Seq2SeqModel model = responder::load(at(dir, kUserModelFile));
    const persona::PersonaFeatures features = persona::load_profile(at(dir, kUserProfileFile)).second;
    // One spare candidate per request in case the empty reply is among the
    // top k; an empty suggestion is never shown.
    const std::size_t want = k + 1;
    const std::size_t beam = std::max(config.suggest.beam_width, want);

    // Best score per distinct response across all requests of the email.
    std::map<text::Tokens, double> best;
    for (const auto& r : requests) {
      for (const auto& s : responder::nbest(model, r, features, beam, want)) {
        if (s.tokens.empty()) continue;
        auto [it, inserted] = best.emplace(s.tokens, s.logprob);
        if (!inserted) it->second = std::max(it->second, s.logprob);
      }
    }
    std::vector<responder::ScoredResponse> ranked;
    for (const auto& [tokens, logprob] : best) ranked.push_back({tokens, logprob});
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.logprob > b.logprob; });
    if (ranked.size() > k) ranked.resize(k);
    if (ranked.empty()) {
      out["reason"] = "no_suggestion";
      return out;
    }

    std::vector<signals::CalendarEvent> calendar;
    if (request.calendar_file) calendar = signals::load_calendar(*request.calendar_file);
    const Timestamp now = parse_timestamp(request.now.value_or(email.timestamp));
    ranked = signals::rerank(ranked, calendar, now, config.signals, &context);

    for (const auto& r : ranked) {
      const bool conflict = !calendar.empty() && signals::response_conflicts(
                                                     r.tokens, calendar, now, config.signals,
                                                     &context);
      out["suggestions"].push_back(
          {{"text", text::join(r.tokens)}, {"logprob", r.logprob}, {"conflict", conflict}});
    }
    note(log, "suggest: " + std::to_string(requests.size()) + " requests, " +
                  std::to_string(ranked.size()) + " suggestions");
    return out;
  });
}

ordered_json cmd_eval(const PipelineConfig& config, const fs::path& models_dir,
                      const fs::path& data_dir, const std::optional<fs::path>& report_path,
                      const std::optional<fs::path>& csv_path, const Logger& log) {
  return in_stage("eval", [&] {
    check_manifest(config, models_dir);
    require(fs::exists(at(data_dir, kEmailsFile)), ErrorCode::kIo,
            "no " + std::string(kEmailsFile) + " in " + data_dir.string());
    const TrainedPairs pairs = load_pairs(models_dir);
    require(!pairs.test.empty(), ErrorCode::kData, "no held-out pairs to evaluate");
    const responder::Seq2SeqModel global = responder::load(at(models_dir, kSeq2SeqFile));

    std::map<std::string, std::vector<RequestResponsePair>> by_user;
    for (const auto& p : pairs.test) by_user[p.user_id].push_back(p);

    std::vector<text::Tokens> shared;
    for (const auto& p : pairs.test) {
      if (shared.size() == config.eval.variance_requests) break;
      shared.push_back(p.request);
    }

    ordered_json users = ordered_json::array();
    std::vector<std::pair<corpus::RecipientType, double>> rt_personal;
    std::vector<std::pair<corpus::RecipientType, double>> rt_generic;
    std::vector<std::vector<text::Tokens>> out_personal;
    std::vector<std::vector<text::Tokens>> out_generic;
    double sum_p = 0.0;
    double sum_g = 0.0;
    std::size_t improved = 0;
    std::string csv = "user_id,n_test,bleu_personalized,bleu_generic,"
                      "mean_length_personalized,mean_length_generic\n";

    for (const auto& [user, test] : by_user) {
      const fs::path model_path = at(user_dir(models_dir, user), kUserModelFile);
      require(fs::exists(model_path), ErrorCode::kState,
              "no personalized model for user '" + user + "'; run build-user first");
      const responder::Seq2SeqModel personal = responder::load(model_path);
      const persona::PersonaFeatures& features = test.front().persona;

      const eval::UserEvaluation p = eval::evaluate_user(personal, test);
      const eval::UserEvaluation g = eval::evaluate_user(global, test, &pairs.generic);
      for (std::size_t i = 0; i < test.size(); ++i) {
        rt_personal.emplace_back(test[i].recipient_type, p.scores[i]);
        rt_generic.emplace_back(test[i].recipient_type, g.scores[i]);
      }

      std::vector<text::Tokens> dec_p;
      std::vector<text::Tokens> dec_g;
      for (const auto& r : shared) {
        dec_p.push_back(responder::greedy_decode(personal, r, features).tokens);
        dec_g.push_back(responder::greedy_decode(global, r, pairs.generic).tokens);
      }
      const double len_p = eval::mean_length(dec_p);
      const double len_g = eval::mean_length(dec_g);
      out_personal.push_back(std::move(dec_p));
      out_generic.push_back(std::move(dec_g));

      sum_p += p.mean;
      sum_g += g.mean;
      improved += p.mean >= g.mean;
      users.push_back({{"user_id", user},
                       {"n_test", test.size()},
                       {"persona_length", text::to_string(persona::length_bucket(features))},
                       {"bleu_personalized", p.mean},
                       {"bleu_generic", g.mean},
                       {"mean_length_personalized", len_p},
                       {"mean_length_generic", len_g}});
      csv += user + "," + std::to_string(test.size()) + "," + fmt(p.mean) + "," + fmt(g.mean) +
             "," + fmt(len_p) + "," + fmt(len_g) + "\n";
      note(log, "eval: " + user + " personalized " + fmt(p.mean) + " generic " + fmt(g.mean));
    }

    ordered_json report;
    report["format"] = kReportFormat;
    report["config_hash"] = config_hash(config);
    report["seed"] = config.seed;
    report["n_users"] = by_user.size();
    report["users"] = std::move(users);
    report["recipient_types"] = {{"personalized", eval::recipient_breakdown(rt_personal)},
                                 {"generic", eval::recipient_breakdown(rt_generic)}};
    ordered_json variance = {{"n_requests", shared.size()}};
    if (by_user.size() >= 2) {
      const auto v = eval::cross_user_variance(out_personal, out_generic);
      variance["var_personalized"] = v.var_personalized;
      variance["var_generic"] = v.var_generic;
    } else {
      variance["var_personalized"] = nullptr;
      variance["var_generic"] = nullptr;
    }
    report["variance"] = std::move(variance);
    const double n = static_cast<double>(by_user.size());
    report["summary"] = {{"mean_bleu_personalized", sum_p / n},
                         {"mean_bleu_generic", sum_g / n},
                         {"users_personalized_ge_generic", improved}};

    write_json(report_path.value_or(at(models_dir, kReportFile)), report);
    if (csv_path) write_file(*csv_path, csv);
    return report;
  });
}

}  // namespace preply::pipeline
