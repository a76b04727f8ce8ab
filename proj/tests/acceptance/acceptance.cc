// One PASS/FAIL line per acceptance criterion; exits non-zero if any fails.
// Criteria 6 and 9 share the default-config pipeline run.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "common/datetime.h"
#include "common/error.h"
#include "common/file_util.h"
#include "corpus/corpus.h"
#include "corpus/generator.h"
#include "eval/eval.h"
#include "extractor/extractor.h"
#include "nn/grad_check.h"
#include "nn/layers.h"
#include "nn/sequence.h"
#include "nn/tape.h"
#include "persona/features.h"
#include "pipeline/config.h"
#include "pipeline/pipeline.h"
#include "responder/seq2seq.h"
#include "signals/signals.h"
#include "text/resources.h"
#include "text/textproc.h"
#include "triage/triage.h"

namespace fs = std::filesystem;
using namespace preply;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

// Shared between criteria 6, 7, 8 and 9.
struct DefaultRun {
  fs::path data;
  fs::path models;
  std::optional<nlohmann::ordered_json> report;
};

const fs::path kWork = fs::temp_directory_path() / "preply_acceptance";

void run_pipeline(const pipeline::PipelineConfig& config, const fs::path& root) {
  fs::remove_all(root);
  pipeline::cmd_gen(config, root / "data", false);
  pipeline::cmd_train(config, root / "data", root / "models");
  pipeline::cmd_build_all_users(config, root / "models");
  pipeline::cmd_eval(config, root / "models", root / "data");
}

Outcome gradient_integrity() {
  const auto start = Clock::now();
  double worst = 0.0;
  double weakest_mutation = INFINITY;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    nn::Rng rng(seed);
    nn::EmbeddingTable emb("emb", 7, 3, rng, 0.5);
    nn::LstmParams lstm("lstm", 3, 4, rng, 0.5);
    nn::Dense out("out", 4, 5, rng, 0.5);
    nn::Dense gate("gate", 4, 1, rng, 0.5);
    std::vector<nn::Parameter*> params{&emb.table, &lstm.W, &lstm.U, &lstm.b,
                                       &out.W,     &out.b,  &gate.W, &gate.b};

    std::vector<std::vector<int>> seqs{{1, 4, 2}, {3, 6}, {5}};
    for (auto& s : seqs) {
      for (int& id : s) id = static_cast<int>(rng.below(7));
    }
    const nn::TimeMajorBatch batch = nn::time_major(seqs);
    std::vector<int> targets{static_cast<int>(rng.below(5)), static_cast<int>(rng.below(5)),
                             static_cast<int>(rng.below(5))};

    // Embedding -> LSTM -> dense -> softmax -> cross-entropy, plus
    // dense -> sigmoid -> binary cross-entropy on the same state.
    const nn::LossBuilder loss = [&](nn::Tape& t) {
      const auto hc0 = t.input(nn::Matrix(8, seqs.size()));
      const auto hc = nn::run_lstm(t, lstm, emb.table, batch, hc0);
      const auto h = t.top_rows(hc, 4);
      const auto probs = t.softmax(t.add_bias(t.matmul(t.param(out.W), h), t.param(out.b)));
      const auto p = t.sigmoid(t.add_bias(t.matmul(t.param(gate.W), h), t.param(gate.b)));
      const std::vector<nn::Tape::Var> parts{t.xent(probs, targets, 1.0 / 3.0),
                                             t.bce(p, {1.0, 0.0, 1.0}, 1.0 / 3.0)};
      return t.sum(parts);
    };
    worst = std::max(worst, nn::grad_check(loss, params, rng));

    nn::GradCheckOptions mutated;
    mutated.tamper = [](std::span<nn::Parameter* const> ps) {
      for (nn::Parameter* p : ps) {
        for (double& g : p->grad.data()) g *= 2.0;
      }
    };
    weakest_mutation = std::min(weakest_mutation, nn::grad_check(loss, params, rng, mutated));
  }
  const double elapsed = seconds_since(start);
  return {worst < 1e-4 && weakest_mutation >= 1e-4 && elapsed < 60.0,
          fmt("max rel err %.3g over 10 seeds; doubled gradients give >= %.3g; %.1fs", worst,
              weakest_mutation, elapsed)};
}

Outcome triage_accuracy() {
  const auto start = Clock::now();
  const pipeline::PipelineConfig config = pipeline::default_config();
  const nn::Rng root(config.seed);
  nn::Rng corpus_rng = root.fork("corpus");
  const auto emails = corpus::generate_corpus(
      corpus::default_personas(config.corpus.personas), config.corpus.threads_per_user, corpus_rng);
  std::vector<triage::Example> data;
  for (const auto& t : corpus::build_threads(emails)) {
    data.emplace_back(triage::featurize(*t.request, text::default_dictionary()),
                      triage::label_email(*t.request, t.reply));
  }
  nn::Rng rng = root.fork("triage");
  nn::Rng balance_rng = rng.fork("balance");
  nn::Rng split_rng = rng.fork("split");
  auto [train, test] = corpus::split_80_20(triage::balance(std::move(data), balance_rng), split_rng);

  std::map<double, double> norms;
  triage::TriageModel model;
  for (double lambda : {1.0, 0.1, 0.0}) {
    nn::Rng train_rng = rng.fork("train");
    triage::TriageOptions opts = config.triage;
    opts.lambda = lambda;
    auto m = triage::train_triage(train, opts, train_rng);
    norms[lambda] = m.l2_norm();
    if (lambda == config.triage.lambda) model = std::move(m);
  }
  std::size_t correct = 0;
  for (const auto& [f, y] : test) {
    correct += (triage::predict_triage(model, f) >= 0.5) == (y == triage::Label::kPositive);
  }
  const double acc = static_cast<double>(correct) / static_cast<double>(test.size());
  const bool monotone = norms[1.0] <= norms[0.1] && norms[0.1] <= norms[0.0];
  const double elapsed = seconds_since(start);
  return {acc >= 0.95 && monotone && elapsed < 30.0,
          fmt("%zu emails, held-out acc %.4f on %zu; |w| %.3f <= %.3f <= %.3f; %.1fs",
              emails.size(), acc, test.size(), norms[1.0], norms[0.1], norms[0.0], elapsed)};
}

Outcome sentence_classifier() {
  const auto start = Clock::now();
  nn::Rng rng(7);
  nn::Rng data_rng = rng.fork("sentences");
  nn::Rng split_rng = rng.fork("split");
  nn::Rng train_rng = rng.fork("train");
  auto [train, test] =
      corpus::split_80_20(corpus::generate_labeled_sentences(1000, data_rng), split_rng);
  const extractor::ClassifierOptions opts;  // batch 64, dropout 0.2, 3 epochs
  const auto model = extractor::train_sentence_classifier(train, opts, train_rng);
  std::vector<text::Tokens> tokens;
  for (const auto& s : test) tokens.push_back(text::tokenize(s.text));
  const auto probs = extractor::classify_batch(model, tokens);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) correct += (probs[i] >= 0.5) == (test[i].label == 1);
  const double acc = static_cast<double>(correct) / static_cast<double>(probs.size());
  const double elapsed = seconds_since(start);
  return {acc >= 0.9 && elapsed < 120.0 && opts.batch_size == 64 && opts.dropout == 0.2 &&
              opts.epochs == 3,
          fmt("held-out acc %.4f on %zu sentences; %.1fs", acc, probs.size(), elapsed)};
}

Outcome memorization() {
  const auto start = Clock::now();
  nn::Rng rng(11);
  nn::Rng corpus_rng = rng.fork("corpus");
  const auto emails = corpus::generate_corpus(corpus::default_personas(10), 40, corpus_rng);
  const auto& dict = text::default_dictionary();
  std::vector<extractor::RequestResponsePair> pairs;
  std::set<text::Tokens> seen;
  for (const auto& t : corpus::build_threads(emails)) {
    if (t.reply == nullptr ||
        triage::label_email(*t.request, t.reply) != triage::Label::kPositive) {
      continue;
    }
    extractor::RequestResponsePair p;
    const auto sentences = text::split_sentences(text::strip_boilerplate(t.request->body));
    if (sentences.empty()) continue;
    p.request = text::filter_dictionary(text::tokenize(sentences.back()), dict);
    p.response = text::preprocess(t.reply->body, dict);
    if (p.request.empty() || p.response.empty() || !seen.insert(p.request).second) continue;
    pairs.push_back(std::move(p));
    if (pairs.size() == 50) break;
  }
  if (pairs.size() < 50) return {false, fmt("only %zu distinct pairs available", pairs.size())};

  responder::Seq2SeqOptions opts;
  opts.lr = 1.0;
  opts.halve_every = 0;
  opts.batch_size = 64;
  nn::Rng init_rng = rng.fork("init");
  nn::Rng fit_rng = rng.fork("fit");
  auto model = responder::init_model(responder::build_pair_vocab(pairs, opts.vocab_size), opts,
                                     init_rng);
  constexpr std::size_t kChunk = 25;
  std::size_t epochs = 0;
  double exact = 0.0;
  double mean_bleu = 0.0;
  while (epochs < 500) {
    opts.epochs = kChunk;
    responder::fit(model, pairs, opts, fit_rng);
    epochs += kChunk;
    std::size_t hits = 0;
    double total = 0.0;
    for (const auto& p : pairs) {
      const auto out = responder::greedy_decode(model, p.request, p.persona).tokens;
      hits += out == p.response;
      total += out.empty() ? 0.0 : eval::bleu(out, std::vector<text::Tokens>{p.response}).score;
    }
    exact = static_cast<double>(hits) / static_cast<double>(pairs.size());
    mean_bleu = total / static_cast<double>(pairs.size());
    if (exact >= 0.9 && mean_bleu >= 0.95) break;
  }
  const double elapsed = seconds_since(start);
  return {exact >= 0.9 && mean_bleu >= 0.95 && elapsed < 300.0,
          fmt("exact match %.2f, mean BLEU %.4f after %zu epochs; %.1fs", exact, mean_bleu, epochs,
              elapsed)};
}

Outcome bleu_oracle() {
  using text::Tokens;
  struct Fixture {
    Tokens candidate;
    std::vector<Tokens> refs;
    double expected;
  };
  const std::vector<Fixture> fixtures{
      {{"see", "you", "friday"}, {{"see", "you", "friday"}}, 1.0},
      {{"the", "the", "the", "the"}, {{"the", "cat"}}, 0.31947155212313627},
      {{"see", "you"}, {{"see", "you", "friday"}}, std::exp(-0.5)},
      {{"sounds", "good", "see", "you", "friday"},
       {{"sounds", "good", "see", "you", "monday"}},
       0.7521206186172787},
      {{"ok", "see", "you", "then"},
       {{"ok", "see", "you"}, {"see", "you", "then", "ok", "bye"}},
       0.8408964152537145},
  };
  double worst = 0.0;
  for (const auto& f : fixtures) {
    worst = std::max(worst, std::abs(eval::bleu(f.candidate, f.refs).score - f.expected));
  }
  const auto clip = eval::bleu(fixtures[1].candidate, fixtures[1].refs);
  const auto bp = eval::bleu(fixtures[2].candidate, fixtures[2].refs);
  const bool parts = clip.precisions[0] == 0.25 &&
                     std::abs(bp.brevity_penalty - std::exp(-0.5)) < 1e-12;
  return {worst <= 1e-9 && parts, fmt("max |error| %.3g over 5 fixtures", worst)};
}

Outcome personalization(DefaultRun& run) {
  const auto start = Clock::now();
  const pipeline::PipelineConfig config = pipeline::default_config();
  run.data = kWork / "default_a" / "data";
  run.models = kWork / "default_a" / "models";
  run_pipeline(config, kWork / "default_a");
  const auto report =
      nlohmann::ordered_json::parse(read_file(run.models / pipeline::kReportFile));
  run.report = report;

  const auto personas = corpus::personas_from_json(
      nlohmann::json::parse(read_file(run.data / pipeline::kPersonasFile)));
  std::map<std::string, corpus::Verbosity> verbosity;
  for (const auto& p : personas) verbosity[p.name] = p.verbosity;
  double terse_max = -INFINITY;
  double verbose_min = INFINITY;
  std::size_t n_users = 0;
  std::size_t improved = 0;
  for (const auto& u : report["users"]) {
    const double len = u["mean_length_personalized"].get<double>();
    const auto v = verbosity.at(u["user_id"].get<std::string>());
    if (v == corpus::Verbosity::kTerse) terse_max = std::max(terse_max, len);
    if (v == corpus::Verbosity::kVerbose) verbose_min = std::min(verbose_min, len);
    ++n_users;
    improved += u["bleu_personalized"].get<double>() >= u["bleu_generic"].get<double>();
  }
  const double var_p = report["variance"]["var_personalized"].get<double>();
  const double var_g = report["variance"]["var_generic"].get<double>();
  const std::size_t n_requests = report["variance"]["n_requests"].get<std::size_t>();
  const double frac = static_cast<double>(improved) / static_cast<double>(n_users);
  const bool a = terse_max < verbose_min && n_requests >= 100;
  const bool b = n_users >= 8 && frac >= 0.7;
  const bool c = var_p > var_g && var_g == 0.0;
  return {a && b && c,
          fmt("(a) terse <= %.2f < verbose >= %.2f tokens on %zu requests; (b) %zu/%zu users "
              "personalized >= generic; (c) var %.3f vs %.3g; %.0fs",
              terse_max, verbose_min, n_requests, improved, n_users, var_p, var_g,
              seconds_since(start))};
}

Outcome signals_determinism(const DefaultRun& run) {
  using responder::ScoredResponse;
  const auto calendar = signals::parse_calendar(corpus::calendar_fixture());
  const Timestamp now = parse_timestamp(corpus::kFixtureNow);
  const std::vector<std::string> pool{"see you friday", "sorry i can't make it", "ok",
                                      "let's meet tomorrow", "friday works for me", "thanks",
                                      "meeting today is fine", "see you monday"};
  nn::Rng rng(3);
  auto random_list = [&] {
    std::vector<ScoredResponse> list;
    const auto n = rng.below(9);
    for (std::uint64_t i = 0; i < n; ++i) {
      list.push_back({text::tokenize(pool[rng.below(pool.size())]), -rng.uniform(0.0, 10.0)});
    }
    return list;
  };

  bool identity = true;
  for (int i = 0; i < 1000; ++i) {
    const auto list = random_list();
    identity = identity && signals::rerank(list, {}, now) == list;
  }
  bool stable = true;
  for (int i = 0; i < 1000; ++i) {
    const auto list = random_list();
    const auto out = signals::rerank(list, calendar, now);
    std::vector<ScoredResponse> ok, bad;
    for (const auto& r : list) {
      (signals::response_conflicts(r.tokens, calendar, now) ? bad : ok).push_back(r);
    }
    ok.insert(ok.end(), bad.begin(), bad.end());
    stable = stable && out == ok;
  }

  const std::vector<ScoredResponse> fixture{{text::tokenize("see you friday"), -0.5},
                                            {text::tokenize("sorry i can't make it"), -1.5}};
  const auto fixed = signals::rerank(fixture, calendar, now);
  const bool demoted = fixed.size() == 2 && fixed[0] == fixture[1] && fixed[1] == fixture[0] &&
                       signals::rerank(fixture, calendar, now) == fixed;

  // The same through the suggest command with --now pinned.
  bool pinned = true;
  std::string pinned_note = "suggest not checked";
  if (run.report) {
    const fs::path email = kWork / "friday_email.json";
    write_file(email, nlohmann::ordered_json{{"id", "fixture-1"},
                                             {"from", "colleague@example.com"},
                                             {"to", {"user@example.com"}},
                                             {"recipient_type", "work"},
                                             {"subject", "Friday"},
                                             {"body", "Hi,\nCan we meet on Friday?\nThanks"},
                                             {"in_reply_to", nullptr},
                                             {"timestamp", "2023-12-01T08:00"}}
                          .dump());
    const auto users = pipeline::trained_users(run.models);
    pipeline::SuggestRequest req{users.front(), email, run.data / pipeline::kCalendarFile,
                                 std::string(corpus::kFixtureNow), std::nullopt};
    const auto config = pipeline::default_config();
    const auto first = pipeline::cmd_suggest(config, run.models, req).dump();
    const auto second = pipeline::cmd_suggest(config, run.models, req).dump();
    pinned = first == second;
    pinned_note = pinned ? "suggest repeatable" : "suggest output differs";
  }
  return {identity && stable && demoted && pinned,
          fmt("identity %s, stable partition %s, booked friday demoted %s, %s",
              identity ? "ok" : "broken", stable ? "ok" : "broken", demoted ? "yes" : "no",
              pinned_note.c_str())};
}

Outcome beam_greedy(const DefaultRun& run) {
  if (!run.report) return {false, "needs the trained global model from criterion 6"};
  const auto model = responder::load(run.models / pipeline::kSeq2SeqFile);
  nn::Rng rng(17);
  std::size_t mismatches = 0;
  for (int i = 0; i < 100; ++i) {
    text::Tokens request(1 + rng.below(12));
    for (auto& t : request) {
      // Ordinary vocabulary only: skip the reserved and persona ids.
      std::string tok;
      do {
        tok = model.vocab.token(static_cast<int>(responder::kReservedCount +
                                                  rng.below(model.vocab.size() -
                                                            responder::kReservedCount)));
      } while (tok.front() == '<');
      t = tok;
    }
    persona::PersonaFeatures p;
    p.avg_response_length = rng.uniform(0.0, 20.0);
    const double a = rng.uniform();
    const double b = rng.uniform() * (1.0 - a);
    p.polarity_dist = {a, b, 1.0 - a - b};
    p.dominant_degree = static_cast<text::Degree>(rng.below(3));
    const auto beam = responder::nbest(model, request, p, 1, 1);
    const auto greedy = responder::greedy_decode(model, request, p);
    mismatches += beam.size() != 1 || beam[0].tokens != greedy.tokens;
  }
  return {mismatches == 0, fmt("%zu/100 random requests differ", mismatches)};
}

Outcome end_to_end_determinism(const DefaultRun& run) {
  if (!run.report) return {false, "needs the first default run from criterion 6"};
  const auto start = Clock::now();
  run_pipeline(pipeline::default_config(), kWork / "default_b");
  const fs::path other = kWork / "default_b" / "models";
  std::vector<std::string> differing;
  std::size_t compared = 0;
  for (const auto& entry : fs::recursive_directory_iterator(run.models)) {
    if (!entry.is_regular_file()) continue;
    const fs::path rel = fs::relative(entry.path(), run.models);
    ++compared;
    if (!fs::exists(other / rel) || read_file(entry.path()) != read_file(other / rel)) {
      differing.push_back(rel.string());
    }
  }
  for (const auto& entry : fs::recursive_directory_iterator(other)) {
    if (entry.is_regular_file() && !fs::exists(run.models / fs::relative(entry.path(), other))) {
      differing.push_back(fs::relative(entry.path(), other).string());
    }
  }
  std::string first = differing.empty() ? "" : ", first: " + differing.front();
  return {differing.empty() && compared > 5,
          fmt("%zu files compared, %zu differ%s; %.0fs", compared, differing.size(), first.c_str(),
              seconds_since(start))};
}

}  // namespace

int main() {
  fs::create_directories(kWork);
  DefaultRun run;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"gradient integrity", gradient_integrity},
      {"triage accuracy", triage_accuracy},
      {"sentence classifier", sentence_classifier},
      {"seq2seq memorization", memorization},
      {"BLEU oracle", bleu_oracle},
      {"personalization effect", [&] { return personalization(run); }},
      {"signals determinism", [&] { return signals_determinism(run); }},
      {"beam/greedy equivalence", [&] { return beam_greedy(run); }},
      {"end-to-end determinism", [&] { return end_to_end_determinism(run); }},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("criterion %zu %-24s %s  %s\n", i + 1, criteria[i].first.c_str(),
                o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
  }
  fs::remove_all(kWork);
  return failures == 0 ? 0 : 1;
}
