#include <algorithm>
#include <cmath>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "common/error.h"
#include "doctest.h"
#include "extractor/extractor.h"
#include "persona/features.h"
#include "responder/seq2seq.h"
#include "responder/vocab.h"
#include "text/textproc.h"

using namespace preply;
using namespace preply::responder;
using extractor::RequestResponsePair;

namespace {

std::vector<RequestResponsePair> toy_pairs() {
  const std::vector<std::pair<const char*, const char*>> raw{
      {"can we meet on friday", "sure see you friday"},
      {"are you free tomorrow", "yes i am free"},
      {"did you get the report", "got it thanks"},
      {"can you call me", "will call soon"},
      {"lunch on monday", "sounds great"},
      {"is the deck ready", "not yet sorry"},
  };
  std::vector<RequestResponsePair> out;
  for (const auto& [q, a] : raw) {
    RequestResponsePair p;
    p.request = text::tokenize(q);
    p.response = text::tokenize(a);
    p.user_id = "u";
    out.push_back(std::move(p));
  }
  return out;
}

Seq2SeqOptions tiny() {
  Seq2SeqOptions o;
  o.embed_dim = 8;
  o.hidden_dim = 16;
  o.vocab_size = 200;
  o.epochs = 3;
  return o;
}

Seq2SeqModel trained_toy(std::size_t epochs, std::uint64_t seed = 1) {
  auto opts = tiny();
  opts.epochs = epochs;
  opts.batch_size = 2;
  opts.lr = 1.0;
  opts.halve_every = 0;
  nn::Rng rng(seed);
  return train_seq2seq(toy_pairs(), opts, rng);
}

}  // namespace

TEST_CASE("build_vocab") {
  const std::vector<text::Tokens> seqs{{"a", "b", "c"}};
  const Vocab v = build_vocab(seqs, 10);
  CHECK(v.size() == 7);
  CHECK(v.token(kPad) == "<pad>");
  CHECK(v.token(kEos) == "<eos>");
  CHECK(v.id("zzz") == kUnk);

  const std::vector<text::Tokens> tie{{"b", "a"}};
  const Vocab one = build_vocab(tie, 5);
  CHECK(one.size() == 5);
  CHECK(one.contains("a"));
  CHECK(!one.contains("b"));

  const std::vector<text::Tokens> freq{{"x", "y", "y"}};
  CHECK(build_vocab(freq, 5).contains("y"));
  CHECK_THROWS_AS(build_vocab(seqs, 4), Error);
  CHECK_THROWS_AS(build_vocab(std::vector<text::Tokens>{}, 10), Error);

  CHECK(v.decode(v.encode({"a", "zzz", "c"})) == text::Tokens{"a", "c"});
  CHECK(Vocab::from_json(v.to_json()) == v);
}

TEST_CASE("build_pair_vocab reserves the persona tokens within the cap") {
  const auto pairs = toy_pairs();
  for (std::size_t cap : {14u, 20u, 200u}) {
    const Vocab v = build_pair_vocab(pairs, cap);
    CHECK(v.size() <= cap);
    for (const auto& t : persona::all_persona_tokens()) CHECK(v.contains(t));
  }
}

TEST_CASE("encode_source layout") {
  nn::Rng rng(2);
  const auto pairs = toy_pairs();
  auto model = init_model(build_pair_vocab(pairs, 200), tiny(), rng);
  persona::PersonaFeatures p;
  const auto src = encode_source(model, {"can", "we", "qqq"}, p);
  const auto tokens = persona::persona_tokens(p);
  REQUIRE(src.size() == 7);
  for (std::size_t i = 0; i < 3; ++i) CHECK(src[i] == model.vocab.id(tokens[i]));
  CHECK(src[3] == model.vocab.id("can"));
  CHECK(src[5] == kUnk);
  CHECK(src[6] == kEos);
  model.max_source_len = 2;
  CHECK(encode_source(model, {"can", "we", "meet"}, p).size() == 6);
}

TEST_CASE("training loss decreases and is deterministic") {
  auto opts = tiny();
  opts.lr = 1.0;
  opts.halve_every = 0;
  nn::Rng a(3), b(3);
  TrainReport report;
  auto m1 = train_seq2seq(toy_pairs(), opts, a, &report);
  auto m2 = train_seq2seq(toy_pairs(), opts, b);
  REQUIRE(report.epoch_loss.size() == 3);
  CHECK(report.epoch_loss[1] < report.epoch_loss[0]);
  CHECK(report.epoch_loss[2] < report.epoch_loss[1]);
  const auto p1 = m1.parameters();
  const auto p2 = m2.parameters();
  for (std::size_t i = 0; i < p1.size(); ++i) CHECK(p1[i]->value == p2[i]->value);
}

TEST_CASE("learning_rate schedule") {
  Seq2SeqOptions o;
  o.lr = 0.5;
  o.halve_every = 5;
  CHECK(learning_rate(o, 0) == 0.5);
  CHECK(learning_rate(o, 4) == 0.5);
  CHECK(learning_rate(o, 5) == 0.25);
  CHECK(learning_rate(o, 12) == 0.125);
  o.decay_start = 10;
  CHECK(learning_rate(o, 12) == 0.5);
  CHECK(learning_rate(o, 15) == 0.25);
  o.halve_every = 0;
  CHECK(learning_rate(o, 100) == 0.5);
}

TEST_CASE("nbest output contract") {
  const auto model = trained_toy(40);
  const persona::PersonaFeatures p;
  for (const auto& pair : toy_pairs()) {
    const auto best = nbest(model, pair.request, p, 5, 3);
    REQUIRE(!best.empty());
    CHECK(best.size() <= 3);
    std::set<text::Tokens> distinct;
    for (std::size_t i = 0; i < best.size(); ++i) {
      CHECK(best[i].logprob <= 0.0);
      CHECK(best[i].tokens.size() <= kMaxDecodeTokens);
      distinct.insert(best[i].tokens);
      if (i > 0) CHECK(best[i - 1].logprob >= best[i].logprob);
      for (const auto& t : best[i].tokens) CHECK(t.front() != '<');
    }
    CHECK(distinct.size() == best.size());
    CHECK(nbest(model, pair.request, p, 1, 1).front() == greedy_decode(model, pair.request, p));
  }
  CHECK_THROWS_AS(nbest(model, {"hi"}, p, 2, 3), Error);
  CHECK_THROWS_AS(nbest(model, {"hi"}, p, 2, 0), Error);
}

TEST_CASE("a trained toy model reproduces its training replies") {
  const auto model = trained_toy(150);
  std::size_t exact = 0;
  for (const auto& pair : toy_pairs()) {
    exact += greedy_decode(model, pair.request, pair.persona).tokens == pair.response;
  }
  CHECK(exact >= 5);
}

TEST_CASE("decoder starts from the encoder state") {
  nn::Rng rng(6);
  const auto model = init_model(build_pair_vocab(toy_pairs(), 200), tiny(), rng);
  const auto src = encode_source(model, {"can", "we", "meet"}, {});
  nn::Matrix state = encode(model, src);
  REQUIRE(state.rows() == 2 * model.hidden_dim());
  const auto base = first_step_logits(model, state);
  CHECK(base.size() == model.vocab.size());
  state(0, 0) += 0.5;
  CHECK(first_step_logits(model, state) != base);

  double max = *std::max_element(base.begin(), base.end());
  double z = 0.0;
  for (double l : base) z += std::exp(l - max);
  double total = 0.0;
  for (double l : base) total += std::exp(l - max) / z;
  CHECK(std::abs(total - 1.0) < 1e-12);
}

TEST_CASE("seq2seq file round trip") {
  auto model = trained_toy(5);
  persona::PersonaFeatures generic;
  generic.avg_response_length = 7.5;
  model.generic_persona = generic;
  const auto path = std::filesystem::temp_directory_path() / "preply_seq2seq_test.json";
  save(model, path);
  const auto back = load(path);
  CHECK(back.vocab == model.vocab);
  CHECK(back.generic_persona == model.generic_persona);
  CHECK(back.max_source_len == model.max_source_len);
  const text::Tokens req{"can", "we", "meet", "on", "friday"};
  CHECK(greedy_decode(back, req, {}) == greedy_decode(model, req, {}));
  std::filesystem::remove(path);
}
