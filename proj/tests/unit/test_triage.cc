#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "common/error.h"
#include "corpus/corpus.h"
#include "corpus/generator.h"
#include "doctest.h"
#include "text/resources.h"
#include "triage/triage.h"

using namespace preply;
using namespace preply::triage;

namespace {

corpus::Email make_email(std::string id, std::string body) {
  corpus::Email e;
  e.id = std::move(id);
  e.from = "x@example.com";
  e.to = {"y@example.com"};
  e.body = std::move(body);
  return e;
}

corpus::Email make_reply(const corpus::Email& to, std::string body) {
  corpus::Email r = make_email(to.id + "-r", std::move(body));
  r.in_reply_to = to.id;
  return r;
}

// One feature decides the label; the rest is noise.
std::vector<Example> separable(std::size_t n, nn::Rng& rng) {
  std::vector<Example> out;
  for (std::size_t i = 0; i < n; ++i) {
    const bool pos = i % 2 == 0;
    TriageFeatures f;
    f[pos ? "2:good_sign" : "2:bad_sign"] = 1.0;
    f["2:noise_" + std::to_string(rng.below(20))] = 1.0;
    f["len:short"] = 1.0;
    out.emplace_back(std::move(f), pos ? Label::kPositive : Label::kNegative);
  }
  return out;
}

}  // namespace

TEST_CASE("label_email") {
  const auto e = make_email("e1", "Can we meet?");
  CHECK(label_email(e, nullptr) == Label::kNegative);
  const auto ok = make_reply(e, "Sounds good. See you then.");
  CHECK(label_email(e, &ok) == Label::kPositive);
  const auto three = make_reply(e, "One two three. Four five six. Seven eight nine ten eleven twelve.");
  CHECK(label_email(e, &three) == Label::kNegative);
  std::string words;
  for (int i = 0; i < 26; ++i) words += "word ";
  const auto wordy = make_reply(e, words);
  CHECK(label_email(e, &wordy) == Label::kNegative);
  const auto boiler = make_reply(e, "Hi X,\nSure.\nThanks,\nY\nlots of signature text here");
  CHECK(label_email(e, &boiler) == Label::kPositive);
  auto wrong = make_reply(e, "ok");
  wrong.in_reply_to = "other";
  CHECK_THROWS_AS(label_email(e, &wrong), Error);
}

TEST_CASE("featurize") {
  CHECK(featurize_tokens({"see", "you", "friday"}) ==
        TriageFeatures{{"2:see_you", 1}, {"2:you_friday", 1}, {"3:see_you_friday", 1},
                       {"len:short", 1}});
  CHECK(featurize(make_email("e", ""), text::default_dictionary()) ==
        TriageFeatures{{"len:short", 1}});
  const auto medium = featurize_tokens(text::Tokens(30, "ok"));
  CHECK(medium.contains("len:medium"));
  CHECK(medium.at("2:ok_ok") == 29);
  for (const auto& [id, count] : medium) {
    CHECK(id.rfind("1:", 0) != 0);
    CHECK(count >= 1);
  }
}

TEST_CASE("predict with zero weights is exactly one half") {
  TriageModel m;
  CHECK(predict_triage(m, featurize_tokens({"a", "b"})) == 0.5);
  CHECK(predict_triage(m, make_email("e", "Anything at all."), text::default_dictionary()) == 0.5);
}

TEST_CASE("train_triage") {
  nn::Rng rng(1);
  const auto data = separable(200, rng);
  nn::Rng r1(2);
  const TriageModel m = train_triage(data, {}, r1);
  std::size_t correct = 0;
  for (const auto& [f, y] : data) correct += (predict_triage(m, f) >= 0.5) == (y == Label::kPositive);
  CHECK(static_cast<double>(correct) / data.size() >= 0.99);

  nn::Rng r2(2);
  const TriageModel heavy = train_triage(data, {.lambda = 1e6}, r2);
  CHECK(heavy.l2_norm() < 1e-2);

  // Determinism.
  nn::Rng r3(2);
  CHECK(train_triage(data, {}, r3).weights == m.weights);

  CHECK_THROWS_AS(train_triage({}, {}, r1), Error);
  std::vector<Example> skewed(data.begin(), data.begin() + 10);
  for (int i = 0; i < 10; ++i) skewed.push_back(data[0]);
  CHECK_THROWS_AS(train_triage(skewed, {}, r1), Error);
}

TEST_CASE("a single repeated positive example is learned") {
  // A lone positive class cannot pass the balance guard, so pair it with
  // one disjoint negative.
  std::vector<Example> data;
  for (int i = 0; i < 50; ++i) {
    data.emplace_back(TriageFeatures{{"2:yes_please", 1}, {"len:short", 1}}, Label::kPositive);
    data.emplace_back(TriageFeatures{{"2:no_thanks", 1}, {"len:long", 1}}, Label::kNegative);
  }
  nn::Rng rng(3);
  const auto m = train_triage(data, {}, rng);
  CHECK(predict_triage(m, data[0].first) > 0.9);
}

TEST_CASE("regularization is monotone in lambda") {
  nn::Rng g(8);
  const auto emails = corpus::generate_corpus(corpus::default_personas(4), 60, g);
  std::vector<Example> data;
  for (const auto& t : corpus::build_threads(emails)) {
    data.emplace_back(featurize(*t.request, text::default_dictionary()),
                      label_email(*t.request, t.reply));
  }
  nn::Rng b(1);
  data = balance(std::move(data), b);
  double prev = INFINITY;
  for (double lambda : {0.0, 0.1, 1.0}) {
    nn::Rng r(4);
    const double norm = train_triage(data, {.lambda = lambda}, r).l2_norm();
    CHECK(norm <= prev);
    prev = norm;
  }
}

TEST_CASE("balance and check_balance") {
  std::vector<Example> data;
  for (int i = 0; i < 30; ++i) data.emplace_back(TriageFeatures{{"len:short", 1}}, Label::kPositive);
  for (int i = 0; i < 10; ++i) data.emplace_back(TriageFeatures{{"len:long", 1}}, Label::kNegative);
  nn::Rng rng(2);
  const auto b = balance(data, rng);
  std::size_t pos = 0;
  for (const auto& [f, y] : b) pos += y == Label::kPositive;
  CHECK_NOTHROW(check_balance(pos, b.size(), "test"));
  CHECK_THROWS_AS(check_balance(30, 40, "test"), Error);
}

TEST_CASE("triage model file round trip") {
  TriageModel m;
  m.lambda = 0.1;
  m.weights = {{3u, 0.5}, {77u, -1.25}};
  const auto path = std::filesystem::temp_directory_path() / "preply_triage_test.json";
  save(m, path);
  const TriageModel back = load(path);
  CHECK(back.weights == m.weights);
  CHECK(back.lambda == m.lambda);
  std::filesystem::remove(path);
}
