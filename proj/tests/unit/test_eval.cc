#include <cmath>
#include <string>
#include <vector>

#include "common/error.h"
#include "doctest.h"
#include "eval/eval.h"
#include "nn/rng.h"

using namespace preply;
using namespace preply::eval;
using text::Tokens;

namespace {

double score(const Tokens& c, std::vector<Tokens> refs) { return bleu(c, refs).score; }

}  // namespace

// Values frozen from an independent implementation (NLTK sentence_bleu with
// add-one smoothing where it agrees, hand arithmetic otherwise).
TEST_CASE("bleu fixtures") {
  CHECK(score({"see", "you", "friday"}, {{"see", "you", "friday"}}) == doctest::Approx(1.0).epsilon(1e-12));

  const auto the = bleu({"the", "the", "the", "the"}, std::vector<Tokens>{{"the", "cat"}});
  CHECK(std::abs(the.score - 0.31947155212313627) < 1e-9);
  CHECK(the.precisions[0] == 0.25);
  CHECK(the.brevity_penalty == 1.0);

  const auto short_c = bleu({"see", "you"}, std::vector<Tokens>{{"see", "you", "friday"}});
  CHECK(std::abs(short_c.brevity_penalty - std::exp(-0.5)) < 1e-12);
  CHECK(std::abs(short_c.score - std::exp(-0.5)) < 1e-9);

  const auto day = bleu({"sounds", "good", "see", "you", "friday"},
                        std::vector<Tokens>{{"sounds", "good", "see", "you", "monday"}});
  CHECK(std::abs(day.score - 0.7521206186172787) < 1e-9);
  CHECK(std::abs(day.precisions[1] - 0.8) < 1e-12);
  CHECK(std::abs(day.precisions[3] - 2.0 / 3.0) < 1e-12);

  const auto multi = bleu({"ok", "see", "you", "then"},
                          std::vector<Tokens>{{"ok", "see", "you"}, {"see", "you", "then", "ok", "bye"}});
  CHECK(multi.brevity_penalty == 1.0);
  CHECK(std::abs(multi.score - 0.8408964152537145) < 1e-9);
}

TEST_CASE("bleu rejects empty input") {
  CHECK_THROWS_AS(score({}, {{"a"}}), Error);
  CHECK_THROWS_AS(score({"a"}, {}), Error);
  CHECK_THROWS_AS(score({"a"}, {{}}), Error);
}

TEST_CASE("bleu invariants on random token lists") {
  nn::Rng rng(5);
  const std::vector<std::string> words{"a", "b", "c", "d", "e", "f"};
  auto random_tokens = [&](std::size_t min_len) {
    Tokens t(min_len + rng.below(8));
    for (auto& w : t) w = words[rng.below(words.size())];
    return t;
  };
  for (int trial = 0; trial < 300; ++trial) {
    const Tokens c = random_tokens(1);
    std::vector<Tokens> refs{random_tokens(1), random_tokens(1)};
    const double s = score(c, refs);
    CHECK(s >= 0.0);
    CHECK(s <= 1.0 + 1e-12);
    CHECK(std::abs(score(c, {c}) - 1.0) < 1e-12);

    // Adding the candidate to the references gives a perfect match.
    auto with_c = refs;
    with_c.push_back(c);
    CHECK(std::abs(score(c, with_c) - 1.0) < 1e-12);

    // A bijective renaming of the vocabulary changes nothing.
    auto rename = [](Tokens t) {
      for (auto& w : t) w = "x" + w + "y";
      return t;
    };
    std::vector<Tokens> renamed{rename(refs[0]), rename(refs[1])};
    CHECK(std::abs(score(rename(c), renamed) - s) < 1e-12);
  }
}

TEST_CASE("recipient_breakdown") {
  using corpus::RecipientType;
  const std::vector<std::pair<RecipientType, double>> r{
      {RecipientType::kWork, 0.2}, {RecipientType::kWork, 0.4}, {RecipientType::kPersonal, 1.0}};
  const auto m = recipient_breakdown(r);
  REQUIRE(m.size() == 2);
  CHECK(std::abs(m.at("work") - 0.3) < 1e-12);
  CHECK(m.at("personal") == 1.0);
  const std::vector<std::pair<RecipientType, double>> only{{RecipientType::kPersonal, 0.5}};
  CHECK(!recipient_breakdown(only).contains("work"));
  CHECK(recipient_breakdown({}).empty());
}

TEST_CASE("cross_user_variance") {
  const std::vector<std::vector<Tokens>> p{{Tokens(4, "w")}, {Tokens(8, "w")}};
  const std::vector<std::vector<Tokens>> g{{Tokens(5, "w")}, {Tokens(5, "w")}};
  const auto v = cross_user_variance(p, g);
  CHECK(v.var_personalized == 4.0);
  CHECK(v.var_generic == 0.0);
  CHECK_THROWS_AS(cross_user_variance(std::span(p).first(1), std::span(g).first(1)), Error);
  CHECK_THROWS_AS(cross_user_variance(p, std::span(g).first(1)), Error);

  const std::vector<double> constant(7, 0.1);
  CHECK(population_variance(constant) == 0.0);
  CHECK(mean_length(std::vector<Tokens>{Tokens(2), Tokens(5)}) == 3.5);
  CHECK_THROWS_AS(mean_length({}), Error);
}
