#include <cmath>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "common/error.h"
#include "doctest.h"
#include "persona/features.h"
#include "persona/persona.h"
#include "responder/seq2seq.h"
#include "text/resources.h"
#include "text/textproc.h"

using namespace preply;
using namespace preply::persona;
using extractor::RequestResponsePair;
using text::Tokens;

namespace {

RequestResponsePair pair_of(const char* q, const char* a) {
  RequestResponsePair p;
  p.request = text::tokenize(q);
  p.response = text::tokenize(a);
  p.user_id = "u";
  return p;
}

// Similarity by exact request equality, 0.5 when they share a first token.
double toy_similarity(const Tokens& a, const Tokens& b) {
  if (a == b) return 1.0;
  if (!a.empty() && !b.empty() && a[0] == b[0]) return 0.5;
  return 0.0;
}

}  // namespace

TEST_CASE("persona_features") {
  const auto& lex = text::default_lexicon();
  const std::vector<Tokens> plain{{"ok", "see", "you"}, {"will", "do", "that", "right", "away"}};
  const auto p = persona_features(plain, lex);
  CHECK(p.avg_response_length == 4.0);
  CHECK(p.polarity_dist == std::array<double, 3>{0.0, 0.0, 1.0});
  CHECK(p.dominant_degree == text::Degree::kNeutral);
  CHECK(persona_tokens(p) == std::array<std::string, 3>{"<len:short>", "<pol:neu>", "<deg:neutral>"});

  const std::vector<Tokens> emotional{text::tokenize("i am terribly sorry"),
                                      text::tokenize("so sorry about this awful delay")};
  const auto e = persona_features(emotional, lex);
  CHECK(e.dominant_degree == text::Degree::kStrong);
  CHECK(dominant_polarity(e) == text::Polarity::kNegative);
  CHECK_THROWS_AS(persona_features(std::vector<Tokens>{}, lex), Error);

  PersonaFeatures lengths;
  lengths.avg_response_length = 5.99;
  CHECK(length_bucket(lengths) == text::LengthBucket::kShort);
  lengths.avg_response_length = 6.0;
  CHECK(length_bucket(lengths) == text::LengthBucket::kMedium);
  lengths.avg_response_length = 10.0;
  CHECK(length_bucket(lengths) == text::LengthBucket::kLong);
  CHECK(features_from_json(to_json(e)) == e);
}

TEST_CASE("all persona tokens are distinct") {
  const auto all = all_persona_tokens();
  const std::set<std::string> unique(all.begin(), all.end());
  CHECK(unique.size() == 9);
}

TEST_CASE("build_profile and nearest_user") {
  const auto prof = build_profile("a", std::vector<Tokens>{{"x", "y", "x"}});
  CHECK(prof.ngram_counts.at("x") == 2.0);
  CHECK(prof.ngram_counts.at("x y") == 1.0);
  CHECK(prof.ngram_counts.at("x y x") == 1.0);
  CHECK(prof.total == 6.0);

  const auto q = build_profile("q", std::vector<Tokens>{{"x"}});
  const std::vector<UserProfile> train{build_profile("b", std::vector<Tokens>{{"x"}, {"y"}}),
                                       build_profile("c", std::vector<Tokens>{{"z"}})};
  const auto m = nearest_user(q, train);
  CHECK(m.user_id == "b");
  CHECK(std::abs(m.similarity - 1.0 / std::sqrt(2.0)) < 1e-12);
  CHECK(profile_similarity(q, q) == doctest::Approx(1.0));
  CHECK(profile_similarity(q, train[1]) == 0.0);

  // Scaling counts leaves similarity unchanged.
  const auto doubled = build_profile("d", std::vector<Tokens>{{"x"}, {"y"}, {"x"}, {"y"}});
  CHECK(std::abs(profile_similarity(q, doubled) - m.similarity) < 1e-12);

  // Ties go to the smaller id regardless of order.
  const std::vector<UserProfile> tied{build_profile("zz", std::vector<Tokens>{{"x"}}),
                                      build_profile("aa", std::vector<Tokens>{{"x"}})};
  CHECK(nearest_user(q, tied).user_id == "aa");
  CHECK_THROWS_AS(nearest_user(q, std::vector<UserProfile>{}), Error);
}

TEST_CASE("boost_dataset") {
  const std::vector<RequestResponsePair> user{pair_of("can we meet", "sure"),
                                              pair_of("got the file", "thanks")};
  const std::vector<Tokens> global{text::tokenize("can we meet"), text::tokenize("can you call"),
                                   text::tokenize("lunch today")};
  const auto strict = boost_dataset(user, global, toy_similarity, 1.0);
  REQUIRE(strict.size() == 3);
  CHECK(strict[2].request == global[0]);
  CHECK(strict[2].response == Tokens{"sure"});

  const auto loose = boost_dataset(user, global, toy_similarity, 0.5);
  REQUIRE(loose.size() == 4);
  CHECK(loose[3].request == global[1]);
  CHECK(loose[3].response == Tokens{"sure"});
  CHECK(boost_dataset(user, {}, toy_similarity, 0.5).size() == user.size());
  CHECK_THROWS_AS(boost_dataset(user, global, toy_similarity, 0.0), Error);

  std::size_t prev = SIZE_MAX;
  for (double t : {0.1, 0.5, 0.9, 1.0}) {
    const auto n = boost_dataset(user, global, toy_similarity, t).size();
    CHECK(n >= user.size());
    CHECK(n <= prev);
    prev = n;
  }
}

TEST_CASE("personalize") {
  const std::vector<RequestResponsePair> pairs{pair_of("can we meet", "sure"),
                                               pair_of("got the file", "thanks"),
                                               pair_of("call me later", "will do")};
  responder::Seq2SeqOptions opts;
  opts.embed_dim = 6;
  opts.hidden_dim = 8;
  opts.epochs = 2;
  nn::Rng rng(1);
  const auto global = responder::train_seq2seq(pairs, opts, rng);
  PersonaFeatures p;
  p.avg_response_length = 12.0;

  auto zero = opts;
  zero.epochs = 0;
  nn::Rng r0(2);
  auto same = personalize(global, pairs, {}, p, zero, r0);
  const auto gp = global.parameters();
  auto sp = same.parameters();
  for (std::size_t i = 0; i < gp.size(); ++i) CHECK(gp[i]->value == sp[i]->value);

  nn::Rng a(3), b(3);
  auto m1 = personalize(global, pairs, {}, p, opts, a);
  auto m2 = personalize(global, pairs, {}, p, opts, b);
  auto p1 = m1.parameters();
  auto p2 = m2.parameters();
  bool changed = false;
  for (std::size_t i = 0; i < p1.size(); ++i) {
    CHECK(p1[i]->value == p2[i]->value);
    changed = changed || !(p1[i]->value == gp[i]->value);
  }
  CHECK(changed);
  CHECK_THROWS_AS(personalize(global, {}, {}, p, opts, a), Error);
}

TEST_CASE("EmbeddingSimilarity") {
  const std::vector<RequestResponsePair> pairs{pair_of("can we meet", "sure"),
                                               pair_of("got the file", "thanks")};
  responder::Seq2SeqOptions opts;
  opts.embed_dim = 6;
  opts.hidden_dim = 8;
  opts.epochs = 1;
  nn::Rng rng(1);
  const auto model = responder::train_seq2seq(pairs, opts, rng);
  const EmbeddingSimilarity sim(model);
  const Tokens a = text::tokenize("can we meet");
  CHECK(std::abs(sim(a, a) - 1.0) < 1e-12);
  CHECK(sim(a, {"qqqz"}) == 0.0);
  const double s = sim(a, text::tokenize("got the file"));
  CHECK(s >= 0.0);
  CHECK(s <= 1.0);
  CHECK_THROWS_AS(cosine(std::vector<double>{1.0}, std::vector<double>{1.0, 2.0}), Error);
}

TEST_CASE("profile file round trip") {
  const auto prof = build_profile("alice", std::vector<Tokens>{{"see", "you", "then"}});
  PersonaFeatures p;
  p.avg_response_length = 3.0;
  p.polarity_dist = {0.5, 0.25, 0.25};
  p.dominant_degree = text::Degree::kMild;
  const auto path = std::filesystem::temp_directory_path() / "preply_profile_test.json";
  save_profile(prof, p, path);
  const auto [back, bp] = load_profile(path);
  CHECK(back.user_id == "alice");
  CHECK(back.ngram_counts == prof.ngram_counts);
  CHECK(back.total == prof.total);
  CHECK(bp == p);
  std::filesystem::remove(path);
}
