#include <algorithm>
#include <string>
#include <vector>

#include "common/datetime.h"
#include "common/error.h"
#include "corpus/generator.h"
#include "doctest.h"
#include "nn/rng.h"
#include "signals/signals.h"
#include "text/textproc.h"

using namespace preply;
using namespace preply::signals;
using responder::ScoredResponse;

namespace {

const Timestamp kNow = parse_timestamp(corpus::kFixtureNow);

std::vector<CalendarEvent> fixture() { return parse_calendar(corpus::calendar_fixture()); }

ScoredResponse resp(const char* s, double lp) { return {text::tokenize(s), lp}; }

}  // namespace

TEST_CASE("detect_triggers") {
  CHECK(detect_triggers(text::tokenize("let's meet on friday")) ==
        std::vector<TriggerHit>{{"meet", 1}, {"friday", 3}});
  CHECK(detect_triggers(text::tokenize("see you tomorrow")) ==
        std::vector<TriggerHit>{{"see you", 0}, {"tomorrow", 2}});
  CHECK(detect_triggers(text::tokenize("sounds good")).empty());
  CHECK(detect_triggers({"see"}).empty());
  CHECK(is_temporal("today"));
  CHECK(!is_temporal("meeting"));
}

TEST_CASE("resolve_day") {
  REQUIRE(weekday(kNow.date) == 2);
  CHECK(resolve_day("friday", kNow) == Date{2024, 1, 5});
  CHECK(resolve_day("wednesday", kNow) == Date{2024, 1, 10});
  CHECK(resolve_day("monday", kNow) == Date{2024, 1, 8});
  CHECK(resolve_day("today", kNow) == Date{2024, 1, 3});
  CHECK(resolve_day("tomorrow", kNow) == Date{2024, 1, 4});
  CHECK(resolve_day("tomorrow", parse_timestamp("2024-02-29T23:59")) == Date{2024, 3, 1});
  CHECK_THROWS_AS(resolve_day("meet", kNow), Error);
}

TEST_CASE("conflicts clips to business hours") {
  const auto cal = fixture();
  CHECK(conflicts(cal, {2024, 1, 5}));
  CHECK(!conflicts(cal, {2024, 1, 4}));
  CHECK(!conflicts(cal, {2024, 1, 9}));
  CHECK(conflicts(cal, {2024, 1, 9}, {.busy_hours = 2.0}));
  CHECK(!conflicts({}, {2024, 1, 5}));

  // 06:00-10:00 counts one hour; overlapping events are not double counted.
  const std::vector<CalendarEvent> early{
      {"a", parse_timestamp("2024-01-04T06:00"), parse_timestamp("2024-01-04T10:00")},
      {"b", parse_timestamp("2024-01-04T09:30"), parse_timestamp("2024-01-04T12:00")},
      {"c", parse_timestamp("2024-01-04T11:00"), parse_timestamp("2024-01-04T12:30")}};
  CHECK(!conflicts(early, {2024, 1, 4}, {.busy_hours = 3.6}));
  CHECK(conflicts(early, {2024, 1, 4}, {.busy_hours = 3.5}));
}

TEST_CASE("rerank fixture demotes the booked friday") {
  const auto cal = fixture();
  const std::vector<ScoredResponse> in{resp("see you friday", -1.0),
                                       resp("see you thursday", -1.5),
                                       resp("sounds good", -2.0)};
  const auto out = rerank(in, cal, kNow);
  REQUIRE(out.size() == 3);
  CHECK(out[0] == in[1]);
  CHECK(out[1] == in[2]);
  CHECK(out[2] == in[0]);
  CHECK(rerank(in, {}, kNow) == in);

  // A bare scheduling reply borrows the request's date.
  const auto request = text::tokenize("can we meet on friday");
  CHECK(response_conflicts(text::tokenize("sure let's meet"), cal, kNow, {}, &request));
  CHECK(!response_conflicts(text::tokenize("sure let's meet"), cal, kNow));
  CHECK(!response_conflicts(text::tokenize("sure"), cal, kNow, {}, &request));
}

TEST_CASE("rerank is a stable permutation") {
  const auto cal = fixture();
  const std::vector<std::string> pool{"see you friday", "see you monday", "ok",
                                      "meet tomorrow",  "friday works",   "thanks",
                                      "meeting today",  "see you tuesday"};
  nn::Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<ScoredResponse> in;
    const auto n = rng.below(8);
    for (std::uint64_t i = 0; i < n; ++i) {
      in.push_back(resp(pool[rng.below(pool.size())].c_str(), -static_cast<double>(i)));
    }
    const auto out = rerank(in, cal, kNow);
    REQUIRE(out.size() == in.size());
    CHECK(std::is_permutation(out.begin(), out.end(), in.begin(), in.end()));
    std::vector<ScoredResponse> ok, bad;
    for (const auto& r : in) (response_conflicts(r.tokens, cal, kNow) ? bad : ok).push_back(r);
    ok.insert(ok.end(), bad.begin(), bad.end());
    CHECK(out == ok);
    CHECK(rerank(in, {}, kNow) == in);
  }
}

TEST_CASE("calendar parsing") {
  const auto cal = fixture();
  REQUIRE(cal.size() == 4);
  CHECK(cal[1].title == "Offsite workshop");
  CHECK(parse_calendar(calendar_to_json(cal)) == cal);
  CHECK_THROWS_AS(parse_calendar(nlohmann::json::object()), Error);
  CHECK_THROWS_AS(parse_calendar(nlohmann::json::parse(
                      R"([{"title":"x","start":"2024-01-01T10:00","end":"2024-01-01T09:00"}])")),
                  Error);
  CHECK_THROWS_AS(parse_calendar(nlohmann::json::parse(
                      R"([{"title":"x","start":"soon","end":"2024-01-01T09:00"}])")),
                  Error);
}
