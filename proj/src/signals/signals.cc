#include "signals/signals.h"

#include <algorithm>
#include <array>
#include <utility>

#include "common/error.h"
#include "common/file_util.h"

namespace preply::signals {

namespace {

constexpr std::array<std::string_view, 7> kDayNames = {
    "monday", "tuesday", "wednesday", "thursday", "friday", "saturday", "sunday"};

int day_index(std::string_view term) {
  for (std::size_t i = 0; i < kDayNames.size(); ++i) {
    if (kDayNames[i] == term) return static_cast<int>(i);
  }
  return -1;
}

bool is_scheduling_word(std::string_view term) {
  return term == "meet" || term == "meeting" || term == "see you";
}

std::vector<Date> mentioned_dates(const std::vector<TriggerHit>& hits, const Timestamp& now) {
  std::vector<Date> dates;
  for (const auto& h : hits) {
    if (is_temporal(h.term)) dates.push_back(resolve_day(h.term, now));
  }
  return dates;
}

}  // namespace

bool is_temporal(std::string_view term) {
  return term == "today" || term == "tomorrow" || day_index(term) >= 0;
}

std::vector<TriggerHit> detect_triggers(const text::Tokens& response) {
  std::vector<TriggerHit> hits;
  for (std::size_t i = 0; i < response.size(); ++i) {
    const std::string& t = response[i];
    if (t == "see" && i + 1 < response.size() && response[i + 1] == "you") {
      hits.push_back({"see you", i});
    } else if (t == "meet" || t == "meeting" || is_temporal(t)) {
      hits.push_back({t, i});
    }
  }
  return hits;
}

Date resolve_day(std::string_view term, const Timestamp& now) {
  if (term == "today") return now.date;
  if (term == "tomorrow") return add_days(now.date, 1);
  const int target = day_index(term);
  require(target >= 0, ErrorCode::kInvalidArgument,
          "resolve_day: '" + std::string(term) + "' is not a day term");
  int ahead = (target - weekday(now.date) + 7) % 7;
  if (ahead == 0) ahead = 7;
  return add_days(now.date, ahead);
}

bool conflicts(std::span<const CalendarEvent> calendar, const Date& date,
               const SignalOptions& opts) {
  const std::int64_t day_start = to_minutes({date, opts.business_start_hour, 0});
  const std::int64_t day_end = to_minutes({date, opts.business_end_hour, 0});
  std::vector<std::pair<std::int64_t, std::int64_t>> spans;
  for (const auto& e : calendar) {
    const std::int64_t s = std::max(to_minutes(e.start), day_start);
    const std::int64_t t = std::min(to_minutes(e.end), day_end);
    if (s < t) spans.emplace_back(s, t);
  }
  std::sort(spans.begin(), spans.end());
  std::int64_t busy = 0;
  std::int64_t cursor = day_start;
  for (const auto& [s, t] : spans) {
    const std::int64_t from = std::max(s, cursor);
    if (t > from) {
      busy += t - from;
      cursor = t;
    }
  }
  return static_cast<double>(busy) >= opts.busy_hours * 60.0;
}

bool response_conflicts(const text::Tokens& response, std::span<const CalendarEvent> calendar,
                        const Timestamp& now, const SignalOptions& opts,
                        const text::Tokens* request) {
  const std::vector<TriggerHit> hits = detect_triggers(response);
  if (hits.empty()) return false;
  std::vector<Date> dates = mentioned_dates(hits, now);
  const bool scheduling = std::any_of(hits.begin(), hits.end(),
                                      [](const TriggerHit& h) { return is_scheduling_word(h.term); });
  if (dates.empty() && scheduling && request != nullptr) {
    dates = mentioned_dates(detect_triggers(*request), now);
  }
  return std::any_of(dates.begin(), dates.end(),
                     [&](const Date& d) { return conflicts(calendar, d, opts); });
}

std::vector<responder::ScoredResponse> rerank(std::span<const responder::ScoredResponse> responses,
                                              std::span<const CalendarEvent> calendar,
                                              const Timestamp& now, const SignalOptions& opts,
                                              const text::Tokens* request) {
  std::vector<responder::ScoredResponse> ok;
  std::vector<responder::ScoredResponse> demoted;
  for (const auto& r : responses) {
    const bool bad = !calendar.empty() && response_conflicts(r.tokens, calendar, now, opts, request);
    (bad ? demoted : ok).push_back(r);
  }
  ok.insert(ok.end(), demoted.begin(), demoted.end());
  return ok;
}

std::vector<CalendarEvent> parse_calendar(const nlohmann::json& doc) {
  require(doc.is_array(), ErrorCode::kParse, "calendar: expected a JSON array");
  std::vector<CalendarEvent> events;
  std::size_t index = 0;
  for (const auto& item : doc) {
    try {
      CalendarEvent e;
      e.title = item.value("title", "");
      e.start = parse_timestamp(item.at("start").get<std::string>());
      e.end = parse_timestamp(item.at("end").get<std::string>());
      require(e.start < e.end, ErrorCode::kParse, "start must precede end");
      events.push_back(std::move(e));
    } catch (const nlohmann::json::exception& ex) {
      fail(ErrorCode::kParse, "calendar event " + std::to_string(index) + ": " + ex.what());
    } catch (const Error& ex) {
      fail(ex.code(), "calendar event " + std::to_string(index) + ": " + ex.what());
    }
    ++index;
  }
  return events;
}

nlohmann::ordered_json calendar_to_json(std::span<const CalendarEvent> calendar) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const auto& e : calendar) {
    doc.push_back({{"title", e.title},
                   {"start", format_timestamp(e.start)},
                   {"end", format_timestamp(e.end)}});
  }
  return doc;
}

std::vector<CalendarEvent> load_calendar(const std::filesystem::path& path) {
  try {
    return parse_calendar(nlohmann::json::parse(read_file(path)));
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kParse, path.string() + ": " + e.what());
  } catch (const Error& e) {
    fail(e.code(), path.string() + ": " + e.what());
  }
}

}  // namespace preply::signals
