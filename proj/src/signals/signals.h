#ifndef PREPLY_SIGNALS_SIGNALS_H_
#define PREPLY_SIGNALS_SIGNALS_H_

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "common/datetime.h"
#include "json.hpp"
#include "responder/seq2seq.h"
#include "text/textproc.h"

namespace preply::signals {

struct CalendarEvent {
  std::string title;
  Timestamp start;
  Timestamp end;  // strictly after start

  friend bool operator==(const CalendarEvent&, const CalendarEvent&) = default;
};

// Trigger terms: meet, meeting, "see you", monday..sunday, today, tomorrow.
struct TriggerHit {
  std::string term;
  std::size_t position = 0;

  friend bool operator==(const TriggerHit&, const TriggerHit&) = default;
};

std::vector<TriggerHit> detect_triggers(const text::Tokens& response);

// Day names, today and tomorrow.
bool is_temporal(std::string_view term);

// Day names resolve to the next such day strictly after now's date; today
// and tomorrow are literal. Throws for any other term.
Date resolve_day(std::string_view term, const Timestamp& now);

struct SignalOptions {
  int business_start_hour = 9;
  int business_end_hour = 17;
  double busy_hours = 4.0;
};

// True iff the union of events clipped to that day's business hours covers
// at least busy_hours.
bool conflicts(std::span<const CalendarEvent> calendar, const Date& date,
               const SignalOptions& opts = {});

// Whether a suggestion proposes a date that the calendar rules out. A
// response with a scheduling word (meet, meeting, see you) but no date of
// its own is checked against the dates named in `request`, if given.
bool response_conflicts(const text::Tokens& response, std::span<const CalendarEvent> calendar,
                        const Timestamp& now, const SignalOptions& opts = {},
                        const text::Tokens* request = nullptr);

// Stable partition: non-conflicting responses first, conflicting after,
// each group in input order. Never adds or drops a response.
std::vector<responder::ScoredResponse> rerank(std::span<const responder::ScoredResponse> responses,
                                              std::span<const CalendarEvent> calendar,
                                              const Timestamp& now,
                                              const SignalOptions& opts = {},
                                              const text::Tokens* request = nullptr);

std::vector<CalendarEvent> parse_calendar(const nlohmann::json& doc);
nlohmann::ordered_json calendar_to_json(std::span<const CalendarEvent> calendar);
std::vector<CalendarEvent> load_calendar(const std::filesystem::path& path);

}  // namespace preply::signals

#endif  // PREPLY_SIGNALS_SIGNALS_H_
