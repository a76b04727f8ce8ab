#include "common/datetime.h"

#include <cstdio>

#include "common/error.h"

namespace preply {

namespace {

int days_in_month(int y, int m) {
  static constexpr int kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  const bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
  return m == 2 && leap ? 29 : kDays[m - 1];
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

// Howard Hinnant's days_from_civil / civil_from_days.
std::int64_t days_from_civil(const Date& d) {
  const std::int64_t y = d.year - (d.month <= 2 ? 1 : 0);
  const std::int64_t era = floor_div(y, 400);
  const std::int64_t yoe = y - era * 400;
  const std::int64_t mp = (d.month + 9) % 12;
  const std::int64_t doy = (153 * mp + 2) / 5 + d.day - 1;
  const std::int64_t doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + doe - 719468;
}

Date civil_from_days(std::int64_t z) {
  z += 719468;
  const std::int64_t era = floor_div(z, 146097);
  const std::int64_t doe = z - era * 146097;
  const std::int64_t yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const std::int64_t mp = (5 * doy + 2) / 153;
  const int day = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
  const int month = static_cast<int>(mp < 10 ? mp + 3 : mp - 9);
  const int year = static_cast<int>(yoe + era * 400 + (month <= 2 ? 1 : 0));
  return {year, month, day};
}

Date add_days(const Date& d, std::int64_t n) { return civil_from_days(days_from_civil(d) + n); }

int weekday(const Date& d) {
  // 1970-01-01 was a Thursday (index 3).
  return static_cast<int>(((days_from_civil(d) + 3) % 7 + 7) % 7);
}

std::int64_t to_minutes(const Timestamp& t) {
  return days_from_civil(t.date) * 1440 + t.hour * 60 + t.minute;
}

Timestamp from_minutes(std::int64_t minutes) {
  const std::int64_t days = floor_div(minutes, 1440);
  const std::int64_t rem = minutes - days * 1440;
  return {civil_from_days(days), static_cast<int>(rem / 60), static_cast<int>(rem % 60)};
}

Timestamp parse_timestamp(std::string_view text) {
  auto digits = [&](std::size_t pos, std::size_t n) {
    int v = 0;
    for (std::size_t i = pos; i < pos + n; ++i) {
      const char ch = text[i];
      require(ch >= '0' && ch <= '9', ErrorCode::kParse,
              "invalid timestamp '" + std::string(text) + "' (expected YYYY-MM-DDTHH:MM)");
      v = v * 10 + (ch - '0');
    }
    return v;
  };
  require(text.size() == 16 && text[4] == '-' && text[7] == '-' && text[10] == 'T' &&
              text[13] == ':',
          ErrorCode::kParse,
          "invalid timestamp '" + std::string(text) + "' (expected YYYY-MM-DDTHH:MM)");
  Timestamp t;
  t.date = {digits(0, 4), digits(5, 2), digits(8, 2)};
  t.hour = digits(11, 2);
  t.minute = digits(14, 2);
  require(t.date.month >= 1 && t.date.month <= 12 && t.date.day >= 1 &&
              t.date.day <= days_in_month(t.date.year, t.date.month) && t.hour < 24 &&
              t.minute < 60,
          ErrorCode::kParse, "timestamp out of range: '" + std::string(text) + "'");
  return t;
}

std::string format_date(const Date& d) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", d.year, d.month, d.day);
  return buf;
}

std::string format_timestamp(const Timestamp& t) {
  char buf[8];
  std::snprintf(buf, sizeof(buf), "T%02d:%02d", t.hour, t.minute);
  return format_date(t.date) + buf;
}

}  // namespace preply
