#ifndef PREPLY_COMMON_DATETIME_H_
#define PREPLY_COMMON_DATETIME_H_

#include <cstdint>
#include <string>
#include <string_view>

namespace preply {

// Proleptic Gregorian calendar date.
struct Date {
  int year = 1970;
  int month = 1;
  int day = 1;

  friend auto operator<=>(const Date&, const Date&) = default;
};

// Timezone-naive timestamp with minute precision.
struct Timestamp {
  Date date;
  int hour = 0;
  int minute = 0;

  friend auto operator<=>(const Timestamp&, const Timestamp&) = default;
};

// Days since 1970-01-01.
std::int64_t days_from_civil(const Date& d);
Date civil_from_days(std::int64_t days);
Date add_days(const Date& d, std::int64_t n);

// 0 = Monday ... 6 = Sunday.
int weekday(const Date& d);

// Minutes since 1970-01-01T00:00.
std::int64_t to_minutes(const Timestamp& t);
Timestamp from_minutes(std::int64_t minutes);

// "YYYY-MM-DDTHH:MM". Throws Error(kParse) on anything else.
Timestamp parse_timestamp(std::string_view text);
std::string format_timestamp(const Timestamp& t);
std::string format_date(const Date& d);

}  // namespace preply

#endif  // PREPLY_COMMON_DATETIME_H_
