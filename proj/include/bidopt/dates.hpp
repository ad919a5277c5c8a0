#pragma once

#include <cstdio>
#include <string>

#include "bidopt/common.hpp"

namespace bidopt {

/// Calendar day as a serial number (days since 1970-01-01).
/// Days are uniform 24-hour days; DST switch days are rejected at ingestion.
using DayNumber = long;

/// Serial day number for a civil date (proleptic Gregorian).
constexpr DayNumber days_from_civil(int y, unsigned m, unsigned d) {
  y -= m <= 2;
  const int era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return static_cast<DayNumber>(era) * 146097 + static_cast<DayNumber>(doe) - 719468;
}

struct CivilDate {
  int year;
  unsigned month;
  unsigned day;
};

constexpr CivilDate civil_from_days(DayNumber z) {
  z += 719468;
  const DayNumber era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const int y = static_cast<int>(yoe) + static_cast<int>(era) * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned d = doy - (153 * mp + 2) / 5 + 1;
  const unsigned m = mp + (mp < 10 ? 3 : -9);
  return {y + (m <= 2), m, d};
}

/// ISO weekday, 1 = Monday .. 7 = Sunday.
constexpr int weekday(DayNumber z) {
  return static_cast<int>(z >= -4 ? (z + 4) % 7 : (z + 5) % 7 + 6) + 1;
}

/// Parses "YYYY-MM-DD". Throws SchemaError on malformed input.
DayNumber parse_date(const std::string& s);

/// Formats a serial day number as "YYYY-MM-DD".
std::string format_date(DayNumber z);

}  // namespace bidopt
