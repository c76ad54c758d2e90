#pragma once

#include <chrono>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

namespace adlmine {

/// UTC instant with millisecond precision.
using Instant = std::chrono::sys_time<std::chrono::milliseconds>;
using Minutes = std::chrono::minutes;
using Millis = std::chrono::milliseconds;

/// Calendar date in some local time zone.
using LocalDate = std::chrono::year_month_day;

class TimeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Accepts "YYYY-MM-DDTHH:MM[:SS[.fff]](Z|+hh:mm|-hh:mm)". A space is accepted
// in place of 'T'. Throws TimeError on anything else.
Instant parse_instant(std::string_view text);

// "YYYY-MM-DDTHH:MM:SSZ", with ".mmm" inserted when the milliseconds are nonzero.
std::string format_instant(Instant t);

// "YYYY-MM-DD"
LocalDate parse_date(std::string_view text);
std::string format_date(LocalDate d);

// "HH:MM" -> minutes after midnight
Minutes parse_clock(std::string_view text);

/// Named time zone. Accepts "UTC", fixed offsets like "+01:00", and IANA names
/// resolved from the system zoneinfo database.
class TimeZone {
 public:
  TimeZone();  // UTC
  static TimeZone load(std::string_view name);
  // ADLMINE_TZ if set, otherwise UTC.
  static TimeZone from_environment();

  const std::string& name() const { return name_; }

  LocalDate local_date(Instant t) const;
  // Instant of 00:00 local time on the given date.
  Instant midnight(LocalDate d) const;
  // Instant of the given local wall-clock time. A time inside a spring-forward
  // gap maps to the transition itself (01:30 -> 02:00 new time).
  Instant at(LocalDate d, Minutes since_midnight) const;
  // Minutes since local midnight, in wall-clock terms.
  Minutes local_clock(Instant t) const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
  std::string name_;
};

inline LocalDate next_day(LocalDate d) {
  return LocalDate{std::chrono::sys_days{d} + std::chrono::days{1}};
}

}  // namespace adlmine
