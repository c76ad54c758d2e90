#include "adlmine/time.hpp"

#include <absl/time/civil_time.h>
#include <absl/time/time.h>

#include <charconv>
#include <cstdlib>
#include <cstdio>

namespace adlmine {
namespace {

int read_int(std::string_view text, std::size_t pos, std::size_t len, std::string_view whole) {
  if (pos + len > text.size()) throw TimeError("truncated timestamp: " + std::string(whole));
  int value = 0;
  auto first = text.data() + pos;
  auto [ptr, ec] = std::from_chars(first, first + len, value);
  if (ec != std::errc{} || ptr != first + len)
    throw TimeError("bad digits in timestamp: " + std::string(whole));
  return value;
}

void expect(std::string_view text, std::size_t pos, char c, std::string_view whole) {
  if (pos >= text.size() || text[pos] != c)
    throw TimeError("malformed timestamp: " + std::string(whole));
}

absl::CivilDay to_civil(LocalDate d) {
  return absl::CivilDay(static_cast<int>(d.year()), static_cast<unsigned>(d.month()),
                        static_cast<unsigned>(d.day()));
}

Instant from_absl(absl::Time t) {
  return Instant{Millis{absl::ToUnixMillis(t)}};
}

absl::Time to_absl(Instant t) {
  return absl::FromUnixMillis(t.time_since_epoch().count());
}

}  // namespace

Instant parse_instant(std::string_view text) {
  const auto whole = text;
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r'))
    text.remove_suffix(1);

  const int y = read_int(text, 0, 4, whole);
  expect(text, 4, '-', whole);
  const int mo = read_int(text, 5, 2, whole);
  expect(text, 7, '-', whole);
  const int d = read_int(text, 8, 2, whole);
  if (text.size() < 11 || (text[10] != 'T' && text[10] != ' '))
    throw TimeError("missing time part: " + std::string(whole));
  const int h = read_int(text, 11, 2, whole);
  expect(text, 13, ':', whole);
  const int mi = read_int(text, 14, 2, whole);
  std::size_t pos = 16;
  int s = 0;
  int ms = 0;
  if (pos < text.size() && text[pos] == ':') {
    s = read_int(text, pos + 1, 2, whole);
    pos += 3;
    if (pos < text.size() && text[pos] == '.') {
      ++pos;
      std::size_t digits = 0;
      int scale = 100;
      while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
        if (digits < 3) ms += (text[pos] - '0') * scale;
        scale /= 10;
        ++digits;
        ++pos;
      }
      if (digits == 0) throw TimeError("empty fraction in timestamp: " + std::string(whole));
    }
  }
  int offset_minutes = 0;
  if (pos >= text.size()) throw TimeError("timestamp lacks a UTC designator: " + std::string(whole));
  if (text[pos] == 'Z' || text[pos] == 'z') {
    ++pos;
  } else if (text[pos] == '+' || text[pos] == '-') {
    const int sign = text[pos] == '-' ? -1 : 1;
    const int oh = read_int(text, pos + 1, 2, whole);
    expect(text, pos + 3, ':', whole);
    const std::size_t mpos = pos + 4;
    const int om = read_int(text, mpos, 2, whole);
    offset_minutes = sign * (oh * 60 + om);
    pos = mpos + 2;
  } else {
    throw TimeError("malformed zone designator: " + std::string(whole));
  }
  if (pos != text.size()) throw TimeError("trailing characters in timestamp: " + std::string(whole));

  const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(mo)},
                                        std::chrono::day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h > 23 || mi > 59 || s > 60)
    throw TimeError("timestamp out of range: " + std::string(whole));
  auto t = Instant{std::chrono::sys_days{ymd}} + std::chrono::hours{h} + Minutes{mi} +
           std::chrono::seconds{s} + Millis{ms};
  return t - Minutes{offset_minutes};
}

std::string format_instant(Instant t) {
  const auto day = std::chrono::floor<std::chrono::days>(t);
  const std::chrono::year_month_day ymd{day};
  const auto since = t - day;
  const auto h = std::chrono::duration_cast<std::chrono::hours>(since);
  const auto m = std::chrono::duration_cast<Minutes>(since - h);
  const auto s = std::chrono::duration_cast<std::chrono::seconds>(since - h - m);
  const auto ms = (since - h - m - s).count();
  char buf[40];
  if (ms != 0) {
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d.%03dZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<int>(h.count()), static_cast<int>(m.count()),
                  static_cast<int>(s.count()), static_cast<int>(ms));
  } else {
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<int>(h.count()), static_cast<int>(m.count()),
                  static_cast<int>(s.count()));
  }
  return buf;
}

LocalDate parse_date(std::string_view text) {
  const int y = read_int(text, 0, 4, text);
  expect(text, 4, '-', text);
  const int mo = read_int(text, 5, 2, text);
  expect(text, 7, '-', text);
  const int d = read_int(text, 8, 2, text);
  if (text.size() != 10) throw TimeError("malformed date: " + std::string(text));
  LocalDate ymd{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(mo)},
                std::chrono::day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) throw TimeError("invalid date: " + std::string(text));
  return ymd;
}

std::string format_date(LocalDate d) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()),
                static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
  return buf;
}

Minutes parse_clock(std::string_view text) {
  const int h = read_int(text, 0, 2, text);
  expect(text, 2, ':', text);
  const int m = read_int(text, 3, 2, text);
  if (text.size() != 5 || h > 23 || m > 59) throw TimeError("malformed clock time: " + std::string(text));
  return Minutes{h * 60 + m};
}

struct TimeZone::Impl {
  absl::TimeZone tz;
};

TimeZone::TimeZone() : impl_(std::make_shared<Impl>(Impl{absl::UTCTimeZone()})), name_("UTC") {}

TimeZone TimeZone::load(std::string_view name) {
  TimeZone out;
  if (name.empty() || name == "UTC" || name == "Z") return out;
  absl::TimeZone tz;
  if (name.front() == '+' || name.front() == '-') {
    const int sign = name.front() == '-' ? -1 : 1;
    const int h = read_int(name, 1, 2, name);
    std::size_t mpos = 3;
    if (mpos < name.size() && name[mpos] == ':') ++mpos;
    const int m = mpos < name.size() ? read_int(name, mpos, 2, name) : 0;
    tz = absl::FixedTimeZone(sign * (h * 3600 + m * 60));
  } else if (!absl::LoadTimeZone(std::string(name), &tz)) {
    throw TimeError("unknown time zone: " + std::string(name));
  }
  out.impl_ = std::make_shared<Impl>(Impl{tz});
  out.name_ = std::string(name);
  return out;
}

TimeZone TimeZone::from_environment() {
  if (const char* env = std::getenv("ADLMINE_TZ"); env != nullptr && *env != '\0') return load(env);
  return TimeZone{};
}

LocalDate TimeZone::local_date(Instant t) const {
  const auto civil = absl::ToCivilDay(to_absl(t), impl_->tz);
  return LocalDate{std::chrono::year{static_cast<int>(civil.year())},
                   std::chrono::month{static_cast<unsigned>(civil.month())},
                   std::chrono::day{static_cast<unsigned>(civil.day())}};
}

Instant TimeZone::midnight(LocalDate d) const {
  return from_absl(absl::FromCivil(to_civil(d), impl_->tz));
}

Instant TimeZone::at(LocalDate d, Minutes since_midnight) const {
  const auto day = to_civil(d);
  const absl::CivilMinute cm(day.year(), day.month(), day.day(), 0,
                             static_cast<int>(since_midnight.count()));
  return from_absl(absl::FromCivil(cm, impl_->tz));
}

Minutes TimeZone::local_clock(Instant t) const {
  const auto cs = absl::ToCivilSecond(to_absl(t), impl_->tz);
  return Minutes{cs.hour() * 60 + cs.minute()};
}

}  // namespace adlmine
