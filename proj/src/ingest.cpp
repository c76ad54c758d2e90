#include "adlmine/ingest.hpp"

#include <zlib.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <tuple>

namespace adlmine {
namespace {

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::optional<double> parse_number(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

SensorEvent parse_csv_fields(const std::vector<std::string_view>& f) {
  if (f.size() != 6) throw DomainError("expected 6 fields, found " + std::to_string(f.size()));
  SensorEvent e;
  e.timestamp = parse_instant(f[0]);
  e.participant_id = std::string(trim(f[1]));
  e.sensor_id = std::string(trim(f[2]));
  e.kind = parse_sensor_kind(trim(f[3]));
  const auto ch = trim(f[4]);
  if (!ch.empty()) e.channel = parse_channel(ch);
  const auto v = parse_number(f[5]);
  if (!v) throw DomainError("non-numeric value '" + std::string(trim(f[5])) + "'");
  e.value = *v;
  return e;
}

std::string format_value(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

bool has_suffix(const std::string& s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

bool event_less(const SensorEvent& a, const SensorEvent& b) {
  return std::tie(a.timestamp, a.sensor_id, a.channel, a.value, a.kind) <
         std::tie(b.timestamp, b.sensor_id, b.channel, b.value, b.kind);
}

bool same_reading(const SensorEvent& a, const SensorEvent& b) {
  return a.timestamp == b.timestamp && a.sensor_id == b.sensor_id && a.channel == b.channel &&
         a.value == b.value && a.kind == b.kind;
}

}  // namespace

Format parse_format(std::string_view tag) {
  if (tag == "csv") return Format::Csv;
  if (tag == "jsonl") return Format::Jsonl;
  throw IngestError("unknown format '" + std::string(tag) + "' (expected csv or jsonl)");
}

ParseResult parse_events(std::istream& in, Format format) {
  ParseResult out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto body = trim(line);
    if (body.empty()) continue;
    if (format == Format::Csv && lineno == 1 && body.starts_with("timestamp,")) {
      if (body != kCsvHeader)
        out.diagnostics.push_back({Severity::Warning, "unexpected header columns", lineno});
      continue;
    }
    try {
      SensorEvent e;
      if (format == Format::Csv) {
        e = parse_csv_fields(split_csv(body));
      } else {
        e = json::parse(body).get<SensorEvent>();
      }
      if (auto problem = check_event(e)) {
        out.diagnostics.push_back({Severity::Warning, *problem, lineno});
        continue;
      }
      out.events.push_back(std::move(e));
    } catch (const std::exception& ex) {
      out.diagnostics.push_back({Severity::Warning, ex.what(), lineno});
    }
  }
  if (in.bad()) throw IngestError("read error after line " + std::to_string(lineno));
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  const auto name = path.string();
  if (has_suffix(name, ".gz")) {
    gzFile gz = gzopen(name.c_str(), "rb");
    if (gz == nullptr) throw IngestError("cannot open " + name);
    std::string out;
    char buf[1 << 15];
    int n = 0;
    while ((n = gzread(gz, buf, sizeof buf)) > 0) out.append(buf, static_cast<std::size_t>(n));
    const bool failed = n < 0;
    gzclose(gz);
    if (failed) throw IngestError("corrupt gzip stream in " + name);
    return out;
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError("cannot open " + name);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ParseResult read_events_file(const std::filesystem::path& path, std::optional<Format> format) {
  if (!format) {
    auto name = path.string();
    if (has_suffix(name, ".gz")) name.resize(name.size() - 3);
    if (has_suffix(name, ".csv"))
      format = Format::Csv;
    else if (has_suffix(name, ".jsonl"))
      format = Format::Jsonl;
    else
      throw IngestError("cannot infer format of " + path.string() + "; pass it explicitly");
  }
  std::istringstream in(read_text_file(path));
  return parse_events(in, *format);
}

void write_events_csv(std::ostream& out, std::span<const SensorEvent> events) {
  out << kCsvHeader << '\n';
  for (const auto& e : events) {
    out << format_instant(e.timestamp) << ',' << e.participant_id << ',' << e.sensor_id << ','
        << to_string(e.kind) << ',' << (e.channel ? to_string(*e.channel) : "") << ','
        << format_value(e.value) << '\n';
  }
}

void write_events_jsonl(std::ostream& out, std::span<const SensorEvent> events) {
  for (const auto& e : events) out << json(e).dump() << '\n';
}

std::span<const SensorEvent> EventLog::between(Instant from, Instant to) const {
  if (to <= from) return {};
  const auto lo = std::lower_bound(events.begin(), events.end(), from,
                                   [](const SensorEvent& e, Instant t) { return e.timestamp < t; });
  const auto hi = std::lower_bound(lo, events.end(), to,
                                   [](const SensorEvent& e, Instant t) { return e.timestamp < t; });
  return {lo, hi};
}

std::set<SensorKey> EventLog::sensor_keys() const {
  std::set<SensorKey> out;
  for (const auto& e : events) out.insert({e.sensor_id, e.channel});
  return out;
}

EventLog EventLog::slice(Instant from, Instant to) const {
  const auto part = between(from, to);
  return build_log(std::vector<SensorEvent>(part.begin(), part.end()));
}

EventLog build_log(std::vector<SensorEvent> events) {
  if (events.empty()) throw IngestError("cannot build an event log from no events");
  const std::string pid = events.front().participant_id;
  for (const auto& e : events)
    if (e.participant_id != pid)
      throw IngestError("mixed participants in one log: '" + pid + "' and '" + e.participant_id + "'");
  std::sort(events.begin(), events.end(), event_less);
  events.erase(std::unique(events.begin(), events.end(), same_reading), events.end());

  EventLog log;
  log.participant_id = pid;
  log.first = events.front().timestamp;
  log.last = events.back().timestamp;
  for (const auto& e : events) log.sensor_inventory.insert(e.sensor_id);
  log.events = std::move(events);
  return log;
}

int logging_days(const EventLog& log, const TimeZone& tz) {
  if (log.events.empty()) throw IngestError("logging_days of an empty log");
  int days = 0;
  std::optional<LocalDate> prev;
  for (const auto& e : log.events) {
    const auto d = tz.local_date(e.timestamp);
    if (!prev || d != *prev) {
      // events are time-sorted, so local dates are non-decreasing
      ++days;
      prev = d;
    }
  }
  return days;
}

int span_days(const EventLog& log, const TimeZone& tz) {
  if (log.events.empty()) throw IngestError("span_days of an empty log");
  const std::chrono::sys_days a{tz.local_date(log.first)};
  const std::chrono::sys_days b{tz.local_date(log.last)};
  return static_cast<int>((b - a).count()) + 1;
}

AnnotationParse parse_annotations(std::istream& in) {
  AnnotationParse out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    try {
      auto a = json::parse(line).get<Annotation>();
      a.validate();
      out.annotations.push_back(std::move(a));
    } catch (const std::exception& ex) {
      out.diagnostics.push_back({Severity::Warning, ex.what(), lineno});
    }
  }
  return out;
}

AnnotationParse read_annotations_file(const std::filesystem::path& path) {
  std::istringstream in(read_text_file(path));
  return parse_annotations(in);
}

void write_annotations_jsonl(std::ostream& out, std::span<const Annotation> annotations) {
  for (const auto& a : annotations) out << json(a).dump() << '\n';
}

std::vector<AdlEvent> parse_adl_events(std::istream& in) {
  std::vector<AdlEvent> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    try {
      out.push_back(json::parse(line).get<AdlEvent>());
    } catch (const std::exception& ex) {
      throw IngestError("ADL event line " + std::to_string(lineno) + ": " + ex.what());
    }
  }
  return out;
}

std::vector<AdlEvent> read_adl_events_file(const std::filesystem::path& path) {
  std::istringstream in(read_text_file(path));
  return parse_adl_events(in);
}

void write_adl_events_jsonl(std::ostream& out, std::span<const AdlEvent> events) {
  for (const auto& e : events) out << json(e).dump() << '\n';
}

}  // namespace adlmine
