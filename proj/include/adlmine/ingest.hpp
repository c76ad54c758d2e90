#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "adlmine/domain.hpp"

namespace adlmine {

class IngestError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Format { Csv, Jsonl };

// "csv" | "jsonl"; throws IngestError otherwise.
Format parse_format(std::string_view tag);

struct ParseResult {
  std::vector<SensorEvent> events;
  std::vector<Diagnostic> diagnostics;
};

inline constexpr std::string_view kCsvHeader = "timestamp,participant_id,sensor_id,kind,channel,value";

// Malformed lines become line-numbered warnings; the rest of the input is still read.
ParseResult parse_events(std::istream& in, Format format);

// Reads a file, picking the format from its extension (.csv, .jsonl, optionally
// followed by .gz) unless one is given. Throws IngestError if unreadable.
ParseResult read_events_file(const std::filesystem::path& path, std::optional<Format> format = std::nullopt);

// Whole file contents, transparently gunzipped for *.gz.
std::string read_text_file(const std::filesystem::path& path);

void write_events_csv(std::ostream& out, std::span<const SensorEvent> events);
void write_events_jsonl(std::ostream& out, std::span<const SensorEvent> events);

/// Sorted, de-duplicated events of one participant.
struct EventLog {
  std::string participant_id;
  std::vector<SensorEvent> events;
  Instant first{};
  Instant last{};
  std::set<std::string> sensor_inventory;

  // Events with timestamp in [from, to).
  std::span<const SensorEvent> between(Instant from, Instant to) const;
  std::set<SensorKey> sensor_keys() const;
  // Events with timestamp in [from, to), re-indexed as a new log. Throws if empty.
  EventLog slice(Instant from, Instant to) const;

  friend bool operator==(const EventLog&, const EventLog&) = default;
};

// Throws IngestError on empty input or mixed participants.
EventLog build_log(std::vector<SensorEvent> events);

// Calendar days (in tz) with at least one event.
int logging_days(const EventLog& log, const TimeZone& tz);
// Calendar days from the first event's date to the last event's date, inclusive.
int span_days(const EventLog& log, const TimeZone& tz);

// Annotation / ADL-event JSONL helpers. Bad lines become diagnostics.
struct AnnotationParse {
  std::vector<Annotation> annotations;
  std::vector<Diagnostic> diagnostics;
};
AnnotationParse parse_annotations(std::istream& in);
AnnotationParse read_annotations_file(const std::filesystem::path& path);
void write_annotations_jsonl(std::ostream& out, std::span<const Annotation> annotations);

std::vector<AdlEvent> read_adl_events_file(const std::filesystem::path& path);
std::vector<AdlEvent> parse_adl_events(std::istream& in);
void write_adl_events_jsonl(std::ostream& out, std::span<const AdlEvent> events);

}  // namespace adlmine
