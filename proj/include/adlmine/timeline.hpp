#pragma once

#include <span>
#include <string>
#include <vector>

#include "adlmine/detect.hpp"
#include "adlmine/ruleset.hpp"

namespace adlmine {

inline constexpr std::string_view kTimelineSchema = "adlmine.timeline/1";

enum class SensorCategory { Motion, Contact, Electrical, Environmental };
std::string_view to_string(SensorCategory c);
SensorCategory category_of(SensorKind kind);

struct Bucket {
  Instant start{};
  std::size_t count = 0;  // events in [start, start + bucket)
  double max = 0.0;       // largest reading among them
};

struct LaneSeries {
  std::optional<Channel> channel;
  std::optional<std::string> role;
  std::vector<Bucket> buckets;  // non-empty buckets only, by start
};

// One lane per physical sensor of the home; multi-environment sensors carry
// one series per channel.
struct Lane {
  std::string sensor_id;
  SensorCategory category = SensorCategory::Motion;
  std::vector<LaneSeries> series;
};

struct TimelineDoc {
  std::string participant_id;
  Instant from{};
  Instant to{};
  Minutes bucket{60};
  std::vector<Lane> lanes;
  std::vector<AdlEvent> candidates;  // by ADL, then start
  std::optional<std::string> ruleset_id;
  std::optional<std::string> ruleset_content_hash;
  std::uint64_t revision = 0;
};

// Raw lanes for every sensor in the log's inventory over [from, to), plus the
// rule set's detections over the same range when one is given.
TimelineDoc build_timeline(const EventLog& log, const SensorMap& map, const RuleSet* rules, const TimeZone& tz,
                           Instant from, Instant to, Minutes bucket = Minutes{60});

json timeline_to_json(const TimelineDoc& doc);

}  // namespace adlmine
