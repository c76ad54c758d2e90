#include "adlmine/timeline.hpp"

#include <algorithm>

namespace adlmine {

std::string_view to_string(SensorCategory c) {
  switch (c) {
    case SensorCategory::Motion: return "motion";
    case SensorCategory::Contact: return "contact";
    case SensorCategory::Electrical: return "electrical";
    case SensorCategory::Environmental: return "environmental";
  }
  return "motion";
}

SensorCategory category_of(SensorKind kind) {
  switch (kind) {
    case SensorKind::Contact: return SensorCategory::Contact;
    case SensorKind::Motion: return SensorCategory::Motion;
    case SensorKind::SmartPlug: return SensorCategory::Electrical;
    case SensorKind::MultiEnvironment: return SensorCategory::Environmental;
  }
  return SensorCategory::Motion;
}

TimelineDoc build_timeline(const EventLog& log, const SensorMap& map, const RuleSet* rules, const TimeZone& tz,
                           Instant from, Instant to, Minutes bucket) {
  if (to <= from) throw DomainError("timeline range is empty or inverted");
  if (bucket <= Minutes{0}) throw DomainError("bucket size must be positive");

  TimelineDoc doc;
  doc.participant_id = log.participant_id;
  doc.from = from;
  doc.to = to;
  doc.bucket = bucket;

  // Kind of every sensor, from anywhere in the log, so lanes exist even for
  // sensors that are silent in the range.
  std::map<std::string, SensorKind> kinds;
  for (const auto& e : log.events) kinds.try_emplace(e.sensor_id, e.kind);

  std::map<SensorKey, std::map<Instant, Bucket>> series;
  for (const auto& key : log.sensor_keys()) series[key];
  for (const auto& e : log.between(from, to)) {
    const auto slot = from + (e.timestamp - from) / bucket * bucket;
    auto& b = series[SensorKey{e.sensor_id, e.channel}][slot];
    if (b.count == 0) {
      b.start = slot;
      b.max = e.value;
    }
    ++b.count;
    b.max = std::max(b.max, e.value);
  }

  for (const auto& sensor : log.sensor_inventory) {
    Lane lane;
    lane.sensor_id = sensor;
    lane.category = category_of(kinds.at(sensor));
    for (auto it = series.lower_bound(SensorKey{sensor, std::nullopt});
         it != series.end() && it->first.sensor_id == sensor; ++it) {
      LaneSeries s;
      s.channel = it->first.channel;
      s.role = map.canonical_role(sensor, it->first.channel).role;
      for (const auto& [at, b] : it->second) s.buckets.push_back(b);
      lane.series.push_back(std::move(s));
    }
    doc.lanes.push_back(std::move(lane));
  }

  if (rules != nullptr) {
    doc.ruleset_id = rules->id();
    doc.ruleset_content_hash = rules->content_hash();
    doc.candidates = detect_all(log, map, *rules, rules->params, tz, Interval{from, to}).all();
  }
  return doc;
}

json timeline_to_json(const TimelineDoc& doc) {
  json lanes = json::array();
  for (const auto& lane : doc.lanes) {
    json series = json::array();
    for (const auto& s : lane.series) {
      json buckets = json::array();
      for (const auto& b : s.buckets)
        buckets.push_back({{"start", format_instant(b.start)}, {"count", b.count}, {"max", b.max}});
      series.push_back({{"channel", s.channel ? json(to_string(*s.channel)) : json(nullptr)},
                        {"role", s.role ? json(*s.role) : json(nullptr)},
                        {"buckets", std::move(buckets)}});
    }
    lanes.push_back({{"sensor_id", lane.sensor_id}, {"category", to_string(lane.category)}, {"series", series}});
  }
  return json{{"schema", kTimelineSchema},
              {"participant_id", doc.participant_id},
              {"from", format_instant(doc.from)},
              {"to", format_instant(doc.to)},
              {"bucket_minutes", doc.bucket.count()},
              {"revision", doc.revision},
              {"ruleset_id", doc.ruleset_id ? json(*doc.ruleset_id) : json(nullptr)},
              {"ruleset_content_hash", doc.ruleset_content_hash ? json(*doc.ruleset_content_hash) : json(nullptr)},
              {"lanes", std::move(lanes)},
              {"candidates", doc.candidates}};
}

}  // namespace adlmine
