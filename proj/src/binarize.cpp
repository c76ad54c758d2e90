#include "adlmine/binarize.hpp"

#include <algorithm>
#include <tuple>

namespace adlmine {
namespace {

void note(std::map<std::string, ItemEvidence>& items, const std::string& role, Instant at) {
  auto [it, inserted] = items.try_emplace(role, ItemEvidence{at, at});
  if (!inserted) {
    it->second.first = std::min(it->second.first, at);
    it->second.last = std::max(it->second.last, at);
  }
}

// Earliest minimum, latest maximum.
std::pair<std::size_t, std::size_t> extremes(std::span<const HumidityReading> readings) {
  std::size_t lo = 0;
  std::size_t hi = 0;
  for (std::size_t i = 1; i < readings.size(); ++i) {
    if (readings[i].percent < readings[lo].percent) lo = i;
    if (readings[i].percent >= readings[hi].percent) hi = i;
  }
  return {lo, hi};
}

}  // namespace

bool humidity_rise(std::span<const HumidityReading> readings, double delta) {
  if (readings.size() < 2) return false;
  const auto [lo, hi] = extremes(readings);
  return readings[hi].percent - readings[lo].percent >= delta && readings[hi].at >= readings[lo].at;
}

ItemSet WindowItems::item_set() const {
  ItemSet out;
  for (const auto& [role, ev] : items) out.insert(role);
  return out;
}

bool is_motion_activation(const SensorEvent& e) {
  if (e.kind == SensorKind::Motion) return true;
  return e.kind == SensorKind::MultiEnvironment && e.channel == Channel::Motion && e.value >= 1.0;
}

WindowItems collect_items(std::span<const SensorEvent> events, const SensorMap& map,
                          const MiningParams& params) {
  WindowItems out;
  std::map<std::string, std::vector<HumidityReading>> humidity;
  for (const auto& e : events) {
    const auto lookup = map.canonical_role(e.sensor_id, e.channel);
    if (!lookup.mapped()) {
      ++out.unmapped_events;
      out.unmapped_sensors.insert(e.sensor_id);
      continue;
    }
    const auto& role = *lookup.role;
    switch (e.kind) {
      case SensorKind::Contact:
        if (e.value == 1.0) note(out.items, role, e.timestamp);
        break;
      case SensorKind::Motion:
        note(out.items, role, e.timestamp);
        break;
      case SensorKind::SmartPlug:
        if (e.value >= params.plug_threshold(role)) note(out.items, role, e.timestamp);
        break;
      case SensorKind::MultiEnvironment:
        if (e.channel == Channel::Motion) {
          if (is_motion_activation(e)) note(out.items, role, e.timestamp);
        } else if (e.channel == Channel::Humidity) {
          humidity[role].push_back({e.timestamp, e.value});
        }
        break;
    }
  }
  for (auto& [role, readings] : humidity) {
    std::sort(readings.begin(), readings.end(), [](const HumidityReading& a, const HumidityReading& b) {
      return std::tie(a.at, a.percent) < std::tie(b.at, b.percent);
    });
    if (!humidity_rise(readings, params.humidity_rise_delta)) continue;
    const auto [lo, hi] = extremes(readings);
    out.items[role] = ItemEvidence{readings[lo].at, readings[hi].at};
  }
  return out;
}

WindowItems window_items(const EventLog& log, const Window& window, const SensorMap& map,
                         const MiningParams& params) {
  return collect_items(log.between(window.start, window.end()), map, params);
}

Transaction items_for_window(const EventLog& log, const Window& window, const SensorMap& map,
                             const MiningParams& params) {
  return Transaction{window, window_items(log, window, map, params).item_set(), std::nullopt};
}

}  // namespace adlmine
