#pragma once

#include <map>
#include <span>
#include <string>

#include "adlmine/domain.hpp"
#include "adlmine/ingest.hpp"

namespace adlmine {

struct HumidityReading {
  Instant at{};
  double percent = 0.0;
};

// True iff max - min >= delta and the maximum is reached no earlier than the
// minimum (a rise, not a fall). Ties take the earliest minimum and the latest
// maximum. Fewer than two readings is never a rise.
bool humidity_rise(std::span<const HumidityReading> readings, double delta);

// When an item fired inside a window. For a humidity rise this spans the
// minimum reading to the peak.
struct ItemEvidence {
  Instant first{};
  Instant last{};
  friend bool operator==(const ItemEvidence&, const ItemEvidence&) = default;
};

struct WindowItems {
  std::map<std::string, ItemEvidence> items;
  std::size_t unmapped_events = 0;
  std::set<std::string> unmapped_sensors;

  ItemSet item_set() const;
};

// Binary activation predicates over the given events (all assumed inside one window):
// Contact opens, Motion activations, SmartPlug draw >= threshold, humidity rises.
// Contact closes and temperature/light readings contribute nothing.
WindowItems collect_items(std::span<const SensorEvent> events, const SensorMap& map,
                          const MiningParams& params);

// Window events are taken from [start, start + size), truncated at the log's end.
WindowItems window_items(const EventLog& log, const Window& window, const SensorMap& map,
                         const MiningParams& params);

Transaction items_for_window(const EventLog& log, const Window& window, const SensorMap& map,
                             const MiningParams& params);

// Whether the event counts as an interior motion activation.
bool is_motion_activation(const SensorEvent& e);

}  // namespace adlmine
