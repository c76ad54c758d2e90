#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "adlmine/domain.hpp"
#include "adlmine/ingest.hpp"

namespace adlmine {

class ScriptError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ScriptedActivity {
  AdlKind adl = AdlKind::EatingDrinking;
  Minutes start{0};  // local clock time
  Minutes jitter{0};  // start drawn uniformly from start +- jitter
  Minutes duration{20};
  std::vector<std::string> signature;  // roles
  double probability = 1.0;            // chance of occurring on a given day
  Minutes away{90};                    // LeavingHouse: time until the return
};

// Front-door opening followed by continuing interior motion.
struct ScriptedCaller {
  Minutes start{0};
  Minutes jitter{0};
  Minutes duration{20};
  double probability = 1.0;
  std::string door = "FrontDoor";
  std::vector<std::string> motion_roles{"HallMotion"};
};

struct RoutineScript {
  std::string participant_id;
  LocalDate start_date{std::chrono::year{2022}, std::chrono::month{3}, std::chrono::day{1}};
  std::string timezone = "UTC";
  std::uint64_t seed = 1;
  double noise_per_hour = 0.0;
  std::vector<std::string> noise_roles;
  Minutes humidity_interval{5};
  double humidity_baseline = 55.0;
  double humidity_peak = 75.0;
  std::vector<ScriptedActivity> activities;
  std::vector<ScriptedCaller> callers;

  // Throws ScriptError: unknown roles, signatures using roles outside the ADL's
  // group and the declared noise roles, bad probabilities or durations.
  void validate() const;
};

void to_json(json& j, const RoutineScript& s);
void from_json(const json& j, RoutineScript& s);

struct SynthOutput {
  EventLog log;
  std::vector<AdlEvent> truth;  // ordered by ADL, then start
  SensorMap map;
};

// Deterministic for a given script (including its seed). Sensors are named
// after their canonical roles ("Kettle"; multi-sensors by room, "Bathroom"),
// so SensorMap::implicit over the sensors that fired agrees with `map`; `map`
// also lists scripted sensors that stayed silent.
SynthOutput generate(const RoutineScript& script, int days);

}  // namespace adlmine
