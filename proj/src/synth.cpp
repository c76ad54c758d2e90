#include "adlmine/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace adlmine {
namespace {

// Engine output is fixed by the standard; the distributions below are spelled
// out so that generated files do not depend on the standard library vendor.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  bool chance(double p) { return uniform() < p; }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n; }
  Millis between(Millis lo, Millis hi) {
    if (hi <= lo) return lo;
    return lo + Millis{static_cast<long long>(uniform() * static_cast<double>((hi - lo).count()))};
  }
  Millis exponential_gap(double per_hour) {
    const double hours = -std::log(1.0 - uniform()) / per_hour;
    return Millis{static_cast<long long>(hours * 3'600'000.0)};
  }

 private:
  std::mt19937_64 engine_;
};

struct Bath {
  Instant from;
  Instant to;
};

std::string sensor_for(const std::string& role, const RoleInfo& info) {
  if (!info.channel) return role;
  auto suffix = std::string(to_string(*info.channel));
  suffix[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(suffix[0])));
  // Roles of a multi-sensor are named room + channel; the sensor is the room.
  if (role.size() > suffix.size() && role.compare(role.size() - suffix.size(), suffix.size(), suffix) == 0)
    return role.substr(0, role.size() - suffix.size());
  return role;
}

double plug_watts(const std::string& role) {
  const auto* info = find_role(role);
  const std::string base = info ? info->name : role;
  if (base == "Kettle") return 1850.0;
  if (base == "Microwave") return 900.0;
  if (base == "Toaster") return 950.0;
  if (base == "TvPlug") return 120.0;
  return 60.0;
}

bool is_motion_role(const RoleInfo& info) {
  return info.kind == SensorKind::Motion || info.channel == Channel::Motion;
}

class Generator {
 public:
  Generator(const RoutineScript& script) : script_(script), rng_(script.seed), tz_(TimeZone::load(script.timezone)) {}

  SynthOutput run(int days) {
    register_role_sensors();
    std::vector<Bath> baths;
    auto day = script_.start_date;
    for (int i = 0; i < days; ++i, day = next_day(day)) generate_day(day, baths);
    emit_environment(baths, days);

    SynthOutput out;
    out.log = build_log(std::move(events_));
    out.map = std::move(map_);
    std::sort(truth_.begin(), truth_.end(), [](const AdlEvent& a, const AdlEvent& b) {
      return std::tie(a.adl, a.start) < std::tie(b.adl, b.start);
    });
    out.truth = std::move(truth_);
    return out;
  }

 private:
  void register_role_sensors() {
    map_ = SensorMap(script_.participant_id);
    auto add = [&](const std::string& role) {
      const auto* info = find_role(role);
      if (info == nullptr) throw ScriptError("unknown role '" + role + "'");
      map_.add(SensorKey{sensor_for(role, *info), info->channel}, role);
    };
    for (const auto& a : script_.activities)
      for (const auto& r : a.signature) add(r);
    for (const auto& r : script_.noise_roles) add(r);
    for (const auto& c : script_.callers) {
      add(c.door);
      for (const auto& r : c.motion_roles) add(r);
    }
    // Multi-sensors also report temperature.
    for (const auto& [key, role] : std::map<SensorKey, std::string>(map_.entries())) {
      if (!key.channel) continue;
      const std::string temp_role = key.sensor_id + "Temperature";
      if (find_role(temp_role) != nullptr) map_.add(SensorKey{key.sensor_id, Channel::Temperature}, temp_role);
    }
  }

  SensorKey key_of(const std::string& role) const {
    const auto* info = find_role(role);
    return SensorKey{sensor_for(role, *info), info->channel};
  }

  void push(const std::string& role, Instant t, double value) {
    const auto key = key_of(role);
    const auto* info = find_role(role);
    events_.push_back(SensorEvent{script_.participant_id, key.sensor_id, t, info->channel ? SensorKind::MultiEnvironment : info->kind,
                                  key.channel, value});
  }

  // Emits the raw readings of one activation of `role` at t.
  void activate(const std::string& role, Instant t) {
    const auto* info = find_role(role);
    if (info->channel == Channel::Humidity || info->channel == Channel::Temperature ||
        info->channel == Channel::Light)
      return;  // environmental traces are synthesised separately
    if (is_motion_role(*info)) {
      push(role, t, 1.0);
      return;
    }
    switch (info->kind) {
      case SensorKind::Contact:
        push(role, t, 1.0);
        push(role, t + rng_.between(Millis{10'000}, Millis{60'000}), 0.0);
        break;
      case SensorKind::SmartPlug:
        push(role, t, plug_watts(role));
        push(role, t + rng_.between(Millis{120'000}, Millis{240'000}), 0.0);
        break;
      default:
        push(role, t, 1.0);
        break;
    }
  }

  bool away_at(Instant t) const {
    return std::any_of(away_.begin(), away_.end(), [&](const Bath& a) { return t > a.from && t < a.to; });
  }

  bool overlaps_away(Instant from, Instant to) const {
    return std::any_of(away_.begin(), away_.end(), [&](const Bath& a) { return from < a.to && a.from < to; });
  }

  bool overlaps_truth(AdlKind adl, Instant from, Instant to) const {
    return std::any_of(truth_.begin(), truth_.end(),
                       [&](const AdlEvent& e) { return e.adl == adl && from <= e.end && e.start <= to; });
  }

  Instant jittered(LocalDate day, Minutes start, Minutes jitter) {
    const auto base = tz_.at(day, start);
    return base - jitter + rng_.between(Millis{0}, Millis{2 * jitter});
  }

  void record_truth(AdlKind adl, Instant from, Instant to, ItemSet items) {
    AdlEvent e;
    e.participant_id = script_.participant_id;
    e.adl = adl;
    e.start = from;
    e.end = to;
    e.contributing_items = std::move(items);
    e.candidate_id = candidate_id(e.participant_id, adl, from, to);
    truth_.push_back(std::move(e));
  }

  void departure(const ScriptedActivity& a, LocalDate day) {
    if (!rng_.chance(a.probability)) return;
    const auto t0 = jittered(day, a.start, a.jitter);
    std::string door;
    std::vector<std::string> inside;
    for (const auto& r : a.signature) {
      if (door.empty() && find_role(r)->groups.contains(AdlKind::LeavingHouse))
        door = r;
      else
        inside.push_back(r);
    }
    const auto pre = t0 - Millis{rng_.between(Millis{60'000}, Millis{240'000})};
    const auto back = t0 + a.away;
    if (overlaps_away(pre, back) || overlaps_truth(AdlKind::LeavingHouse, pre, back)) return;
    for (const auto& r : inside) activate(r, pre + rng_.between(Millis{0}, Millis{30'000}));
    activate(door, t0);
    ItemSet items(a.signature.begin(), a.signature.end());
    record_truth(AdlKind::LeavingHouse, inside.empty() ? t0 : pre, t0 + Minutes{1}, std::move(items));
    away_.push_back({t0, back});

    // Coming home: door, then movement indoors.
    activate(door, back);
    const auto& mover = inside.empty() ? std::string("HallMotion") : inside.front();
    if (find_role(mover) != nullptr && map_.canonical_role(key_of(mover).sensor_id, key_of(mover).channel).mapped()) {
      activate(mover, back + rng_.between(Millis{30'000}, Millis{180'000}));
      activate(mover, back + rng_.between(Millis{240'000}, Millis{600'000}));
    }
  }

  void activity(const ScriptedActivity& a, LocalDate day, std::vector<Bath>& baths) {
    if (!rng_.chance(a.probability)) return;
    const auto t0 = jittered(day, a.start, a.jitter);
    const auto t1 = t0 + a.duration;
    if (overlaps_away(t0, t1) || overlaps_truth(a.adl, t0, t1)) return;
    ItemSet items;
    for (const auto& role : a.signature) {
      const auto* info = find_role(role);
      items.insert(role);
      if (info->channel == Channel::Humidity) {
        baths.push_back({t0, t1});
        continue;
      }
      if (is_motion_role(*info)) {
        auto t = t0 + rng_.between(Millis{0}, Millis{120'000});
        while (t < t1) {
          activate(role, t);
          t += rng_.between(Millis{180'000}, Millis{480'000});
        }
        continue;
      }
      const auto latest = info->kind == SensorKind::SmartPlug ? t1 - Minutes{3} : t1;
      activate(role, t0 + rng_.between(Millis{0}, std::max(Millis{0}, latest - t0)));
    }
    record_truth(a.adl, t0, t1, std::move(items));
  }

  void caller(const ScriptedCaller& c, LocalDate day) {
    if (!rng_.chance(c.probability)) return;
    const auto tc = jittered(day, c.start, c.jitter);
    const auto end = tc + c.duration;
    if (overlaps_away(tc - Minutes{15}, end + Minutes{15})) return;
    activate(c.door, tc);
    auto t = tc + rng_.between(Millis{30'000}, Millis{120'000});
    while (t < end) {
      activate(c.motion_roles[rng_.index(c.motion_roles.size())], t);
      t += rng_.between(Millis{120'000}, Millis{300'000});
    }
    activate(c.door, end);
    activate(c.motion_roles.front(), end + rng_.between(Millis{60'000}, Millis{240'000}));
    activate(c.motion_roles.front(), end + rng_.between(Millis{300'000}, Millis{600'000}));
  }

  void noise(LocalDate day) {
    if (script_.noise_per_hour <= 0.0 || script_.noise_roles.empty()) return;
    const auto from = tz_.midnight(day);
    const auto to = tz_.midnight(next_day(day));
    for (auto t = from + rng_.exponential_gap(script_.noise_per_hour); t < to;
         t += rng_.exponential_gap(script_.noise_per_hour)) {
      const auto& role = script_.noise_roles[rng_.index(script_.noise_roles.size())];
      if (away_at(t)) continue;
      activate(role, t);
    }
  }

  void generate_day(LocalDate day, std::vector<Bath>& baths) {
    for (const auto& a : script_.activities)
      if (a.adl == AdlKind::LeavingHouse) departure(a, day);
    for (const auto& a : script_.activities)
      if (a.adl != AdlKind::LeavingHouse) activity(a, day, baths);
    for (const auto& c : script_.callers) caller(c, day);
    noise(day);
  }

  // Humidity: baseline, exponential rise while bathing, exponential decay after.
  // Temperature: a smooth daily cycle. Both are sampled on a fixed cadence.
  void emit_environment(const std::vector<Bath>& baths, int days) {
    const auto from = tz_.midnight(script_.start_date);
    auto last_day = script_.start_date;
    for (int i = 0; i < days; ++i) last_day = next_day(last_day);
    const auto to = tz_.midnight(last_day);
    constexpr double rise_tau_min = 6.0;
    constexpr double decay_tau_min = 15.0;
    const double amplitude = script_.humidity_peak - script_.humidity_baseline;

    for (const auto& [key, role] : map_.entries()) {
      if (key.channel == Channel::Humidity) {
        for (auto t = from; t < to; t += script_.humidity_interval) {
          double excess = 0.0;
          for (const auto& b : baths) {
            if (t < b.from) continue;
            const double in_bath = std::chrono::duration<double, std::ratio<60>>(std::min(t, b.to) - b.from).count();
            const double peak = amplitude * (1.0 - std::exp(-in_bath / rise_tau_min));
            double v = peak;
            if (t > b.to) {
              const double since = std::chrono::duration<double, std::ratio<60>>(t - b.to).count();
              v = peak * std::exp(-since / decay_tau_min);
            }
            excess = std::max(excess, v);
          }
          const double value = std::round((script_.humidity_baseline + excess) * 10.0) / 10.0;
          events_.push_back(SensorEvent{script_.participant_id, key.sensor_id, t, SensorKind::MultiEnvironment,
                                        Channel::Humidity, std::clamp(value, 0.0, 100.0)});
        }
      } else if (key.channel == Channel::Temperature) {
        for (auto t = from; t < to; t += Minutes{30}) {
          const double hour = std::chrono::duration<double, std::ratio<3600>>(t - from).count();
          const double value = std::round((20.0 + 2.0 * std::sin(2.0 * std::numbers::pi * hour / 24.0)) * 10.0) / 10.0;
          events_.push_back(SensorEvent{script_.participant_id, key.sensor_id, t, SensorKind::MultiEnvironment,
                                        Channel::Temperature, value});
        }
      }
    }
  }

  const RoutineScript& script_;
  Rng rng_;
  TimeZone tz_;
  SensorMap map_;
  std::vector<SensorEvent> events_;
  std::vector<AdlEvent> truth_;
  std::vector<Bath> away_;
};

Minutes read_minutes(const json& j, const char* key, Minutes fallback) {
  return j.contains(key) ? Minutes{j.at(key).get<long>()} : fallback;
}

std::string clock_text(Minutes m) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%02d:%02d", static_cast<int>(m.count() / 60), static_cast<int>(m.count() % 60));
  return buf;
}

}  // namespace

void RoutineScript::validate() const {
  if (participant_id.empty()) throw ScriptError("script needs a participant_id");
  if (noise_per_hour < 0.0) throw ScriptError("noise rate must be non-negative");
  if (noise_per_hour > 0.0 && noise_roles.empty()) throw ScriptError("noise rate set but no noise roles declared");
  if (humidity_interval <= Minutes{0}) throw ScriptError("humidity interval must be positive");
  if (!(humidity_baseline >= 0.0 && humidity_peak <= 100.0 && humidity_peak >= humidity_baseline))
    throw ScriptError("humidity baseline/peak must satisfy 0 <= baseline <= peak <= 100");
  try {
    (void)TimeZone::load(timezone);
  } catch (const TimeError& e) {
    throw ScriptError(e.what());
  }
  const std::set<std::string> noise(noise_roles.begin(), noise_roles.end());
  for (const auto& r : noise_roles)
    if (find_role(r) == nullptr) throw ScriptError("unknown noise role '" + r + "'");
  for (const auto& a : activities) {
    if (a.signature.empty()) throw ScriptError("activity without a signature");
    if (a.probability < 0.0 || a.probability > 1.0) throw ScriptError("probability must be within [0,1]");
    if (a.duration <= Minutes{0} || a.jitter < Minutes{0}) throw ScriptError("bad activity duration or jitter");
    bool has_door = false;
    for (const auto& r : a.signature) {
      const auto* info = find_role(r);
      if (info == nullptr) throw ScriptError("unknown role '" + r + "'");
      if (!info->groups.contains(a.adl) && !noise.contains(r))
        throw ScriptError("role '" + r + "' is neither grouped with " + std::string(to_string(a.adl)) +
                          " nor a declared noise role");
      has_door = has_door || info->groups.contains(AdlKind::LeavingHouse);
    }
    if (a.adl == AdlKind::LeavingHouse && !has_door) throw ScriptError("departure signature needs a door role");
    if (a.adl == AdlKind::LeavingHouse && a.away <= Minutes{0}) throw ScriptError("away time must be positive");
  }
  for (const auto& c : callers) {
    const auto* door = find_role(c.door);
    if (door == nullptr || !door->groups.contains(AdlKind::LeavingHouse))
      throw ScriptError("caller door '" + c.door + "' is not an external door role");
    if (c.motion_roles.empty()) throw ScriptError("caller pattern needs interior motion roles");
    for (const auto& r : c.motion_roles) {
      const auto* info = find_role(r);
      if (info == nullptr || !is_motion_role(*info)) throw ScriptError("'" + r + "' is not a motion role");
    }
    if (c.probability < 0.0 || c.probability > 1.0) throw ScriptError("probability must be within [0,1]");
  }
}

void to_json(json& j, const RoutineScript& s) {
  json acts = json::array();
  for (const auto& a : s.activities) {
    acts.push_back({{"adl", to_string(a.adl)},
                    {"start", clock_text(a.start)},
                    {"jitter_minutes", a.jitter.count()},
                    {"duration_minutes", a.duration.count()},
                    {"signature", a.signature},
                    {"probability", a.probability},
                    {"away_minutes", a.away.count()}});
  }
  json callers = json::array();
  for (const auto& c : s.callers) {
    callers.push_back({{"start", clock_text(c.start)},
                       {"jitter_minutes", c.jitter.count()},
                       {"duration_minutes", c.duration.count()},
                       {"probability", c.probability},
                       {"door", c.door},
                       {"motion_roles", c.motion_roles}});
  }
  j = json{{"participant_id", s.participant_id},
           {"start_date", format_date(s.start_date)},
           {"timezone", s.timezone},
           {"seed", s.seed},
           {"noise_per_hour", s.noise_per_hour},
           {"noise_roles", s.noise_roles},
           {"humidity_interval_minutes", s.humidity_interval.count()},
           {"humidity_baseline", s.humidity_baseline},
           {"humidity_peak", s.humidity_peak},
           {"activities", acts},
           {"callers", callers}};
}

void from_json(const json& j, RoutineScript& s) {
  RoutineScript out;
  out.participant_id = j.at("participant_id").get<std::string>();
  if (j.contains("start_date")) out.start_date = parse_date(j.at("start_date").get<std::string>());
  out.timezone = j.value("timezone", out.timezone);
  out.seed = j.value("seed", out.seed);
  out.noise_per_hour = j.value("noise_per_hour", out.noise_per_hour);
  out.noise_roles = j.value("noise_roles", out.noise_roles);
  out.humidity_interval = read_minutes(j, "humidity_interval_minutes", out.humidity_interval);
  out.humidity_baseline = j.value("humidity_baseline", out.humidity_baseline);
  out.humidity_peak = j.value("humidity_peak", out.humidity_peak);
  for (const auto& a : j.value("activities", json::array())) {
    ScriptedActivity act;
    act.adl = parse_adl(a.at("adl").get<std::string>());
    act.start = parse_clock(a.at("start").get<std::string>());
    act.jitter = read_minutes(a, "jitter_minutes", act.jitter);
    act.duration = read_minutes(a, "duration_minutes", act.duration);
    act.signature = a.at("signature").get<std::vector<std::string>>();
    act.probability = a.value("probability", act.probability);
    act.away = read_minutes(a, "away_minutes", act.away);
    out.activities.push_back(std::move(act));
  }
  for (const auto& c : j.value("callers", json::array())) {
    ScriptedCaller cal;
    cal.start = parse_clock(c.at("start").get<std::string>());
    cal.jitter = read_minutes(c, "jitter_minutes", cal.jitter);
    cal.duration = read_minutes(c, "duration_minutes", cal.duration);
    cal.probability = c.value("probability", cal.probability);
    cal.door = c.value("door", cal.door);
    cal.motion_roles = c.value("motion_roles", cal.motion_roles);
    out.callers.push_back(std::move(cal));
  }
  s = std::move(out);
}

SynthOutput generate(const RoutineScript& script, int days) {
  if (days < 1) throw ScriptError("days must be at least 1");
  script.validate();
  return Generator(script).run(days);
}

}  // namespace adlmine
