#include "adlmine/domain.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>

namespace adlmine {
namespace {

template <typename Enum, std::size_t N>
Enum parse_enum(std::string_view s, const std::array<std::pair<Enum, std::string_view>, N>& table,
                std::string_view what) {
  for (const auto& [value, name] : table)
    if (name == s) return value;
  throw DomainError("unknown " + std::string(what) + ": '" + std::string(s) + "'");
}

template <typename Enum, std::size_t N>
std::string_view enum_name(Enum e, const std::array<std::pair<Enum, std::string_view>, N>& table) {
  for (const auto& [value, name] : table)
    if (value == e) return name;
  return "?";
}

constexpr std::array<std::pair<SensorKind, std::string_view>, 4> kKinds{{
    {SensorKind::Contact, "Contact"},
    {SensorKind::Motion, "Motion"},
    {SensorKind::SmartPlug, "SmartPlug"},
    {SensorKind::MultiEnvironment, "MultiEnvironment"},
}};
constexpr std::array<std::pair<Channel, std::string_view>, 4> kChannels{{
    {Channel::Humidity, "humidity"},
    {Channel::Temperature, "temperature"},
    {Channel::Light, "light"},
    {Channel::Motion, "motion"},
}};
constexpr std::array<std::pair<AdlKind, std::string_view>, 4> kAdls{{
    {AdlKind::EatingDrinking, "EatingDrinking"},
    {AdlKind::Dressing, "Dressing"},
    {AdlKind::Bathing, "Bathing"},
    {AdlKind::LeavingHouse, "LeavingHouse"},
}};
constexpr std::array<std::pair<Verdict, std::string_view>, 3> kVerdicts{{
    {Verdict::Confirmed, "Confirmed"},
    {Verdict::Rejected, "Rejected"},
    {Verdict::Added, "Added"},
}};

std::map<std::string, RoleInfo> build_registry() {
  using K = SensorKind;
  using C = Channel;
  using A = AdlKind;
  const std::vector<RoleInfo> roles{
      // kitchen
      {"Kettle", K::SmartPlug, std::nullopt, {A::EatingDrinking}},
      {"Microwave", K::SmartPlug, std::nullopt, {A::EatingDrinking}},
      {"Toaster", K::SmartPlug, std::nullopt, {A::EatingDrinking}},
      {"Fridge", K::Contact, std::nullopt, {A::EatingDrinking}},
      {"CutleryDrawer", K::Contact, std::nullopt, {A::EatingDrinking}},
      {"CrockeryPress", K::Contact, std::nullopt, {A::EatingDrinking}},
      {"StaplesPress", K::Contact, std::nullopt, {A::EatingDrinking}},
      {"PotsPress", K::Contact, std::nullopt, {A::EatingDrinking}},
      {"KitchenMotion", K::MultiEnvironment, C::Motion, {A::EatingDrinking}},
      {"KitchenHumidity", K::MultiEnvironment, C::Humidity, {}},
      {"KitchenTemperature", K::MultiEnvironment, C::Temperature, {}},
      {"KitchenLight", K::MultiEnvironment, C::Light, {}},
      // bedroom
      {"Wardrobe", K::Contact, std::nullopt, {A::Dressing}},
      {"UnderwearDrawer", K::Contact, std::nullopt, {A::Dressing}},
      {"ClothesDrawer", K::Contact, std::nullopt, {A::Dressing}},
      {"BedroomMotion", K::Motion, std::nullopt, {}},
      // bathroom
      {"BathroomHumidity", K::MultiEnvironment, C::Humidity, {A::Bathing}},
      {"BathroomMotion", K::MultiEnvironment, C::Motion, {A::Bathing}},
      {"BathroomTemperature", K::MultiEnvironment, C::Temperature, {}},
      {"BathroomLight", K::MultiEnvironment, C::Light, {}},
      // external doors
      {"FrontDoor", K::Contact, std::nullopt, {A::LeavingHouse}},
      {"BackDoor", K::Contact, std::nullopt, {A::LeavingHouse}},
      {"PatioDoor", K::Contact, std::nullopt, {A::LeavingHouse}},
      // elsewhere
      {"HallMotion", K::Motion, std::nullopt, {}},
      {"LandingMotion", K::Motion, std::nullopt, {}},
      {"LivingRoomMotion", K::Motion, std::nullopt, {}},
      {"HallPress", K::Contact, std::nullopt, {}},
      {"LinenPress", K::Contact, std::nullopt, {}},
      {"TvPlug", K::SmartPlug, std::nullopt, {}},
  };
  std::map<std::string, RoleInfo> out;
  for (const auto& r : roles) out.emplace(r.name, r);
  return out;
}

json optional_string(const std::optional<std::string>& s) { return s ? json(*s) : json(nullptr); }

std::optional<std::string> read_optional_string(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<std::string>();
}

std::optional<Channel> read_channel(const json& j) {
  if (!j.contains("channel") || j.at("channel").is_null()) return std::nullopt;
  const auto s = j.at("channel").get<std::string>();
  if (s.empty()) return std::nullopt;
  return parse_channel(s);
}

json channel_json(const std::optional<Channel>& c) {
  return c ? json(std::string(to_string(*c))) : json(nullptr);
}

const std::set<AdlKind> kNoGroups{};

}  // namespace

std::string_view to_string(SensorKind k) { return enum_name(k, kKinds); }
std::string_view to_string(Channel c) { return enum_name(c, kChannels); }
std::string_view to_string(AdlKind a) { return enum_name(a, kAdls); }
std::string_view to_string(Verdict v) { return enum_name(v, kVerdicts); }

SensorKind parse_sensor_kind(std::string_view s) { return parse_enum(s, kKinds, "sensor kind"); }
Channel parse_channel(std::string_view s) { return parse_enum(s, kChannels, "channel"); }
AdlKind parse_adl(std::string_view s) { return parse_enum(s, kAdls, "ADL"); }
Verdict parse_verdict(std::string_view s) { return parse_enum(s, kVerdicts, "verdict"); }

std::string label_item(AdlKind a) { return "ADL:" + std::string(to_string(a)); }

std::optional<std::string> check_event(const SensorEvent& e) {
  if (e.participant_id.empty()) return "empty participant_id";
  if (e.sensor_id.empty()) return "empty sensor_id";
  if (!std::isfinite(e.value)) return "non-finite value";
  const bool multi = e.kind == SensorKind::MultiEnvironment;
  if (multi && !e.channel) return "MultiEnvironment event without channel";
  if (!multi && e.channel) return std::string(to_string(e.kind)) + " event must not carry a channel";
  switch (e.kind) {
    case SensorKind::Contact:
      if (e.value != 0.0 && e.value != 1.0) return "contact value must be 0 or 1";
      break;
    case SensorKind::Motion:
      if (e.value != 1.0) return "motion value must be 1";
      break;
    case SensorKind::SmartPlug:
      if (e.value < 0.0) return "plug power must be non-negative";
      break;
    case SensorKind::MultiEnvironment:
      if (*e.channel == Channel::Humidity && (e.value < 0.0 || e.value > 100.0))
        return "humidity must be within [0,100]";
      if (*e.channel == Channel::Motion && e.value != 0.0 && e.value != 1.0)
        return "motion channel value must be 0 or 1";
      if (*e.channel == Channel::Light && e.value < 0.0) return "light level must be non-negative";
      break;
  }
  return std::nullopt;
}

const std::map<std::string, RoleInfo>& role_registry() {
  static const auto registry = build_registry();
  return registry;
}

const RoleInfo* find_role(std::string_view role) {
  const auto& reg = role_registry();
  auto base = role;
  while (!base.empty() && std::isdigit(static_cast<unsigned char>(base.back()))) base.remove_suffix(1);
  if (base.empty()) return nullptr;
  // Bare digits are only a suffix on top of a real name: "Kettle2" yes, "2" no.
  const auto it = reg.find(std::string(base));
  return it == reg.end() ? nullptr : &it->second;
}

void SensorMap::add(SensorKey key, std::string role) {
  const auto* info = find_role(role);
  auto groups = info ? info->groups : std::set<AdlKind>{};
  add(std::move(key), std::move(role), std::move(groups));
}

void SensorMap::add(SensorKey key, std::string role, std::set<AdlKind> groups) {
  groups_[role] = std::move(groups);
  entries_[std::move(key)] = std::move(role);
}

RoleLookup SensorMap::canonical_role(std::string_view sensor_id, std::optional<Channel> channel) const {
  const auto it = entries_.find(SensorKey{std::string(sensor_id), channel});
  if (it == entries_.end()) return {};
  return {it->second};
}

const std::set<AdlKind>& SensorMap::groups_of(std::string_view role) const {
  const auto it = groups_.find(role);
  return it == groups_.end() ? kNoGroups : it->second;
}

std::set<std::string> SensorMap::roles_for(AdlKind adl) const {
  std::set<std::string> out;
  for (const auto& [role, groups] : groups_)
    if (groups.contains(adl)) out.insert(role);
  return out;
}

void SensorMap::validate() const {
  for (const auto& [key, role] : entries_) {
    const auto* info = find_role(role);
    if (info == nullptr) throw DomainError("role '" + role + "' is not in the canonical registry");
    if (info->channel) {
      if (key.channel != info->channel)
        throw DomainError("role '" + role + "' must be mapped from the " +
                          std::string(to_string(*info->channel)) + " channel");
    } else if (key.channel && !(info->kind == SensorKind::Motion && *key.channel == Channel::Motion)) {
      throw DomainError("role '" + role + "' is a single-channel role but sensor '" + key.sensor_id +
                        "' was mapped with a channel");
    }
  }
  for (const auto& [role, groups] : groups_) {
    const auto* info = find_role(role);
    if (info == nullptr) throw DomainError("role '" + role + "' is not in the canonical registry");
    for (auto g : groups)
      if (!info->groups.contains(g))
        throw DomainError("role '" + role + "' cannot indicate " + std::string(to_string(g)));
  }
}

SensorMap SensorMap::implicit(std::string participant_id, const std::set<SensorKey>& sensors) {
  SensorMap out(std::move(participant_id));
  for (const auto& key : sensors) {
    std::string candidate = key.sensor_id;
    if (key.channel) {
      auto ch = std::string(to_string(*key.channel));
      ch[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(ch[0])));
      candidate += ch;
    }
    const auto* info = find_role(candidate);
    if (info == nullptr) continue;
    if (info->channel != key.channel) continue;
    out.add(key, candidate);
  }
  return out;
}

Minutes MiningParams::window_size(AdlKind adl) const {
  const auto it = window_sizes.find(adl);
  if (it == window_sizes.end()) throw DomainError("no window size for " + std::string(to_string(adl)));
  return it->second;
}

double MiningParams::plug_threshold(std::string_view role) const {
  const auto it = plug_on_watts_by_role.find(std::string(role));
  return it == plug_on_watts_by_role.end() ? plug_on_watts : it->second;
}

void MiningParams::validate() const {
  if (!(min_support > 0.0 && min_support <= 1.0)) throw DomainError("min_support must be in (0,1]");
  if (!(min_confidence > 0.0 && min_confidence <= 1.0)) throw DomainError("min_confidence must be in (0,1]");
  if (stride <= Minutes{0}) throw DomainError("stride must be positive");
  for (auto adl : kAllAdls) {
    const auto size = window_size(adl);
    if (size <= Minutes{0}) throw DomainError("window sizes must be positive");
    if (stride > size) throw DomainError("stride must not exceed any window size");
  }
  if (plug_on_watts < 0.0) throw DomainError("plug_on_watts must be non-negative");
  if (humidity_rise_delta <= 0.0) throw DomainError("humidity_rise_delta must be positive");
  if (leaving_quiet_period < Minutes{0}) throw DomainError("leaving_quiet_period must be non-negative");
}

void Annotation::validate() const {
  if (participant_id.empty()) throw DomainError("annotation without participant_id");
  if (to < from) throw DomainError("annotation interval ends before it starts");
  if (verdict == Verdict::Rejected && (!candidate_id || candidate_id->empty()))
    throw DomainError("Rejected verdict must reference a candidate_id");
}

void AdlEvent::validate() const {
  if (end < start) throw DomainError("ADL event ends before it starts");
  if (contributing_items.empty()) throw DomainError("ADL event without contributing items");
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string rule_id(AdlKind adl, const ItemSet& antecedent) {
  std::string key(to_string(adl));
  key += '|';
  bool first = true;
  for (const auto& item : antecedent) {
    if (!first) key += ',';
    key += item;
    first = false;
  }
  return fnv1a_hex(key);
}

std::string candidate_id(std::string_view participant_id, AdlKind adl, Instant start, Instant end) {
  std::string key(participant_id);
  key += '|';
  key += to_string(adl);
  key += '|';
  key += std::to_string(start.time_since_epoch().count());
  key += '|';
  key += std::to_string(end.time_since_epoch().count());
  return "c" + fnv1a_hex(key);
}

bool has_errors(const std::vector<Diagnostic>& diags) {
  return std::any_of(diags.begin(), diags.end(),
                     [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

// ---------------------------------------------------------------------------
// JSON

void to_json(json& j, const SensorEvent& e) {
  j = json{{"timestamp", format_instant(e.timestamp)},
           {"participant_id", e.participant_id},
           {"sensor_id", e.sensor_id},
           {"kind", to_string(e.kind)},
           {"channel", channel_json(e.channel)},
           {"value", e.value}};
}

void from_json(const json& j, SensorEvent& e) {
  e.timestamp = parse_instant(j.at("timestamp").get<std::string>());
  e.participant_id = j.at("participant_id").get<std::string>();
  e.sensor_id = j.at("sensor_id").get<std::string>();
  e.kind = parse_sensor_kind(j.at("kind").get<std::string>());
  e.channel = read_channel(j);
  e.value = j.at("value").get<double>();
}

void to_json(json& j, const SensorMap& m) {
  json sensors = json::array();
  for (const auto& [key, role] : m.entries())
    sensors.push_back({{"sensor_id", key.sensor_id}, {"channel", channel_json(key.channel)}, {"role", role}});
  json groups = json::object();
  for (const auto& [role, gs] : m.role_groups()) {
    json arr = json::array();
    for (auto g : gs) arr.push_back(to_string(g));
    groups[role] = arr;
  }
  j = json{{"participant_id", m.participant_id()}, {"sensors", sensors}, {"groups", groups}};
}

void from_json(const json& j, SensorMap& m) {
  SensorMap out(j.value("participant_id", std::string{}));
  std::map<std::string, std::set<AdlKind>> explicit_groups;
  if (j.contains("groups")) {
    for (const auto& [role, arr] : j.at("groups").items()) {
      std::set<AdlKind> gs;
      for (const auto& g : arr) gs.insert(parse_adl(g.get<std::string>()));
      explicit_groups[role] = gs;
    }
  }
  for (const auto& s : j.at("sensors")) {
    SensorKey key{s.at("sensor_id").get<std::string>(), read_channel(s)};
    auto role = s.at("role").get<std::string>();
    if (const auto it = explicit_groups.find(role); it != explicit_groups.end())
      out.add(std::move(key), role, it->second);
    else
      out.add(std::move(key), role);
  }
  m = std::move(out);
}

void to_json(json& j, const Window& w) {
  j = json{{"participant_id", w.participant_id}, {"start", format_instant(w.start)},
           {"size_minutes", w.size.count()}};
}

void from_json(const json& j, Window& w) {
  w.participant_id = j.at("participant_id").get<std::string>();
  w.start = parse_instant(j.at("start").get<std::string>());
  w.size = Minutes{j.at("size_minutes").get<long>()};
}

void to_json(json& j, const Transaction& t) {
  j = json{{"window", t.window}, {"items", t.items},
           {"label", t.label ? json(std::string(to_string(*t.label))) : json(nullptr)}};
}

void from_json(const json& j, Transaction& t) {
  t.window = j.at("window").get<Window>();
  t.items = j.at("items").get<ItemSet>();
  const auto& l = j.at("label");
  t.label = l.is_null() ? std::nullopt : std::optional<AdlKind>(parse_adl(l.get<std::string>()));
}

void to_json(json& j, const Rule& r) {
  j = json{{"id", r.id},
           {"adl", to_string(r.adl)},
           {"antecedent", r.antecedent},
           {"support", r.support},
           {"confidence", r.confidence},
           {"window_minutes", r.window_size.count()}};
}

void from_json(const json& j, Rule& r) {
  r.adl = parse_adl(j.at("adl").get<std::string>());
  r.antecedent = j.at("antecedent").get<ItemSet>();
  r.support = j.at("support").get<double>();
  r.confidence = j.at("confidence").get<double>();
  r.window_size = Minutes{j.at("window_minutes").get<long>()};
  r.id = j.value("id", rule_id(r.adl, r.antecedent));
}

void to_json(json& j, const MiningParams& p) {
  json windows = json::object();
  for (const auto& [adl, size] : p.window_sizes) windows[std::string(to_string(adl))] = size.count();
  j = json{{"min_support", p.min_support},
           {"min_confidence", p.min_confidence},
           {"window_minutes", windows},
           {"stride_minutes", p.stride.count()},
           {"plug_on_watts", p.plug_on_watts},
           {"plug_on_watts_by_role", p.plug_on_watts_by_role},
           {"humidity_rise_delta", p.humidity_rise_delta},
           {"minimal_antecedents", p.minimal_antecedents},
           {"leaving_quiet_minutes", p.leaving_quiet_period.count()}};
}

void from_json(const json& j, MiningParams& p) {
  static const std::set<std::string> known{"min_support",        "min_confidence",      "window_minutes",
                                           "stride_minutes",     "plug_on_watts",       "plug_on_watts_by_role",
                                           "humidity_rise_delta", "minimal_antecedents", "leaving_quiet_minutes"};
  if (!j.is_object()) throw DomainError("mining params must be a JSON object");
  for (const auto& [key, value] : j.items())
    if (!known.contains(key)) throw DomainError("unknown mining parameter '" + key + "'");
  if (j.contains("min_support")) p.min_support = j.at("min_support").get<double>();
  if (j.contains("min_confidence")) p.min_confidence = j.at("min_confidence").get<double>();
  if (j.contains("window_minutes"))
    for (const auto& [adl, minutes] : j.at("window_minutes").items())
      p.window_sizes[parse_adl(adl)] = Minutes{minutes.get<long>()};
  if (j.contains("stride_minutes")) p.stride = Minutes{j.at("stride_minutes").get<long>()};
  if (j.contains("plug_on_watts")) p.plug_on_watts = j.at("plug_on_watts").get<double>();
  if (j.contains("plug_on_watts_by_role"))
    p.plug_on_watts_by_role = j.at("plug_on_watts_by_role").get<std::map<std::string, double>>();
  if (j.contains("humidity_rise_delta")) p.humidity_rise_delta = j.at("humidity_rise_delta").get<double>();
  if (j.contains("minimal_antecedents")) p.minimal_antecedents = j.at("minimal_antecedents").get<bool>();
  if (j.contains("leaving_quiet_minutes"))
    p.leaving_quiet_period = Minutes{j.at("leaving_quiet_minutes").get<long>()};
}

void to_json(json& j, const Annotation& a) {
  j = json{{"participant_id", a.participant_id},
           {"adl", to_string(a.adl)},
           {"from", format_instant(a.from)},
           {"to", format_instant(a.to)},
           {"verdict", to_string(a.verdict)},
           {"briefing_id", a.briefing_id},
           {"note", optional_string(a.note)},
           {"candidate_id", optional_string(a.candidate_id)},
           {"revision", a.revision}};
}

void from_json(const json& j, Annotation& a) {
  a.participant_id = j.at("participant_id").get<std::string>();
  a.adl = parse_adl(j.at("adl").get<std::string>());
  if (j.contains("at")) {
    a.from = a.to = parse_instant(j.at("at").get<std::string>());
  } else {
    a.from = parse_instant(j.at("from").get<std::string>());
    a.to = j.contains("to") ? parse_instant(j.at("to").get<std::string>()) : a.from;
  }
  a.verdict = parse_verdict(j.at("verdict").get<std::string>());
  a.briefing_id = j.value("briefing_id", std::string{});
  a.note = read_optional_string(j, "note");
  a.candidate_id = read_optional_string(j, "candidate_id");
  a.revision = j.value("revision", std::uint64_t{0});
}

void to_json(json& j, const AdlEvent& e) {
  j = json{{"candidate_id", e.candidate_id},
           {"participant_id", e.participant_id},
           {"adl", to_string(e.adl)},
           {"start", format_instant(e.start)},
           {"end", format_instant(e.end)},
           {"contributing_items", e.contributing_items},
           {"rule_ids", e.rule_ids}};
}

void from_json(const json& j, AdlEvent& e) {
  e.participant_id = j.at("participant_id").get<std::string>();
  e.adl = parse_adl(j.at("adl").get<std::string>());
  e.start = parse_instant(j.at("start").get<std::string>());
  e.end = parse_instant(j.at("end").get<std::string>());
  e.contributing_items = j.value("contributing_items", ItemSet{});
  e.rule_ids = j.value("rule_ids", std::set<std::string>{});
  e.candidate_id = j.value("candidate_id", candidate_id(e.participant_id, e.adl, e.start, e.end));
}

void to_json(json& j, const Diagnostic& d) {
  j = json{{"severity", d.severity == Severity::Error ? "error" : "warning"}, {"message", d.message}};
  if (d.line != 0) j["line"] = d.line;
}

}  // namespace adlmine
