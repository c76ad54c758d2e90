#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "adlmine/time.hpp"

namespace adlmine {

using json = nlohmann::json;

/// Raised when a domain value violates one of its invariants.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SensorKind { Contact, Motion, SmartPlug, MultiEnvironment };
enum class Channel { Humidity, Temperature, Light, Motion };
enum class AdlKind { EatingDrinking, Dressing, Bathing, LeavingHouse };
enum class Verdict { Confirmed, Rejected, Added };

inline constexpr std::array<AdlKind, 4> kAllAdls{AdlKind::EatingDrinking, AdlKind::Dressing,
                                                 AdlKind::Bathing, AdlKind::LeavingHouse};

std::string_view to_string(SensorKind k);
std::string_view to_string(Channel c);
std::string_view to_string(AdlKind a);
std::string_view to_string(Verdict v);

SensorKind parse_sensor_kind(std::string_view s);
Channel parse_channel(std::string_view s);
AdlKind parse_adl(std::string_view s);
Verdict parse_verdict(std::string_view s);

// Label item injected into mining transactions for an ADL, e.g. "ADL:Bathing".
std::string label_item(AdlKind a);

using ItemSet = std::set<std::string>;

struct SensorEvent {
  std::string participant_id;
  std::string sensor_id;
  Instant timestamp{};
  SensorKind kind = SensorKind::Contact;
  std::optional<Channel> channel;
  double value = 0.0;

  friend auto operator<=>(const SensorEvent&, const SensorEvent&) = default;
};

// Empty when the event satisfies the per-kind value domain and channel rules.
std::optional<std::string> check_event(const SensorEvent& e);

// ---------------------------------------------------------------------------
// Canonical role vocabulary

struct RoleInfo {
  std::string name;
  SensorKind kind;
  std::optional<Channel> channel;  // for roles hosted on a multi-environment sensor
  std::set<AdlKind> groups;
};

// Fixed registry of canonical role names. Participant-specific duplicates use an
// integer suffix ("StaplesPress2") and inherit the base role's entry.
const std::map<std::string, RoleInfo>& role_registry();
// Registry entry for a role name, resolving numeric suffixes. nullptr if unknown.
const RoleInfo* find_role(std::string_view role);

struct SensorKey {
  std::string sensor_id;
  std::optional<Channel> channel;
  friend auto operator<=>(const SensorKey&, const SensorKey&) = default;
};

struct RoleLookup {
  std::optional<std::string> role;
  bool mapped() const { return role.has_value(); }
};

class SensorMap {
 public:
  SensorMap() = default;
  explicit SensorMap(std::string participant_id) : participant_id_(std::move(participant_id)) {}

  // Groups default to the registry's grouping for the role.
  void add(SensorKey key, std::string role);
  void add(SensorKey key, std::string role, std::set<AdlKind> groups);

  RoleLookup canonical_role(std::string_view sensor_id, std::optional<Channel> channel) const;
  const std::set<AdlKind>& groups_of(std::string_view role) const;
  // Roles that may indicate the ADL.
  std::set<std::string> roles_for(AdlKind adl) const;

  const std::string& participant_id() const { return participant_id_; }
  const std::map<SensorKey, std::string>& entries() const { return entries_; }
  const std::map<std::string, std::set<AdlKind>, std::less<>>& role_groups() const { return groups_; }

  // Throws DomainError when a role is not in the registry or claims a group the
  // registry does not allow for it.
  void validate() const;

  // Map built from sensor names alone: a sensor whose id is a canonical role maps
  // to itself; a multi-environment channel maps to id + channel ("Bathroom" +
  // humidity -> "BathroomHumidity") when that is a canonical role.
  static SensorMap implicit(std::string participant_id, const std::set<SensorKey>& sensors);

  friend bool operator==(const SensorMap&, const SensorMap&) = default;

 private:
  std::string participant_id_;
  std::map<SensorKey, std::string> entries_;
  std::map<std::string, std::set<AdlKind>, std::less<>> groups_;
};

// ---------------------------------------------------------------------------

struct Window {
  std::string participant_id;
  Instant start{};
  Minutes size{0};

  Instant end() const { return start + size; }
  friend auto operator<=>(const Window&, const Window&) = default;
};

struct Transaction {
  Window window;
  ItemSet items;
  std::optional<AdlKind> label;

  friend bool operator==(const Transaction&, const Transaction&) = default;
};

struct Rule {
  AdlKind adl = AdlKind::EatingDrinking;
  ItemSet antecedent;
  double support = 0.0;
  double confidence = 0.0;
  Minutes window_size{0};
  std::string id;

  friend bool operator==(const Rule&, const Rule&) = default;
};

// Stable 16-hex-digit id derived from (adl, antecedent).
std::string rule_id(AdlKind adl, const ItemSet& antecedent);

struct MiningParams {
  double min_support = 0.15;
  double min_confidence = 0.5;
  std::map<AdlKind, Minutes> window_sizes{{AdlKind::EatingDrinking, Minutes{60}},
                                          {AdlKind::Dressing, Minutes{30}},
                                          {AdlKind::Bathing, Minutes{60}},
                                          {AdlKind::LeavingHouse, Minutes{30}}};
  Minutes stride{5};
  double plug_on_watts = 5.0;
  // Per-role overrides of plug_on_watts.
  std::map<std::string, double> plug_on_watts_by_role;
  double humidity_rise_delta = 5.0;
  // Drop rules whose antecedent has a strict subset with at least the same confidence.
  bool minimal_antecedents = true;
  // Interior motion within this period after the last door opening marks a caller.
  Minutes leaving_quiet_period{15};

  Minutes window_size(AdlKind adl) const;
  double plug_threshold(std::string_view role) const;
  void validate() const;

  friend bool operator==(const MiningParams&, const MiningParams&) = default;
};

struct Annotation {
  std::string participant_id;
  AdlKind adl = AdlKind::EatingDrinking;
  Instant from{};
  Instant to{};  // equal to `from` for an instant
  Verdict verdict = Verdict::Confirmed;
  std::string briefing_id;
  std::optional<std::string> note;
  std::optional<std::string> candidate_id;
  // Store revision at which the verdict was recorded; later revisions win.
  std::uint64_t revision = 0;

  void validate() const;
  friend bool operator==(const Annotation&, const Annotation&) = default;
};

struct AdlEvent {
  std::string participant_id;
  AdlKind adl = AdlKind::EatingDrinking;
  Instant start{};
  Instant end{};
  ItemSet contributing_items;
  std::set<std::string> rule_ids;
  std::string candidate_id;

  void validate() const;
  friend bool operator==(const AdlEvent&, const AdlEvent&) = default;
};

// Stable identifier of a detected occurrence.
std::string candidate_id(std::string_view participant_id, AdlKind adl, Instant start, Instant end);

enum class Severity { Warning, Error };

struct Diagnostic {
  Severity severity = Severity::Warning;
  std::string message;
  std::size_t line = 0;  // 1-based; 0 when not tied to an input line

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

bool has_errors(const std::vector<Diagnostic>& diags);

// 64-bit FNV-1a, rendered as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view bytes);

// ---------------------------------------------------------------------------
// JSON

void to_json(json& j, const SensorEvent& e);
void from_json(const json& j, SensorEvent& e);
void to_json(json& j, const SensorMap& m);
void from_json(const json& j, SensorMap& m);
void to_json(json& j, const Window& w);
void from_json(const json& j, Window& w);
void to_json(json& j, const Transaction& t);
void from_json(const json& j, Transaction& t);
void to_json(json& j, const Rule& r);
void from_json(const json& j, Rule& r);
void to_json(json& j, const MiningParams& p);
// Missing keys keep their defaults, so partial override documents are accepted.
void from_json(const json& j, MiningParams& p);
void to_json(json& j, const Annotation& a);
void from_json(const json& j, Annotation& a);
void to_json(json& j, const AdlEvent& e);
void from_json(const json& j, AdlEvent& e);
void to_json(json& j, const Diagnostic& d);

}  // namespace adlmine
