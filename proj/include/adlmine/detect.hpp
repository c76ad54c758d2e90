#pragma once

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "adlmine/binarize.hpp"
#include "adlmine/ingest.hpp"
#include "adlmine/ruleset.hpp"
#include "adlmine/windows.hpp"

namespace adlmine {

struct PositiveWindow {
  Window window;
  std::set<std::string> rule_ids;
  // Activation times of the items named by the matched rules' antecedents.
  std::map<std::string, ItemEvidence> evidence;
};

struct AdlDetection {
  std::vector<PositiveWindow> positives;
  std::vector<Diagnostic> diagnostics;
};

// A LeavingHouse window whose last door opening is followed by interior motion
// within params.leaving_quiet_period: somebody is still at home (a caller or a
// delivery), so nobody left.
bool caller_pattern(const EventLog& log, const WindowItems& items, const SensorMap& map,
                    const MiningParams& params);

// Window transactions of one ADL over [from, to): the ADL's own window grid,
// items restricted to the roles grouped with that ADL, empty transactions
// dropped, and caller-pattern windows dropped for LeavingHouse.
std::vector<Transaction> adl_transactions(const EventLog& log, const SensorMap& map, AdlKind adl,
                                          const MiningParams& params, const TimeZone& tz, Instant from, Instant to);

// Tests every window of the ADL's grid against the rule group. A window is
// positive iff some antecedent is a subset of its items. `range` is read as
// [from, to) here, unlike annotation intervals.
AdlDetection detect_adl(const EventLog& log, const SensorMap& map, const RuleSet& rules, AdlKind adl,
                        const MiningParams& params, const TimeZone& tz, std::optional<Interval> range = std::nullopt);

// Chains positive windows that overlap or touch into events spanning the first
// to the last contributing activation. Same-ADL output events are disjoint and
// sorted by start.
std::vector<AdlEvent> merge_candidates(std::span<const PositiveWindow> windows, AdlKind adl,
                                       const std::string& participant_id);

struct Timelines {
  std::map<AdlKind, std::vector<AdlEvent>> events;
  std::vector<Diagnostic> diagnostics;

  // Every event, ordered by ADL then start.
  std::vector<AdlEvent> all() const;
};

// Each ADL is detected independently, on its own window size. `range` is [from, to).
Timelines detect_all(const EventLog& log, const SensorMap& map, const RuleSet& rules, const MiningParams& params,
                     const TimeZone& tz, std::optional<Interval> range = std::nullopt);

}  // namespace adlmine
