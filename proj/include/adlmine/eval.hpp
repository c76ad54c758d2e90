#pragma once

#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "adlmine/domain.hpp"
#include "adlmine/ruleset.hpp"

namespace adlmine {

class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MatchCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  MatchCounts& operator+=(const MatchCounts& o) {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    return *this;
  }
  friend bool operator==(const MatchCounts&, const MatchCounts&) = default;
};

struct Match {
  std::size_t detected;  // indices into the caller's lists
  std::size_t truth;
};

struct MatchResult {
  MatchCounts counts;
  std::vector<Match> pairs;
};

// Two events match when their closed extents overlap or their midpoints are at
// most `tolerance` apart.
bool events_match(const AdlEvent& a, const AdlEvent& b, Minutes tolerance);

// Greedy: detected events by earliest start, each taking the earliest-starting
// unmatched truth event it matches. Maximum: a largest possible one-to-one
// pairing (augmenting paths), so tp can only go up.
enum class MatchStrategy { Greedy, Maximum };
std::string_view to_string(MatchStrategy s);
MatchStrategy parse_match_strategy(std::string_view s);

// One-to-one matching of the `adl` events of both lists. Throws EvalError if
// either list has overlapping events of that ADL.
MatchResult match_events(std::span<const AdlEvent> detected, std::span<const AdlEvent> truth, AdlKind adl,
                         Minutes tolerance, MatchStrategy strategy = MatchStrategy::Greedy);
// Tolerance = the ADL's window size.
MatchResult match_events(std::span<const AdlEvent> detected, std::span<const AdlEvent> truth, AdlKind adl,
                         const MiningParams& params, MatchStrategy strategy = MatchStrategy::Greedy);

struct Prf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// With no detections precision is 1; with no truth recall is 1.
Prf prf(const MatchCounts& c);

using AdlCounts = std::map<AdlKind, std::size_t>;
using AdlRates = std::map<AdlKind, double>;

// Events per ADL; every ADL present, zero when absent.
AdlCounts count_events(std::span<const AdlEvent> events);

// count / days. Throws EvalError unless days >= 1.
AdlRates counts_per_day(const AdlCounts& counts, double days);
// Shares of the total. Throws EvalError when every count is zero.
AdlRates proportions(const AdlCounts& counts);

struct SensorRank {
  std::string role;
  std::size_t rule_appearances = 0;  // rules whose antecedent names the role
  std::size_t triggers = 0;          // detections the role contributed to

  friend bool operator==(const SensorRank&, const SensorRank&) = default;
};

// Roles named by some rule or detection, by triggers, then rule appearances
// (both descending), then name.
std::vector<SensorRank> sensor_importance(const RuleSet& rules, std::span<const AdlEvent> detections);

// Per-participant evaluation bundle behind the metrics report and CSV tables.
struct ParticipantReport {
  std::string participant_id;
  double days = 1.0;  // denominator used for the per-day rates
  AdlCounts counts;
  AdlRates per_day;
  std::optional<AdlRates> shares;                     // absent when nothing was detected
  std::optional<std::map<AdlKind, MatchCounts>> matches;  // absent without truth
};

// Matching only runs when truth is given.
ParticipantReport evaluate_participant(const std::string& participant_id, std::span<const AdlEvent> detected,
                                       std::optional<std::span<const AdlEvent>> truth, double days,
                                       const MiningParams& params, MatchStrategy strategy = MatchStrategy::Greedy);

json metrics_json(std::span<const ParticipantReport> reports, std::span<const SensorRank> importance);
// participant_id,EatingDrinking,Dressing,Bathing,LeavingHouse
std::string per_day_csv(std::span<const ParticipantReport> reports);
std::string proportions_csv(std::span<const ParticipantReport> reports);

}  // namespace adlmine
