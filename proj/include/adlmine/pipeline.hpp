#pragma once

#include <optional>
#include <span>
#include <vector>

#include "adlmine/detect.hpp"
#include "adlmine/ruleset.hpp"

namespace adlmine {

struct TrainingBuild {
  LabeledTransactions labeled;
  std::vector<Diagnostic> diagnostics;
  std::map<AdlKind, std::size_t> positives;
};

// Window transactions for every ADL over `range` as [from, to) (default: the whole log),
// labelled from the participant's annotations.
TrainingBuild build_training(const EventLog& log, const SensorMap& map, std::span<const Annotation> annotations,
                             const MiningParams& params, const TimeZone& tz,
                             std::optional<Interval> range = std::nullopt);

// build_training followed by mine_adl_rules.
MiningResult mine_participant(const EventLog& log, const SensorMap& map, std::span<const Annotation> annotations,
                              const MiningParams& params, const TimeZone& tz,
                              std::optional<Interval> range = std::nullopt, const AprioriOptions& options = {});

}  // namespace adlmine
