#include "adlmine/pipeline.hpp"

namespace adlmine {

TrainingBuild build_training(const EventLog& log, const SensorMap& map, std::span<const Annotation> annotations,
                             const MiningParams& params, const TimeZone& tz, std::optional<Interval> range) {
  params.validate();
  const Interval span = range.value_or(Interval{log.first, log.last + Millis{1}});
  TrainingBuild out;
  for (auto adl : kAllAdls) {
    const auto txs = adl_transactions(log, map, adl, params, tz, span.from, span.to);
    // Interval::to is inclusive; the span is half-open.
    auto labelled = label_windows(txs, annotations, adl, Interval{span.from, span.to - Millis{1}});
    out.diagnostics.insert(out.diagnostics.end(), labelled.diagnostics.begin(), labelled.diagnostics.end());
    out.positives[adl] = labelled.positives;
    out.labeled[adl] = std::move(labelled.transactions);
  }
  return out;
}

MiningResult mine_participant(const EventLog& log, const SensorMap& map, std::span<const Annotation> annotations,
                              const MiningParams& params, const TimeZone& tz, std::optional<Interval> range,
                              const AprioriOptions& options) {
  auto training = build_training(log, map, annotations, params, tz, range);
  auto result = mine_adl_rules(log.participant_id, training.labeled, params, options);
  training.diagnostics.insert(training.diagnostics.end(), result.diagnostics.begin(), result.diagnostics.end());
  result.diagnostics = std::move(training.diagnostics);
  return result;
}

}  // namespace adlmine
