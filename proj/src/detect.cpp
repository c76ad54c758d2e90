#include "adlmine/detect.hpp"

#include <algorithm>

namespace adlmine {
namespace {

Interval full_range(const EventLog& log) { return {log.first, log.last + Millis{1}}; }

}  // namespace

bool caller_pattern(const EventLog& log, const WindowItems& items, const SensorMap& map,
                    const MiningParams& params) {
  std::optional<Instant> last_door;
  for (const auto& [role, ev] : items.items) {
    if (!map.groups_of(role).contains(AdlKind::LeavingHouse)) continue;
    last_door = last_door ? std::max(*last_door, ev.last) : ev.last;
  }
  if (!last_door) return false;
  const auto after = log.between(*last_door + Millis{1}, *last_door + params.leaving_quiet_period + Millis{1});
  return std::any_of(after.begin(), after.end(), is_motion_activation);
}

std::vector<Transaction> adl_transactions(const EventLog& log, const SensorMap& map, AdlKind adl,
                                          const MiningParams& params, const TimeZone& tz, Instant from,
                                          Instant to) {
  const auto group = map.roles_for(adl);
  std::vector<Transaction> out;
  for (const auto& w : generate_windows(log.participant_id, from, to, params.window_size(adl), params.stride, tz)) {
    auto items = collect_items(log.between(w.start, std::min(w.end(), to)), map, params);
    if (adl == AdlKind::LeavingHouse && caller_pattern(log, items, map, params)) continue;
    Transaction t{w, {}, std::nullopt};
    for (const auto& [role, ev] : items.items)
      if (group.contains(role)) t.items.insert(role);
    if (!t.items.empty()) out.push_back(std::move(t));
  }
  return out;
}

AdlDetection detect_adl(const EventLog& log, const SensorMap& map, const RuleSet& rules, AdlKind adl,
                        const MiningParams& params, const TimeZone& tz, std::optional<Interval> range) {
  AdlDetection out;
  const auto group = rules.groups.find(adl);
  if (group == rules.groups.end()) {
    out.diagnostics.push_back({Severity::Warning, "rule set has no group for " + std::string(to_string(adl))});
    return out;
  }
  if (group->second.empty()) return out;
  const auto span = range.value_or(full_range(log));
  if (span.to <= span.from) return out;

  for (const auto& w : generate_windows(log.participant_id, span.from, span.to, params.window_size(adl),
                                        params.stride, tz)) {
    const auto items = collect_items(log.between(w.start, std::min(w.end(), span.to)), map, params);
    if (items.items.empty()) continue;
    PositiveWindow pw{w, {}, {}};
    for (const auto& rule : group->second) {
      const bool match = std::all_of(rule.antecedent.begin(), rule.antecedent.end(),
                                     [&](const std::string& item) { return items.items.contains(item); });
      if (!match) continue;
      pw.rule_ids.insert(rule.id);
      for (const auto& item : rule.antecedent) pw.evidence[item] = items.items.at(item);
    }
    if (pw.rule_ids.empty()) continue;
    if (adl == AdlKind::LeavingHouse && caller_pattern(log, items, map, params)) continue;
    out.positives.push_back(std::move(pw));
  }
  return out;
}

std::vector<AdlEvent> merge_candidates(std::span<const PositiveWindow> windows, AdlKind adl,
                                       const std::string& participant_id) {
  std::vector<const PositiveWindow*> order;
  for (const auto& w : windows)
    if (!w.evidence.empty()) order.push_back(&w);
  std::stable_sort(order.begin(), order.end(),
                   [](const PositiveWindow* a, const PositiveWindow* b) { return a->window.start < b->window.start; });

  std::vector<AdlEvent> out;
  std::optional<Instant> group_end;
  for (const auto* w : order) {
    const bool chain = group_end && w->window.start <= *group_end;
    if (!chain) {
      AdlEvent e;
      e.participant_id = participant_id;
      e.adl = adl;
      e.start = Instant::max();
      e.end = Instant::min();
      out.push_back(std::move(e));
      group_end = w->window.end();
    } else {
      group_end = std::max(*group_end, w->window.end());
    }
    auto& e = out.back();
    for (const auto& [item, ev] : w->evidence) {
      e.start = std::min(e.start, ev.first);
      e.end = std::max(e.end, ev.last);
      e.contributing_items.insert(item);
    }
    e.rule_ids.insert(w->rule_ids.begin(), w->rule_ids.end());
  }
  for (auto& e : out) e.candidate_id = candidate_id(e.participant_id, e.adl, e.start, e.end);
  return out;
}

std::vector<AdlEvent> Timelines::all() const {
  std::vector<AdlEvent> out;
  for (const auto& [adl, evs] : events) out.insert(out.end(), evs.begin(), evs.end());
  return out;
}

Timelines detect_all(const EventLog& log, const SensorMap& map, const RuleSet& rules, const MiningParams& params,
                     const TimeZone& tz, std::optional<Interval> range) {
  Timelines out;
  for (auto adl : kAllAdls) {
    auto det = detect_adl(log, map, rules, adl, params, tz, range);
    out.diagnostics.insert(out.diagnostics.end(), det.diagnostics.begin(), det.diagnostics.end());
    out.events[adl] = merge_candidates(det.positives, adl, log.participant_id);
  }
  return out;
}

}  // namespace adlmine
