#include "adlmine/eval.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

namespace adlmine {
namespace {

std::vector<std::size_t> of_adl(std::span<const AdlEvent> events, AdlKind adl, const char* what) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < events.size(); ++i)
    if (events[i].adl == adl) idx.push_back(i);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return std::tie(events[a].start, events[a].end) < std::tie(events[b].start, events[b].end);
  });
  for (std::size_t k = 1; k < idx.size(); ++k) {
    if (events[idx[k]].start <= events[idx[k - 1]].end)
      throw EvalError(std::string(what) + " " + std::string(to_string(adl)) + " events overlap at " +
                      format_instant(events[idx[k]].start));
  }
  return idx;
}

std::string number(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

std::string rates_csv(std::span<const ParticipantReport> reports, bool shares) {
  std::ostringstream out;
  out << "participant_id";
  for (auto adl : kAllAdls) out << ',' << to_string(adl);
  out << '\n';
  for (const auto& r : reports) {
    out << r.participant_id;
    const AdlRates* rates = shares ? (r.shares ? &*r.shares : nullptr) : &r.per_day;
    for (auto adl : kAllAdls) {
      out << ',';
      if (rates) out << number(rates->at(adl));
    }
    out << '\n';
  }
  return out.str();
}

json rates_json(const AdlRates& r) {
  json j = json::object();
  for (const auto& [adl, v] : r) j[std::string(to_string(adl))] = v;
  return j;
}

}  // namespace

bool events_match(const AdlEvent& a, const AdlEvent& b, Minutes tolerance) {
  if (a.start <= b.end && b.start <= a.end) return true;
  // Twice the midpoint, to stay in integer milliseconds.
  const auto ma = a.start.time_since_epoch() + a.end.time_since_epoch();
  const auto mb = b.start.time_since_epoch() + b.end.time_since_epoch();
  const auto gap = ma > mb ? ma - mb : mb - ma;
  return gap <= 2 * Millis{tolerance};
}

std::string_view to_string(MatchStrategy s) { return s == MatchStrategy::Greedy ? "greedy" : "maximum"; }

MatchStrategy parse_match_strategy(std::string_view s) {
  if (s == "greedy") return MatchStrategy::Greedy;
  if (s == "maximum") return MatchStrategy::Maximum;
  throw EvalError("unknown matching strategy '" + std::string(s) + "'");
}

namespace {

// Kuhn's algorithm; edges tried in truth start order so the result is stable.
bool augment(std::size_t d, const std::vector<std::vector<std::size_t>>& adj, std::vector<std::optional<std::size_t>>& owner,
             std::vector<bool>& seen) {
  for (auto k : adj[d]) {
    if (seen[k]) continue;
    seen[k] = true;
    if (!owner[k] || augment(*owner[k], adj, owner, seen)) {
      owner[k] = d;
      return true;
    }
  }
  return false;
}

}  // namespace

MatchResult match_events(std::span<const AdlEvent> detected, std::span<const AdlEvent> truth, AdlKind adl,
                         Minutes tolerance, MatchStrategy strategy) {
  const auto det = of_adl(detected, adl, "detected");
  const auto tru = of_adl(truth, adl, "truth");
  MatchResult out;
  if (strategy == MatchStrategy::Greedy) {
    std::vector<bool> used(tru.size(), false);
    for (auto d : det) {
      for (std::size_t k = 0; k < tru.size(); ++k) {
        if (used[k] || !events_match(detected[d], truth[tru[k]], tolerance)) continue;
        used[k] = true;
        out.pairs.push_back({d, tru[k]});
        break;
      }
    }
  } else {
    std::vector<std::vector<std::size_t>> adj(det.size());
    for (std::size_t i = 0; i < det.size(); ++i)
      for (std::size_t k = 0; k < tru.size(); ++k)
        if (events_match(detected[det[i]], truth[tru[k]], tolerance)) adj[i].push_back(k);
    std::vector<std::optional<std::size_t>> owner(tru.size());
    for (std::size_t i = 0; i < det.size(); ++i) {
      std::vector<bool> seen(tru.size(), false);
      augment(i, adj, owner, seen);
    }
    std::vector<std::optional<std::size_t>> partner(det.size());
    for (std::size_t k = 0; k < tru.size(); ++k)
      if (owner[k]) partner[*owner[k]] = k;
    for (std::size_t i = 0; i < det.size(); ++i)
      if (partner[i]) out.pairs.push_back({det[i], tru[*partner[i]]});
  }
  out.counts.tp = out.pairs.size();
  out.counts.fp = det.size() - out.counts.tp;
  out.counts.fn = tru.size() - out.counts.tp;
  return out;
}

MatchResult match_events(std::span<const AdlEvent> detected, std::span<const AdlEvent> truth, AdlKind adl,
                         const MiningParams& params, MatchStrategy strategy) {
  return match_events(detected, truth, adl, params.window_size(adl), strategy);
}

Prf prf(const MatchCounts& c) {
  Prf r;
  r.precision = (c.tp + c.fp == 0) ? 1.0 : static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
  r.recall = (c.tp + c.fn == 0) ? 1.0 : static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
  r.f1 = (r.precision + r.recall == 0.0) ? 0.0 : 2.0 * r.precision * r.recall / (r.precision + r.recall);
  return r;
}

AdlCounts count_events(std::span<const AdlEvent> events) {
  AdlCounts c;
  for (auto adl : kAllAdls) c[adl] = 0;
  for (const auto& e : events) ++c[e.adl];
  return c;
}

AdlRates counts_per_day(const AdlCounts& counts, double days) {
  if (!(days >= 1.0)) throw EvalError("need at least one day of logging to normalise counts");
  AdlRates out;
  for (auto adl : kAllAdls) {
    const auto it = counts.find(adl);
    out[adl] = (it == counts.end() ? 0.0 : static_cast<double>(it->second)) / days;
  }
  return out;
}

AdlRates proportions(const AdlCounts& counts) {
  std::size_t total = 0;
  for (const auto& [adl, n] : counts) total += n;
  if (total == 0) throw EvalError("proportions undefined: no events");
  AdlRates out;
  for (auto adl : kAllAdls) {
    const auto it = counts.find(adl);
    out[adl] = (it == counts.end() ? 0.0 : static_cast<double>(it->second)) / static_cast<double>(total);
  }
  return out;
}

std::vector<SensorRank> sensor_importance(const RuleSet& rules, std::span<const AdlEvent> detections) {
  std::map<std::string, SensorRank> by_role;
  auto entry = [&](const std::string& role) -> SensorRank& {
    auto& r = by_role[role];
    r.role = role;
    return r;
  };
  for (const auto& [adl, group] : rules.groups)
    for (const auto& rule : group)
      for (const auto& item : rule.antecedent) ++entry(item).rule_appearances;
  for (const auto& e : detections)
    for (const auto& item : e.contributing_items) ++entry(item).triggers;

  std::vector<SensorRank> out;
  for (auto& [role, r] : by_role) out.push_back(std::move(r));
  std::sort(out.begin(), out.end(), [](const SensorRank& a, const SensorRank& b) {
    if (a.triggers != b.triggers) return a.triggers > b.triggers;
    if (a.rule_appearances != b.rule_appearances) return a.rule_appearances > b.rule_appearances;
    return a.role < b.role;
  });
  return out;
}

ParticipantReport evaluate_participant(const std::string& participant_id, std::span<const AdlEvent> detected,
                                       std::optional<std::span<const AdlEvent>> truth, double days,
                                       const MiningParams& params, MatchStrategy strategy) {
  ParticipantReport r;
  r.participant_id = participant_id;
  r.days = days;
  r.counts = count_events(detected);
  r.per_day = counts_per_day(r.counts, days);
  try {
    r.shares = proportions(r.counts);
  } catch (const EvalError&) {
    r.shares.reset();
  }
  if (truth) {
    r.matches.emplace();
    for (auto adl : kAllAdls) (*r.matches)[adl] = match_events(detected, *truth, adl, params, strategy).counts;
  }
  return r;
}

json metrics_json(std::span<const ParticipantReport> reports, std::span<const SensorRank> importance) {
  json parts = json::array();
  std::map<AdlKind, MatchCounts> overall;
  bool any_truth = false;
  for (const auto& r : reports) {
    json p{{"participant_id", r.participant_id}, {"days", r.days}};
    json counts = json::object();
    for (const auto& [adl, n] : r.counts) counts[std::string(to_string(adl))] = n;
    p["counts"] = counts;
    p["per_day"] = rates_json(r.per_day);
    p["proportions"] = r.shares ? rates_json(*r.shares) : json(nullptr);
    if (r.matches) {
      any_truth = true;
      json m = json::object();
      for (const auto& [adl, c] : *r.matches) {
        const auto s = prf(c);
        m[std::string(to_string(adl))] = {{"tp", c.tp}, {"fp", c.fp}, {"fn", c.fn},
                                          {"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}};
        overall[adl] += c;
      }
      p["matching"] = m;
    }
    parts.push_back(std::move(p));
  }
  json out{{"schema", "adlmine.metrics/1"}, {"participants", parts}};
  if (any_truth) {
    json m = json::object();
    for (const auto& [adl, c] : overall) {
      const auto s = prf(c);
      m[std::string(to_string(adl))] = {{"tp", c.tp}, {"fp", c.fp}, {"fn", c.fn},
                                        {"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}};
    }
    out["overall"] = m;
  }
  json ranks = json::array();
  for (const auto& r : importance)
    ranks.push_back({{"role", r.role}, {"rule_appearances", r.rule_appearances}, {"triggers", r.triggers}});
  out["sensor_importance"] = ranks;
  return out;
}

std::string per_day_csv(std::span<const ParticipantReport> reports) { return rates_csv(reports, false); }
std::string proportions_csv(std::span<const ParticipantReport> reports) { return rates_csv(reports, true); }

}  // namespace adlmine
