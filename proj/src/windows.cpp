#include "adlmine/windows.hpp"

#include <algorithm>
#include <map>
#include <tuple>

namespace adlmine {

std::vector<Window> generate_windows(const std::string& participant_id, Instant span_start, Instant span_end,
                                     Minutes size, Minutes stride, const TimeZone& tz) {
  if (stride <= Minutes{0}) throw DomainError("stride must be positive");
  if (size < stride) throw DomainError("window size must be at least the stride");
  if (span_end <= span_start) throw DomainError("window span is empty");

  std::vector<Window> out;
  for (auto day = tz.local_date(span_start); tz.midnight(day) < span_end; day = next_day(day)) {
    const auto midnight = tz.midnight(day);
    const auto next_midnight = tz.midnight(next_day(day));
    for (auto tick = midnight; tick < next_midnight && tick < span_end; tick += stride) {
      if (tick + stride <= span_start) continue;
      out.push_back(Window{participant_id, tick, size});
    }
  }
  return out;
}

bool intersects(const Window& w, const Interval& iv) { return w.start <= iv.to && iv.from < w.end(); }

LabelResult label_windows(std::span<const Transaction> transactions, std::span<const Annotation> annotations,
                          AdlKind adl, std::optional<Interval> span) {
  LabelResult out;
  std::vector<const Annotation*> relevant;
  for (const auto& a : annotations) {
    if (a.adl != adl) continue;
    if (!transactions.empty() && a.participant_id != transactions.front().window.participant_id) {
      out.diagnostics.push_back({Severity::Warning, "annotation for participant '" + a.participant_id +
                                                        "' ignored while labelling '" +
                                                        transactions.front().window.participant_id + "'"});
      continue;
    }
    if (span && (a.to < span->from || a.from > span->to)) {
      out.diagnostics.push_back({Severity::Warning, std::string(to_string(a.verdict)) + " " +
                                                        std::string(to_string(a.adl)) + " annotation at " +
                                                        format_instant(a.from) + " lies outside the log span"});
      continue;
    }
    relevant.push_back(&a);
  }

  // Last writer wins per candidate.
  std::map<std::string, const Annotation*> by_candidate;
  std::vector<const Annotation*> effective;
  for (const auto* a : relevant) {
    if (!a->candidate_id) {
      effective.push_back(a);
      continue;
    }
    auto [it, inserted] = by_candidate.try_emplace(*a->candidate_id, a);
    if (inserted) continue;
    const auto* cur = it->second;
    const auto key = [](const Annotation* x) {
      return std::make_tuple(x->revision, x->verdict == Verdict::Rejected, x->from, x->to,
                             static_cast<int>(x->verdict));
    };
    if (key(a) > key(cur)) it->second = a;
  }
  for (const auto& [id, a] : by_candidate) effective.push_back(a);

  std::vector<Interval> positive;
  std::vector<Interval> rejected;
  for (const auto* a : effective) {
    (a->verdict == Verdict::Rejected ? rejected : positive).push_back({a->from, a->to});
  }

  out.transactions.reserve(transactions.size());
  for (const auto& t : transactions) {
    auto labelled = t;
    labelled.label.reset();
    const auto hit = [&](const Interval& iv) { return intersects(t.window, iv); };
    if (std::any_of(positive.begin(), positive.end(), hit) &&
        std::none_of(rejected.begin(), rejected.end(), hit)) {
      labelled.label = adl;
      ++out.positives;
    }
    out.transactions.push_back(std::move(labelled));
  }
  return out;
}

}  // namespace adlmine
