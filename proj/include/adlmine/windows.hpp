#pragma once

#include <optional>
#include <span>
#include <vector>

#include "adlmine/domain.hpp"

namespace adlmine {

// Window starts on a stride grid re-anchored at every local midnight. The first
// start is the grid tick at or before span_start; every later tick before
// span_end follows. Throws DomainError unless size >= stride > 0 and the span is
// non-empty.
std::vector<Window> generate_windows(const std::string& participant_id, Instant span_start, Instant span_end,
                                     Minutes size, Minutes stride, const TimeZone& tz);

struct LabelResult {
  std::vector<Transaction> transactions;
  std::vector<Diagnostic> diagnostics;
  std::size_t positives = 0;
};

struct Interval {
  Instant from{};
  Instant to{};  // inclusive
};

// Labels transactions for one ADL from briefing annotations.
//
// A transaction is positive iff its window [start, end) intersects an effective
// Confirmed/Added annotation of the ADL and no effective Rejected one. Verdicts
// sharing a candidate_id collapse to the one with the highest revision (a
// Rejected verdict wins a tie). Annotations of other participants, or outside
// `span` when given, produce a diagnostic and are ignored. Transactions keep
// their input order; the result does not depend on annotation order.
LabelResult label_windows(std::span<const Transaction> transactions, std::span<const Annotation> annotations,
                          AdlKind adl, std::optional<Interval> span = std::nullopt);

bool intersects(const Window& w, const Interval& iv);

}  // namespace adlmine
