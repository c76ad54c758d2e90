#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "adlmine/apriori.hpp"
#include "adlmine/domain.hpp"

namespace adlmine {

inline constexpr std::string_view kRuleSetSchema = "adlmine.ruleset/1";

/// Rules grouped by ADL, together with the parameters that produced them.
/// This is the unit of deployment to new participants.
struct RuleSet {
  std::optional<std::string> participant;  // empty for a pooled rule set
  std::map<AdlKind, std::vector<Rule>> groups;
  MiningParams params;
  std::vector<std::string> provenance;

  bool pooled() const { return !participant.has_value(); }
  bool has_group(AdlKind adl) const { return groups.contains(adl); }
  const Rule* find_rule(std::string_view rule_id) const;
  std::size_t rule_count() const;

  // Hash of the rules and parameter snapshot only. Two rule sets that would
  // detect identically share it regardless of scope or provenance.
  std::string content_hash() const;
  // Hash over content, scope and provenance.
  std::string id() const;

  friend bool operator==(const RuleSet&, const RuleSet&) = default;
};

json ruleset_to_json(const RuleSet& rs);
// Throws MiningError on schema-version mismatch or a stale content hash.
RuleSet ruleset_from_json(const json& j);
void write_ruleset(const std::filesystem::path& path, const RuleSet& rs);
RuleSet read_ruleset(const std::filesystem::path& path);
std::string ruleset_text(const RuleSet& rs);

struct MiningResult {
  RuleSet rules;
  std::vector<Diagnostic> diagnostics;
};

using LabeledTransactions = std::map<AdlKind, std::vector<Transaction>>;

// One Apriori run per ADL over that ADL's labelled transactions, with the label
// injected as an item. ADLs without a positive are skipped with a warning; if no
// ADL has one, the result is empty and carries an error diagnostic.
MiningResult mine_adl_rules(const std::string& participant_id, const LabeledTransactions& labeled,
                            const MiningParams& params, const AprioriOptions& options = {});

struct ParticipantTraining {
  std::string participant_id;
  LabeledTransactions labeled;
  SensorMap map;
};

// Concatenates every participant's transactions per ADL and mines once.
// Inconsistent role groupings across sensor maps are reported as errors and
// yield an empty rule set.
MiningResult pool_and_mine(std::span<const ParticipantTraining> participants, const MiningParams& params,
                           const AprioriOptions& options = {});

}  // namespace adlmine
