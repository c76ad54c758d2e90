#include "adlmine/ruleset.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "adlmine/ingest.hpp"

namespace adlmine {
namespace {

json content_json(const RuleSet& rs) {
  json groups = json::object();
  for (const auto& [adl, rules] : rs.groups) groups[std::string(to_string(adl))] = rules;
  return json{{"rules", groups}, {"params", rs.params}};
}

struct GroupOutcome {
  std::vector<Rule> rules;
  bool had_positives = false;
};

GroupOutcome mine_group(const std::vector<Transaction>& transactions, AdlKind adl, const MiningParams& params,
                        const AprioriOptions& options) {
  const auto label = label_item(adl);
  std::vector<ItemSet> input;
  input.reserve(transactions.size());
  bool positives = false;
  for (const auto& t : transactions) {
    if (t.items.empty()) continue;
    auto items = t.items;
    items.erase(label);
    if (t.label == adl) {
      items.insert(label);
      positives = true;
    }
    input.push_back(std::move(items));
  }
  if (!positives) return {};
  const auto frequent = frequent_itemsets(input, params.min_support, options);
  return {generate_rules(frequent, adl, params.min_confidence, params.minimal_antecedents,
                         params.window_size(adl)),
          true};
}

MiningResult mine(std::optional<std::string> participant, std::vector<std::string> provenance,
                  const LabeledTransactions& labeled, const MiningParams& params, const AprioriOptions& options) {
  params.validate();
  MiningResult out;
  out.rules.participant = std::move(participant);
  out.rules.params = params;
  out.rules.provenance = std::move(provenance);
  for (auto adl : kAllAdls) {
    const auto it = labeled.find(adl);
    GroupOutcome g;
    if (it != labeled.end()) g = mine_group(it->second, adl, params, options);
    if (!g.had_positives) {
      out.diagnostics.push_back({Severity::Warning, "no training data for " + std::string(to_string(adl))});
      continue;
    }
    out.rules.groups[adl] = std::move(g.rules);
  }
  if (out.rules.groups.empty())
    out.diagnostics.push_back({Severity::Error, "no training data for any ADL; rule set is empty"});
  return out;
}

}  // namespace

const Rule* RuleSet::find_rule(std::string_view rule_id) const {
  for (const auto& [adl, rules] : groups)
    for (const auto& r : rules)
      if (r.id == rule_id) return &r;
  return nullptr;
}

std::size_t RuleSet::rule_count() const {
  std::size_t n = 0;
  for (const auto& [adl, rules] : groups) n += rules.size();
  return n;
}

std::string RuleSet::content_hash() const { return fnv1a_hex(content_json(*this).dump()); }

std::string RuleSet::id() const {
  json j{{"scope", participant ? json(*participant) : json("pooled")},
         {"provenance", provenance},
         {"content_hash", content_hash()}};
  return fnv1a_hex(j.dump());
}

json ruleset_to_json(const RuleSet& rs) {
  auto j = content_json(rs);
  j["schema"] = kRuleSetSchema;
  j["scope"] = rs.participant ? json{{"kind", "participant"}, {"participant_id", *rs.participant}}
                              : json{{"kind", "pooled"}};
  j["provenance"] = rs.provenance;
  j["content_hash"] = rs.content_hash();
  j["id"] = rs.id();
  return j;
}

RuleSet ruleset_from_json(const json& j) {
  const auto schema = j.value("schema", std::string{});
  if (schema != kRuleSetSchema)
    throw MiningError("rule set schema '" + schema + "' is not supported (expected '" +
                      std::string(kRuleSetSchema) + "')");
  RuleSet rs;
  const auto& scope = j.at("scope");
  if (scope.at("kind").get<std::string>() == "participant")
    rs.participant = scope.at("participant_id").get<std::string>();
  rs.params = MiningParams{};
  from_json(j.at("params"), rs.params);
  for (const auto& [adl, rules] : j.at("rules").items()) rs.groups[parse_adl(adl)] = rules.get<std::vector<Rule>>();
  rs.provenance = j.at("provenance").get<std::vector<std::string>>();
  for (const auto& [adl, rules] : rs.groups)
    for (const auto& r : rules)
      if (r.id != rule_id(r.adl, r.antecedent) || r.adl != adl)
        throw MiningError("rule " + r.id + " does not match its ADL and antecedent");
  if (j.contains("content_hash") && j.at("content_hash").get<std::string>() != rs.content_hash())
    throw MiningError("rule set content hash mismatch; file was modified");
  return rs;
}

std::string ruleset_text(const RuleSet& rs) { return ruleset_to_json(rs).dump(2) + "\n"; }

void write_ruleset(const std::filesystem::path& path, const RuleSet& rs) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw MiningError("cannot write " + path.string());
  out << ruleset_text(rs);
  if (!out) throw MiningError("write failed for " + path.string());
}

RuleSet read_ruleset(const std::filesystem::path& path) {
  const auto text = read_text_file(path);
  try {
    return ruleset_from_json(json::parse(text));
  } catch (const json::exception& ex) {
    throw MiningError("malformed rule set " + path.string() + ": " + ex.what());
  } catch (const DomainError& ex) {
    throw MiningError("malformed rule set " + path.string() + ": " + ex.what());
  }
}

MiningResult mine_adl_rules(const std::string& participant_id, const LabeledTransactions& labeled,
                            const MiningParams& params, const AprioriOptions& options) {
  return mine(participant_id, {participant_id}, labeled, params, options);
}

MiningResult pool_and_mine(std::span<const ParticipantTraining> participants, const MiningParams& params,
                           const AprioriOptions& options) {
  MiningResult out;
  out.rules.params = params;

  // A canonical role must mean the same thing in every home.
  std::map<std::string, std::pair<std::set<AdlKind>, std::string>> seen;
  for (const auto& p : participants) {
    for (const auto& [role, groups] : p.map.role_groups()) {
      auto [it, inserted] = seen.try_emplace(role, groups, p.participant_id);
      if (!inserted && it->second.first != groups)
        out.diagnostics.push_back({Severity::Error, "role '" + role + "' is grouped differently by '" +
                                                        it->second.second + "' and '" + p.participant_id + "'"});
    }
  }
  if (participants.empty())
    out.diagnostics.push_back({Severity::Error, "nothing to pool: no participants given"});
  if (has_errors(out.diagnostics)) return out;

  std::vector<std::string> provenance;
  LabeledTransactions pooled;
  for (const auto& p : participants) {
    provenance.push_back(p.participant_id);
    for (const auto& [adl, txs] : p.labeled) {
      auto& dst = pooled[adl];
      dst.insert(dst.end(), txs.begin(), txs.end());
    }
  }
  std::sort(provenance.begin(), provenance.end());
  provenance.erase(std::unique(provenance.begin(), provenance.end()), provenance.end());
  return mine(std::nullopt, std::move(provenance), pooled, params, options);
}

}  // namespace adlmine
