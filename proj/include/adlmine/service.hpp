#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "adlmine/pipeline.hpp"
#include "adlmine/timeline.hpp"

namespace httplib {
class Server;
}

namespace adlmine {

inline constexpr std::string_view kMediaType = "application/vnd.adlmine.v1+json";

// Error surfaced to HTTP clients as {code, message} with the given status.
class ServiceError : public std::runtime_error {
 public:
  ServiceError(int status, std::string code, const std::string& message)
      : std::runtime_error(message), status_(status), code_(std::move(code)) {}
  int status() const { return status_; }
  const std::string& code() const { return code_; }

 private:
  int status_;
  std::string code_;
};

// Append-only log of annotation batches. Each batch gets the next revision and
// is written as one JSONL line {revision, participant_id, annotations}.
// Constructing over an existing file replays it; a torn trailing line (a crash
// mid-append) is dropped.
class AnnotationStore {
 public:
  AnnotationStore() = default;  // in memory only
  explicit AnnotationStore(std::filesystem::path file);

  // Stamps every annotation with the new revision and appends the batch.
  std::uint64_t append(const std::string& participant_id, std::vector<Annotation> batch);

  std::uint64_t revision() const;
  std::vector<Annotation> annotations(const std::string& participant_id) const;
  std::size_t count(const std::string& participant_id) const;
  std::vector<std::string> annotated_participants() const;

 private:
  void apply(std::uint64_t revision, const std::string& participant_id, std::vector<Annotation> batch);

  std::optional<std::filesystem::path> file_;
  mutable std::shared_mutex mutex_;
  std::uint64_t revision_ = 0;
  std::map<std::string, std::vector<Annotation>> by_participant_;
};

struct ParticipantData {
  EventLog log;
  SensorMap map;
  int logging_days = 0;
  int span_days = 0;
};

struct ServiceConfig {
  // participants/<id>/events.{csv,jsonl}[.gz] (+ optional sensor_map.json),
  // annotations.jsonl, rulesets/<id>.rules.json, active.json.
  std::filesystem::path data_dir;
  TimeZone tz;
  MiningParams params;
  Minutes bucket{60};
  AprioriOptions mining;
};

// The briefing loop over one data directory. Reads work on an immutable
// snapshot; mutations are serialised by a single writer lock and publish a new
// snapshot when they commit.
class Service {
 public:
  explicit Service(ServiceConfig config);

  json list_participants() const;
  json get_timeline(const std::string& participant_id, const std::optional<std::string>& from,
                    const std::optional<std::string>& to) const;
  json post_annotations(const std::string& participant_id, const json& body);
  json trigger_remine(const std::string& scope, const std::optional<std::string>& participant_id);
  json get_ruleset(const std::string& ruleset_id) const;

  std::uint64_t revision() const;
  // Rule set used for the participant's candidates, if any.
  std::shared_ptr<const RuleSet> active_for(const std::string& participant_id) const;

  void mount(httplib::Server& server);

 private:
  struct Snapshot {
    std::uint64_t revision = 0;
    std::shared_ptr<const RuleSet> pooled;
    std::map<std::string, std::shared_ptr<const RuleSet>> by_participant;
  };

  std::shared_ptr<const Snapshot> snapshot() const;
  void publish(std::shared_ptr<const Snapshot> next);
  const ParticipantData& participant(const std::string& id) const;
  std::shared_ptr<const RuleSet> load_ruleset(const std::string& id) const;
  void store_ruleset(const RuleSet& rs);
  void write_active(const Snapshot& snap) const;
  void load_active();

  ServiceConfig config_;
  std::map<std::string, ParticipantData> participants_;
  AnnotationStore store_;

  std::mutex writer_;
  mutable std::mutex snapshot_mutex_;
  std::shared_ptr<const Snapshot> snapshot_;

  mutable std::mutex rulesets_mutex_;
  mutable std::map<std::string, std::shared_ptr<const RuleSet>> rulesets_;

  // Candidates handed out in timelines, so a rejection may cite just the id.
  mutable std::mutex issued_mutex_;
  mutable std::map<std::string, AdlEvent> issued_;
};

// Loads one participant directory.
ParticipantData load_participant(const std::filesystem::path& dir, const TimeZone& tz);

}  // namespace adlmine
