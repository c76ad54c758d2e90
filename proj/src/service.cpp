#include "adlmine/service.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <httplib.h>

namespace adlmine {
namespace fs = std::filesystem;

namespace {

void write_atomically(const fs::path& path, const std::string& text) {
  const auto tmp = fs::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << text;
    out.flush();
    if (!out) throw std::runtime_error("short write to " + tmp.string());
  }
  fs::rename(tmp, path);
}

bool is_hex_id(const std::string& s) {
  return s.size() == 16 && std::all_of(s.begin(), s.end(), [](char c) {
           return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
         });
}

json diagnostics_json(const std::vector<Diagnostic>& diags) {
  json out = json::array();
  for (const auto& d : diags) out.push_back(d);
  return out;
}

std::string error_messages(const std::vector<Diagnostic>& diags) {
  std::string msg;
  for (const auto& d : diags) {
    if (d.severity != Severity::Error) continue;
    if (!msg.empty()) msg += "; ";
    msg += d.message;
  }
  return msg;
}

}  // namespace

// ---------------------------------------------------------------------------
// AnnotationStore

AnnotationStore::AnnotationStore(fs::path file) : file_(std::move(file)) {
  if (!fs::exists(*file_)) return;
  std::ifstream in(*file_, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + file_->string());
  std::string line;
  std::uintmax_t good_bytes = 0;
  std::uintmax_t offset = 0;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const bool complete = !in.eof();
    offset += line.size() + (complete ? 1 : 0);
    if (line.empty()) {
      good_bytes = offset;
      continue;
    }
    json j;
    std::vector<Annotation> batch;
    std::uint64_t rev = 0;
    std::string pid;
    try {
      j = json::parse(line);
      rev = j.at("revision").get<std::uint64_t>();
      pid = j.at("participant_id").get<std::string>();
      for (const auto& a : j.at("annotations")) batch.push_back(a.get<Annotation>());
    } catch (const std::exception& e) {
      if (!complete) break;  // torn tail from an interrupted append
      throw std::runtime_error(file_->string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
    if (!complete) {
      // A parseable line without its newline never finished committing.
      break;
    }
    if (rev <= revision_)
      throw std::runtime_error(file_->string() + ":" + std::to_string(lineno) + ": revision does not increase");
    apply(rev, pid, std::move(batch));
    good_bytes = offset;
  }
  in.close();
  if (good_bytes != fs::file_size(*file_)) fs::resize_file(*file_, good_bytes);
}

void AnnotationStore::apply(std::uint64_t revision, const std::string& participant_id,
                            std::vector<Annotation> batch) {
  revision_ = revision;
  auto& list = by_participant_[participant_id];
  for (auto& a : batch) {
    a.revision = revision;
    list.push_back(std::move(a));
  }
}

std::uint64_t AnnotationStore::append(const std::string& participant_id, std::vector<Annotation> batch) {
  std::unique_lock lock(mutex_);
  const auto rev = revision_ + 1;
  for (auto& a : batch) a.revision = rev;
  if (file_) {
    json line{{"revision", rev}, {"participant_id", participant_id}, {"annotations", batch}};
    std::ofstream out(*file_, std::ios::binary | std::ios::app);
    out << line.dump() << '\n';
    out.flush();
    if (!out) throw std::runtime_error("cannot append to " + file_->string());
  }
  apply(rev, participant_id, std::move(batch));
  return rev;
}

std::uint64_t AnnotationStore::revision() const {
  std::shared_lock lock(mutex_);
  return revision_;
}

std::vector<Annotation> AnnotationStore::annotations(const std::string& participant_id) const {
  std::shared_lock lock(mutex_);
  const auto it = by_participant_.find(participant_id);
  return it == by_participant_.end() ? std::vector<Annotation>{} : it->second;
}

std::size_t AnnotationStore::count(const std::string& participant_id) const {
  std::shared_lock lock(mutex_);
  const auto it = by_participant_.find(participant_id);
  return it == by_participant_.end() ? 0 : it->second.size();
}

std::vector<std::string> AnnotationStore::annotated_participants() const {
  std::shared_lock lock(mutex_);
  std::vector<std::string> out;
  for (const auto& [pid, list] : by_participant_)
    if (!list.empty()) out.push_back(pid);
  return out;
}

// ---------------------------------------------------------------------------

ParticipantData load_participant(const fs::path& dir, const TimeZone& tz) {
  std::optional<fs::path> events;
  for (const char* name : {"events.csv", "events.csv.gz", "events.jsonl", "events.jsonl.gz"}) {
    if (fs::exists(dir / name)) {
      events = dir / name;
      break;
    }
  }
  if (!events) throw IngestError("no events file in " + dir.string());
  auto parsed = read_events_file(*events);
  ParticipantData p;
  p.log = build_log(std::move(parsed.events));
  if (fs::exists(dir / "sensor_map.json")) {
    p.map = json::parse(read_text_file(dir / "sensor_map.json")).get<SensorMap>();
    p.map.validate();
  } else {
    p.map = SensorMap::implicit(p.log.participant_id, p.log.sensor_keys());
  }
  p.logging_days = logging_days(p.log, tz);
  p.span_days = span_days(p.log, tz);
  return p;
}

Service::Service(ServiceConfig config)
    : config_(std::move(config)), store_(config_.data_dir / "annotations.jsonl") {
  config_.params.validate();
  const auto root = config_.data_dir / "participants";
  if (fs::is_directory(root)) {
    std::vector<fs::path> dirs;
    for (const auto& entry : fs::directory_iterator(root))
      if (entry.is_directory()) dirs.push_back(entry.path());
    std::sort(dirs.begin(), dirs.end());
    for (const auto& d : dirs) {
      auto p = load_participant(d, config_.tz);
      const auto id = p.log.participant_id;
      if (!participants_.emplace(id, std::move(p)).second)
        throw IngestError("participant '" + id + "' appears in more than one directory");
    }
  }
  fs::create_directories(config_.data_dir / "rulesets");
  load_active();
}

std::shared_ptr<const Service::Snapshot> Service::snapshot() const {
  std::lock_guard lock(snapshot_mutex_);
  return snapshot_;
}

void Service::publish(std::shared_ptr<const Snapshot> next) {
  std::lock_guard lock(snapshot_mutex_);
  snapshot_ = std::move(next);
}

std::uint64_t Service::revision() const { return snapshot()->revision; }

std::shared_ptr<const RuleSet> Service::active_for(const std::string& participant_id) const {
  const auto snap = snapshot();
  const auto it = snap->by_participant.find(participant_id);
  return it != snap->by_participant.end() ? it->second : snap->pooled;
}

const ParticipantData& Service::participant(const std::string& id) const {
  const auto it = participants_.find(id);
  if (it == participants_.end()) throw ServiceError(404, "unknown_participant", "no participant '" + id + "'");
  return it->second;
}

std::shared_ptr<const RuleSet> Service::load_ruleset(const std::string& id) const {
  std::lock_guard lock(rulesets_mutex_);
  if (const auto it = rulesets_.find(id); it != rulesets_.end()) return it->second;
  if (!is_hex_id(id)) return nullptr;
  const auto path = config_.data_dir / "rulesets" / (id + ".rules.json");
  if (!fs::exists(path)) return nullptr;
  auto rs = std::make_shared<const RuleSet>(read_ruleset(path));
  if (rs->id() != id) throw std::runtime_error(path.string() + " does not hold rule set " + id);
  rulesets_.emplace(id, rs);
  return rs;
}

void Service::store_ruleset(const RuleSet& rs) {
  const auto id = rs.id();
  const auto path = config_.data_dir / "rulesets" / (id + ".rules.json");
  // Rule set files are immutable; an identical id means identical content.
  if (!fs::exists(path)) write_atomically(path, ruleset_text(rs));
  std::lock_guard lock(rulesets_mutex_);
  rulesets_.try_emplace(id, std::make_shared<const RuleSet>(rs));
}

void Service::write_active(const Snapshot& snap) const {
  json by = json::object();
  for (const auto& [pid, rs] : snap.by_participant) by[pid] = rs->id();
  json j{{"pooled", snap.pooled ? json(snap.pooled->id()) : json(nullptr)}, {"participants", by}};
  write_atomically(config_.data_dir / "active.json", j.dump(2) + "\n");
}

void Service::load_active() {
  auto snap = std::make_shared<Snapshot>();
  snap->revision = store_.revision();
  const auto path = config_.data_dir / "active.json";
  if (fs::exists(path)) {
    const auto j = json::parse(read_text_file(path));
    auto need = [&](const std::string& id) {
      auto rs = load_ruleset(id);
      if (!rs) throw std::runtime_error("active rule set " + id + " is missing from " + config_.data_dir.string());
      return rs;
    };
    if (j.contains("pooled") && !j.at("pooled").is_null()) snap->pooled = need(j.at("pooled").get<std::string>());
    for (const auto& [pid, id] : j.value("participants", json::object()).items())
      snap->by_participant[pid] = need(id.get<std::string>());
  }
  publish(std::move(snap));
}

json Service::list_participants() const {
  json list = json::array();
  for (const auto& [id, p] : participants_) {
    list.push_back({{"participant_id", id},
                    {"first", format_instant(p.log.first)},
                    {"last", format_instant(p.log.last)},
                    {"logging_days", p.logging_days},
                    {"span_days", p.span_days},
                    {"sensors", p.log.sensor_inventory.size()},
                    {"annotations", store_.count(id)}});
  }
  return json{{"revision", revision()}, {"participants", list}};
}

json Service::get_timeline(const std::string& participant_id, const std::optional<std::string>& from,
                           const std::optional<std::string>& to) const {
  const auto& p = participant(participant_id);
  Instant a = p.log.first;
  Instant b = p.log.last + Millis{1};
  try {
    if (from) a = parse_instant(*from);
    if (to) b = parse_instant(*to);
  } catch (const std::exception& e) {
    throw ServiceError(400, "bad_time", e.what());
  }
  if (b <= a) throw ServiceError(400, "inverted_range", "timeline range must have from < to");

  const auto snap = snapshot();
  const auto it = snap->by_participant.find(participant_id);
  const auto rules = it != snap->by_participant.end() ? it->second : snap->pooled;
  auto doc = build_timeline(p.log, p.map, rules.get(), config_.tz, a, b, config_.bucket);
  doc.revision = snap->revision;
  {
    std::lock_guard lock(issued_mutex_);
    for (const auto& c : doc.candidates) issued_.try_emplace(c.candidate_id, c);
  }
  return timeline_to_json(doc);
}

json Service::post_annotations(const std::string& participant_id, const json& body) {
  participant(participant_id);
  const json* items = nullptr;
  if (body.is_array())
    items = &body;
  else if (body.is_object() && body.contains("annotations") && body.at("annotations").is_array())
    items = &body.at("annotations");
  if (items == nullptr) throw ServiceError(400, "malformed_batch", "expected an array of verdicts");
  if (items->empty()) throw ServiceError(422, "empty_batch", "batch contains no verdicts");

  std::vector<Annotation> batch;
  for (std::size_t i = 0; i < items->size(); ++i) {
    const auto where = "verdict " + std::to_string(i) + ": ";
    json v = (*items)[i];
    if (!v.is_object()) throw ServiceError(422, "malformed_verdict", where + "not an object");
    if (!v.contains("participant_id")) v["participant_id"] = participant_id;
    if (v.at("participant_id") != participant_id)
      throw ServiceError(422, "malformed_verdict", where + "participant_id does not match the path");

    std::optional<AdlEvent> issued;
    if (v.contains("candidate_id") && v.at("candidate_id").is_string()) {
      std::lock_guard lock(issued_mutex_);
      const auto it = issued_.find(v.at("candidate_id").get<std::string>());
      if (it != issued_.end() && it->second.participant_id == participant_id) issued = it->second;
    }
    if (issued) {
      if (!v.contains("adl")) v["adl"] = to_string(issued->adl);
      if (!v.contains("at") && !v.contains("from")) {
        v["from"] = format_instant(issued->start);
        v["to"] = format_instant(issued->end);
      }
    }
    Annotation a;
    try {
      a = v.get<Annotation>();
      a.validate();
    } catch (const std::exception& e) {
      throw ServiceError(422, "malformed_verdict", where + e.what());
    }
    if (a.candidate_id) {
      const bool self_consistent = *a.candidate_id == candidate_id(participant_id, a.adl, a.from, a.to);
      const bool known = issued && issued->adl == a.adl;
      if (!self_consistent && !known)
        throw ServiceError(422, "invalid_candidate", where + "unknown candidate_id '" + *a.candidate_id + "'");
    }
    batch.push_back(std::move(a));
  }

  std::lock_guard writer(writer_);
  const auto rev = store_.append(participant_id, std::move(batch));
  auto next = std::make_shared<Snapshot>(*snapshot());
  next->revision = rev;
  publish(std::move(next));
  return json{{"revision", rev}, {"accepted", items->size()}};
}

json Service::trigger_remine(const std::string& scope, const std::optional<std::string>& participant_id) {
  std::lock_guard writer(writer_);
  MiningResult result;
  auto next = std::make_shared<Snapshot>(*snapshot());
  if (scope == "participant") {
    if (!participant_id) throw ServiceError(400, "missing_participant", "participant scope needs ?participant=");
    const auto& p = participant(*participant_id);
    const auto anns = store_.annotations(*participant_id);
    if (anns.empty()) throw ServiceError(409, "no_annotations", "no annotations for '" + *participant_id + "'");
    result = mine_participant(p.log, p.map, anns, config_.params, config_.tz, std::nullopt, config_.mining);
    if (has_errors(result.diagnostics)) throw ServiceError(422, "mining_failed", error_messages(result.diagnostics));
    auto rs = std::make_shared<const RuleSet>(result.rules);
    next->by_participant[*participant_id] = rs;
  } else if (scope == "pooled") {
    std::vector<ParticipantTraining> pool;
    std::vector<Diagnostic> diags;
    for (const auto& pid : store_.annotated_participants()) {
      const auto it = participants_.find(pid);
      if (it == participants_.end()) continue;
      const auto anns = store_.annotations(pid);
      auto training = build_training(it->second.log, it->second.map, anns, config_.params, config_.tz);
      diags.insert(diags.end(), training.diagnostics.begin(), training.diagnostics.end());
      pool.push_back({pid, std::move(training.labeled), it->second.map});
    }
    if (pool.empty()) throw ServiceError(409, "no_annotations", "no participant has annotations");
    result = pool_and_mine(pool, config_.params, config_.mining);
    diags.insert(diags.end(), result.diagnostics.begin(), result.diagnostics.end());
    result.diagnostics = std::move(diags);
    if (has_errors(result.diagnostics)) throw ServiceError(422, "mining_failed", error_messages(result.diagnostics));
    next->pooled = std::make_shared<const RuleSet>(result.rules);
    next->by_participant.clear();
  } else {
    throw ServiceError(400, "bad_scope", "scope must be 'pooled' or 'participant'");
  }

  store_ruleset(result.rules);
  write_active(*next);
  publish(next);
  return json{{"ruleset_id", result.rules.id()},
              {"content_hash", result.rules.content_hash()},
              {"scope", scope},
              {"revision", next->revision},
              {"rule_count", result.rules.rule_count()},
              {"diagnostics", diagnostics_json(result.diagnostics)}};
}

json Service::get_ruleset(const std::string& ruleset_id) const {
  const auto rs = load_ruleset(ruleset_id);
  if (!rs) throw ServiceError(404, "unknown_ruleset", "no rule set '" + ruleset_id + "'");
  return ruleset_to_json(*rs);
}

// ---------------------------------------------------------------------------
// HTTP

namespace {

void respond(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), std::string(kMediaType));
}

template <class Fn>
httplib::Server::Handler guarded(Fn fn) {
  return [fn](const httplib::Request& req, httplib::Response& res) {
    try {
      respond(res, 200, fn(req));
    } catch (const ServiceError& e) {
      respond(res, e.status(), {{"code", e.code()}, {"message", e.what()}});
    } catch (const json::exception& e) {
      respond(res, 400, {{"code", "malformed_json"}, {"message", e.what()}});
    } catch (const std::exception& e) {
      respond(res, 500, {{"code", "internal"}, {"message", e.what()}});
    }
  };
}

std::optional<std::string> param(const httplib::Request& req, const char* key) {
  if (!req.has_param(key)) return std::nullopt;
  return req.get_param_value(key);
}

}  // namespace

void Service::mount(httplib::Server& server) {
  server.Get("/participants", guarded([this](const httplib::Request&) { return list_participants(); }));
  server.Get(R"(/participants/([^/]+)/timeline)", guarded([this](const httplib::Request& req) {
               return get_timeline(req.matches[1], param(req, "from"), param(req, "to"));
             }));
  server.Post(R"(/participants/([^/]+)/annotations)", guarded([this](const httplib::Request& req) {
                return post_annotations(req.matches[1], json::parse(req.body));
              }));
  server.Post("/remine", guarded([this](const httplib::Request& req) {
                return trigger_remine(param(req, "scope").value_or("pooled"), param(req, "participant"));
              }));
  server.Get(R"(/rulesets/([^/]+))",
             guarded([this](const httplib::Request& req) { return get_ruleset(req.matches[1]); }));
  server.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
    if (!res.body.empty()) return httplib::Server::HandlerResponse::Unhandled;
    respond(res, res.status, {{"code", res.status == 404 ? "not_found" : "http_error"},
                              {"message", req.method + " " + req.path}});
    return httplib::Server::HandlerResponse::Handled;
  });
}

}  // namespace adlmine
