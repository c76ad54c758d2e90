#include "cli.hpp"

#include <atomic>
#include <fstream>
#include <functional>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <httplib.h>

#include "adlmine/eval.hpp"
#include "adlmine/pipeline.hpp"
#include "adlmine/service.hpp"
#include "adlmine/synth.hpp"
#include "adlmine/timeline.hpp"

namespace adlmine::cli {
namespace {
namespace fs = std::filesystem;

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string params;
  std::string tz;
  unsigned jobs = 1;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--params", c.params, "JSON file overriding the mining parameters");
  sub->add_option("--tz", c.tz, "time zone for day boundaries (default: $ADLMINE_TZ, else UTC)");
  sub->add_option("--jobs", c.jobs, "participants processed in parallel")->check(CLI::PositiveNumber);
}

MiningParams load_params(const std::string& path) {
  MiningParams p;
  if (!path.empty()) p = json::parse(read_text_file(path)).get<MiningParams>();
  p.validate();
  return p;
}

TimeZone load_tz(const Common& c) { return c.tz.empty() ? TimeZone::from_environment() : TimeZone::load(c.tz); }

// Runs fn(0..n-1) on up to `jobs` threads; results keep input order.
template <class Fn>
auto parallel_map(std::size_t n, unsigned jobs, Fn fn) {
  using T = decltype(fn(std::size_t{0}));
  std::vector<std::optional<T>> results(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < n;) {
      try {
        results[i].emplace(fn(i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  const auto threads = std::min<std::size_t>(jobs, n);
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<T> out;
  out.reserve(n);
  for (auto& r : results) out.push_back(std::move(*r));
  return out;
}

class Reporter {
 public:
  explicit Reporter(std::ostream& err) : err_(err) {}
  void report(const std::string& source, const std::vector<Diagnostic>& diags) {
    for (const auto& d : diags) {
      err_ << source;
      if (d.line) err_ << ':' << d.line;
      err_ << ": " << (d.severity == Severity::Error ? "error" : "warning") << ": " << d.message << '\n';
      failed_ = failed_ || d.severity == Severity::Error;
    }
  }
  bool failed() const { return failed_; }

 private:
  std::ostream& err_;
  bool failed_ = false;
};

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out << text;
  if (!out.flush()) throw DataError("cannot write " + path.string());
}

struct LoadedLog {
  EventLog log;
  std::vector<Diagnostic> diagnostics;
};

LoadedLog load_log(const std::string& path) {
  auto parsed = read_events_file(path);
  return {build_log(std::move(parsed.events)), std::move(parsed.diagnostics)};
}

SensorMap load_map(const std::string& path, const EventLog& log) {
  if (path.empty()) return SensorMap::implicit(log.participant_id, log.sensor_keys());
  auto map = json::parse(read_text_file(path)).get<SensorMap>();
  map.validate();
  if (map.participant_id() != log.participant_id)
    throw DataError("sensor map " + path + " is for '" + map.participant_id() + "', events are for '" +
                    log.participant_id + "'");
  return map;
}

std::optional<Interval> load_range(const std::string& from, const std::string& to, const EventLog& log) {
  if (from.empty() && to.empty()) return std::nullopt;
  Interval r{from.empty() ? log.first : parse_instant(from), to.empty() ? log.last + Millis{1} : parse_instant(to)};
  if (r.to <= r.from) throw DataError("--from must be before --to");
  return r;
}

std::string events_text(std::span<const SensorEvent> events, bool jsonl) {
  std::ostringstream s;
  if (jsonl)
    write_events_jsonl(s, events);
  else
    write_events_csv(s, events);
  return s.str();
}

bool is_jsonl(const fs::path& p) {
  auto name = p.filename().string();
  if (name.ends_with(".gz")) name.resize(name.size() - 3);
  return name.ends_with(".jsonl");
}

std::string adl_events_text(std::span<const AdlEvent> events) {
  std::ostringstream s;
  write_adl_events_jsonl(s, events);
  return s.str();
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-")
    out << text;
  else
    write_text(path, text);
}

// ---------------------------------------------------------------------------

struct IngestArgs {
  std::vector<std::string> events;
  std::string out;
  std::string out_dir;
};

int cmd_ingest(const IngestArgs& a, const Common& c, std::ostream& out, Reporter& rep) {
  if (!a.out.empty() && a.events.size() != 1) throw DataError("--out takes a single --events input; use --out-dir");
  const auto tz = load_tz(c);
  auto logs = parallel_map(a.events.size(), c.jobs, [&](std::size_t i) { return load_log(a.events[i]); });
  for (std::size_t i = 0; i < logs.size(); ++i) {
    const auto& log = logs[i].log;
    rep.report(a.events[i], logs[i].diagnostics);
    if (!a.out.empty()) write_text(a.out, events_text(log.events, is_jsonl(a.out)));
    if (!a.out_dir.empty()) write_text(fs::path(a.out_dir) / (log.participant_id + ".csv"), events_text(log.events, false));
    json summary{{"source", a.events[i]},
                 {"participant_id", log.participant_id},
                 {"events", log.events.size()},
                 {"sensors", log.sensor_inventory.size()},
                 {"first", format_instant(log.first)},
                 {"last", format_instant(log.last)},
                 {"logging_days", logging_days(log, tz)},
                 {"span_days", span_days(log, tz)},
                 {"skipped_lines", logs[i].diagnostics.size()}};
    out << summary.dump() << '\n';
  }
  return rep.failed() ? 1 : 0;
}

struct SynthArgs {
  std::vector<std::string> scripts;
  int days = 0;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  std::optional<int> train_days;
};

int cmd_synth(const SynthArgs& a, const Common& c, std::ostream& out) {
  std::vector<RoutineScript> scripts;
  std::set<std::string> ids;
  for (std::size_t i = 0; i < a.scripts.size(); ++i) {
    auto s = json::parse(read_text_file(a.scripts[i])).get<RoutineScript>();
    if (a.seed) s.seed = *a.seed + i;
    if (!ids.insert(s.participant_id).second) throw DataError("two scripts for participant '" + s.participant_id + "'");
    scripts.push_back(std::move(s));
  }
  if (a.train_days && *a.train_days < 0) throw DataError("--train-days must be non-negative");
  auto outputs = parallel_map(scripts.size(), c.jobs, [&](std::size_t i) { return generate(scripts[i], a.days); });
  const fs::path dir(a.out_dir);
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    const auto& o = outputs[i];
    const auto& pid = o.log.participant_id;
    write_text(dir / (pid + ".events.csv"), events_text(o.log.events, false));
    write_text(dir / (pid + ".truth.jsonl"), adl_events_text(o.truth));
    write_text(dir / (pid + ".sensor_map.json"), json(o.map).dump(2) + "\n");
    if (a.train_days) {
      const auto tz = TimeZone::load(scripts[i].timezone);
      auto cutoff_day = scripts[i].start_date;
      for (int d = 0; d < *a.train_days; ++d) cutoff_day = next_day(cutoff_day);
      const auto cutoff = tz.midnight(cutoff_day);
      std::vector<Annotation> anns;
      for (const auto& e : o.truth) {
        if (e.start >= cutoff) continue;
        Annotation an;
        an.participant_id = pid;
        an.adl = e.adl;
        an.from = e.start;
        an.to = e.end;
        an.verdict = Verdict::Confirmed;
        an.briefing_id = "synth";
        anns.push_back(std::move(an));
      }
      std::ostringstream s;
      write_annotations_jsonl(s, anns);
      write_text(dir / (pid + ".annotations.jsonl"), s.str());
    }
    out << pid << ": " << o.log.events.size() << " events, " << o.truth.size() << " truth events\n";
  }
  return 0;
}

struct MineArgs {
  std::string events;
  std::string annotations;
  std::string sensor_map;
  std::string out;
  std::string from;
  std::string to;
};

int cmd_mine(const MineArgs& a, const Common& c, std::ostream& out, Reporter& rep) {
  const auto params = load_params(c.params);
  const auto tz = load_tz(c);
  auto loaded = load_log(a.events);
  rep.report(a.events, loaded.diagnostics);
  const auto map = load_map(a.sensor_map, loaded.log);
  auto anns = read_annotations_file(a.annotations);
  rep.report(a.annotations, anns.diagnostics);
  const auto result = mine_participant(loaded.log, map, anns.annotations, params, tz,
                                       load_range(a.from, a.to, loaded.log));
  rep.report("mine", result.diagnostics);
  if (rep.failed()) return 1;
  write_text(a.out, ruleset_text(result.rules));
  out << "ruleset " << result.rules.id() << ": " << result.rules.rule_count() << " rules\n";
  return 0;
}

struct PoolArgs {
  std::vector<std::string> events;
  std::vector<std::string> annotations;
  std::vector<std::string> sensor_maps;
  std::string out;
  std::string from;
  std::string to;
};

int cmd_pool(const PoolArgs& a, const Common& c, std::ostream& out, Reporter& rep) {
  if (a.annotations.size() != a.events.size())
    throw DataError("pool needs one --annotations file per --events file");
  if (!a.sensor_maps.empty() && a.sensor_maps.size() != a.events.size())
    throw DataError("pool needs no --sensor-map, or one per --events file");
  const auto params = load_params(c.params);
  const auto tz = load_tz(c);

  struct Prepared {
    ParticipantTraining training;
    std::vector<std::pair<std::string, std::vector<Diagnostic>>> diagnostics;
  };
  auto prepared = parallel_map(a.events.size(), c.jobs, [&](std::size_t i) {
    Prepared p;
    auto loaded = load_log(a.events[i]);
    p.diagnostics.emplace_back(a.events[i], loaded.diagnostics);
    auto map = load_map(a.sensor_maps.empty() ? std::string{} : a.sensor_maps[i], loaded.log);
    auto anns = read_annotations_file(a.annotations[i]);
    p.diagnostics.emplace_back(a.annotations[i], anns.diagnostics);
    auto build = build_training(loaded.log, map, anns.annotations, params, tz, load_range(a.from, a.to, loaded.log));
    p.diagnostics.emplace_back(loaded.log.participant_id, build.diagnostics);
    p.training = ParticipantTraining{loaded.log.participant_id, std::move(build.labeled), std::move(map)};
    return p;
  });
  std::vector<ParticipantTraining> pool;
  for (auto& p : prepared) {
    for (const auto& [src, d] : p.diagnostics) rep.report(src, d);
    pool.push_back(std::move(p.training));
  }
  const auto result = pool_and_mine(pool, params);
  rep.report("pool", result.diagnostics);
  if (rep.failed()) return 1;
  write_text(a.out, ruleset_text(result.rules));
  out << "ruleset " << result.rules.id() << ": " << result.rules.rule_count() << " rules from " << pool.size()
      << " participants\n";
  return 0;
}

struct DetectArgs {
  std::vector<std::string> events;
  std::vector<std::string> sensor_maps;
  std::string rules;
  std::string out;
  std::string out_dir;
  std::string from;
  std::string to;
};

int cmd_detect(const DetectArgs& a, const Common& c, std::ostream& out, Reporter& rep) {
  if (!a.sensor_maps.empty() && a.sensor_maps.size() != a.events.size())
    throw DataError("detect needs no --sensor-map, or one per --events file");
  if (a.events.size() > 1 && a.out_dir.empty()) throw DataError("several --events inputs need --out-dir");
  const auto rules = read_ruleset(a.rules);
  const auto params = c.params.empty() ? rules.params : load_params(c.params);
  const auto tz = load_tz(c);

  struct Detected {
    std::string participant_id;
    Timelines timelines;
    std::vector<Diagnostic> load_diagnostics;
  };
  auto results = parallel_map(a.events.size(), c.jobs, [&](std::size_t i) {
    auto loaded = load_log(a.events[i]);
    const auto map = load_map(a.sensor_maps.empty() ? std::string{} : a.sensor_maps[i], loaded.log);
    auto tl = detect_all(loaded.log, map, rules, params, tz, load_range(a.from, a.to, loaded.log));
    return Detected{loaded.log.participant_id, std::move(tl), std::move(loaded.diagnostics)};
  });
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    rep.report(a.events[i], r.load_diagnostics);
    rep.report(r.participant_id, r.timelines.diagnostics);
    const auto text = adl_events_text(r.timelines.all());
    if (!a.out_dir.empty())
      write_text(fs::path(a.out_dir) / (r.participant_id + ".adl.jsonl"), text);
    else
      emit(a.out, text, out);
  }
  return rep.failed() ? 1 : 0;
}

struct EvalArgs {
  std::vector<std::string> detected;
  std::vector<std::string> truth;
  std::vector<std::string> events;
  std::optional<double> days;
  std::string rules;
  std::string out;
  std::string per_day_csv;
  std::string proportions_csv;
  std::string matching = "greedy";
};

int cmd_eval(const EvalArgs& a, const Common& c, std::ostream& out, Reporter& rep) {
  if (!a.days && a.events.empty()) throw DataError("eval needs --events (logging-day denominators) or --days");
  std::optional<RuleSet> rules;
  if (!a.rules.empty()) rules = read_ruleset(a.rules);
  const auto params = !c.params.empty() ? load_params(c.params) : rules ? rules->params : MiningParams{};
  const auto tz = load_tz(c);
  const auto strategy = parse_match_strategy(a.matching);

  std::map<std::string, std::vector<AdlEvent>> detected;
  std::map<std::string, std::vector<AdlEvent>> truth;
  std::set<std::string> ids;
  for (const auto& f : a.detected)
    for (auto& e : read_adl_events_file(f)) {
      ids.insert(e.participant_id);
      detected[e.participant_id].push_back(std::move(e));
    }
  for (const auto& f : a.truth)
    for (auto& e : read_adl_events_file(f)) {
      ids.insert(e.participant_id);
      truth[e.participant_id].push_back(std::move(e));
    }
  std::map<std::string, int> days_by_participant;
  auto logs = parallel_map(a.events.size(), c.jobs, [&](std::size_t i) { return load_log(a.events[i]); });
  for (std::size_t i = 0; i < logs.size(); ++i) {
    rep.report(a.events[i], logs[i].diagnostics);
    ids.insert(logs[i].log.participant_id);
    days_by_participant[logs[i].log.participant_id] = logging_days(logs[i].log, tz);
  }

  std::vector<ParticipantReport> reports;
  std::vector<AdlEvent> all_detected;
  for (const auto& id : ids) {
    double days = 0;
    if (a.days) {
      days = *a.days;
    } else {
      const auto it = days_by_participant.find(id);
      if (it == days_by_participant.end()) throw DataError("no --events log for participant '" + id + "'");
      days = it->second;
    }
    const auto& det = detected[id];
    std::optional<std::span<const AdlEvent>> tr;
    if (!a.truth.empty()) tr = std::span<const AdlEvent>(truth[id]);
    reports.push_back(evaluate_participant(id, det, tr, days, params, strategy));
    all_detected.insert(all_detected.end(), det.begin(), det.end());
  }
  const auto ranks = sensor_importance(rules.value_or(RuleSet{}), all_detected);
  auto metrics = metrics_json(reports, ranks);
  if (!a.truth.empty()) metrics["matching_strategy"] = to_string(strategy);
  emit(a.out, metrics.dump(2) + "\n", out);
  if (!a.per_day_csv.empty()) write_text(a.per_day_csv, per_day_csv(reports));
  if (!a.proportions_csv.empty()) write_text(a.proportions_csv, proportions_csv(reports));
  return rep.failed() ? 1 : 0;
}

struct TimelineArgs {
  std::string events;
  std::string sensor_map;
  std::string rules;
  std::string from;
  std::string to;
  int bucket_minutes = 60;
  std::string out;
};

int cmd_export_timeline(const TimelineArgs& a, const Common& c, std::ostream& out, Reporter& rep) {
  const auto tz = load_tz(c);
  auto loaded = load_log(a.events);
  rep.report(a.events, loaded.diagnostics);
  const auto map = load_map(a.sensor_map, loaded.log);
  std::optional<RuleSet> rules;
  if (!a.rules.empty()) {
    rules = read_ruleset(a.rules);
    if (!c.params.empty()) rules->params = load_params(c.params);
  }
  const auto range = load_range(a.from, a.to, loaded.log).value_or(Interval{loaded.log.first, loaded.log.last + Millis{1}});
  const auto doc = build_timeline(loaded.log, map, rules ? &*rules : nullptr, tz, range.from, range.to,
                                  Minutes{a.bucket_minutes});
  emit(a.out, timeline_to_json(doc).dump(2) + "\n", out);
  return rep.failed() ? 1 : 0;
}

struct ServeArgs {
  std::string data;
  std::string host = "127.0.0.1";
  int port = 8080;
  int bucket_minutes = 60;
};

int cmd_serve(const ServeArgs& a, const Common& c, std::ostream& out) {
  ServiceConfig cfg;
  cfg.data_dir = a.data;
  cfg.tz = load_tz(c);
  cfg.params = load_params(c.params);
  cfg.bucket = Minutes{a.bucket_minutes};
  Service service(std::move(cfg));
  httplib::Server server;
  service.mount(server);
  int port = a.port;
  if (port == 0) {
    port = server.bind_to_any_port(a.host);
    if (port < 0) throw DataError("cannot bind " + a.host);
  } else if (!server.bind_to_port(a.host, port)) {
    throw DataError("cannot bind " + a.host + ":" + std::to_string(port));
  }
  out << "listening on http://" << a.host << ':' << port << std::endl;
  return server.listen_after_bind() ? 0 : 1;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mine ADL association rules from home sensor logs and detect activities."};
  app.name("adlmine");
  app.require_subcommand(1);
  app.fallthrough(false);

  Common common;
  std::function<int(Reporter&)> action;

  IngestArgs ingest;
  auto* s = app.add_subcommand("ingest", "validate and normalise raw sensor event logs");
  add_common(s, common);
  s->add_option("--events", ingest.events, "event files (.csv/.jsonl, optionally .gz)")->required();
  s->add_option("--out", ingest.out, "canonical output file (single input)");
  s->add_option("--out-dir", ingest.out_dir, "write <participant>.csv per input here");
  s->callback([&] { action = [&](Reporter& r) { return cmd_ingest(ingest, common, out, r); }; });

  SynthArgs synth;
  s = app.add_subcommand("synth", "generate synthetic participants with ground truth");
  add_common(s, common);
  s->add_option("--script", synth.scripts, "routine script JSON files")->required();
  s->add_option("--days", synth.days, "days to generate")->required()->check(CLI::PositiveNumber);
  s->add_option("--seed", synth.seed, "override the script seed (incremented per script)");
  s->add_option("--out-dir", synth.out_dir, "output directory")->required();
  s->add_option("--train-days", synth.train_days, "also write truth of the first N days as annotations");
  s->callback([&] { action = [&](Reporter&) { return cmd_synth(synth, common, out); }; });

  MineArgs mine;
  s = app.add_subcommand("mine", "mine one participant's rule set from annotations");
  add_common(s, common);
  s->add_option("--events", mine.events, "event file")->required();
  s->add_option("--annotations", mine.annotations, "annotation JSONL")->required();
  s->add_option("--sensor-map", mine.sensor_map, "sensor map JSON (default: from sensor names)");
  s->add_option("--out", mine.out, "rule set output")->required();
  s->add_option("--from", mine.from, "training range start (ISO-8601)");
  s->add_option("--to", mine.to, "training range end, exclusive");
  s->callback([&] { action = [&](Reporter& r) { return cmd_mine(mine, common, out, r); }; });

  PoolArgs pool;
  s = app.add_subcommand("pool", "mine one rule set from several participants");
  add_common(s, common);
  s->add_option("--events", pool.events, "event files")->required();
  s->add_option("--annotations", pool.annotations, "annotation files, one per events file")->required();
  s->add_option("--sensor-map", pool.sensor_maps, "sensor maps, one per events file");
  s->add_option("--out", pool.out, "rule set output")->required();
  s->add_option("--from", pool.from, "training range start");
  s->add_option("--to", pool.to, "training range end, exclusive");
  s->callback([&] { action = [&](Reporter& r) { return cmd_pool(pool, common, out, r); }; });

  DetectArgs detect;
  s = app.add_subcommand("detect", "detect ADL events with a rule set");
  add_common(s, common);
  s->add_option("--events", detect.events, "event files")->required();
  s->add_option("--rules", detect.rules, "rule set JSON")->required();
  s->add_option("--sensor-map", detect.sensor_maps, "sensor maps, one per events file");
  s->add_option("--out", detect.out, "ADL event JSONL (default: stdout)");
  s->add_option("--out-dir", detect.out_dir, "write <participant>.adl.jsonl per input here");
  s->add_option("--from", detect.from, "detection range start");
  s->add_option("--to", detect.to, "detection range end, exclusive");
  s->callback([&] { action = [&](Reporter& r) { return cmd_detect(detect, common, out, r); }; });

  EvalArgs eval;
  s = app.add_subcommand("eval", "score detections and summarise ADL frequencies");
  add_common(s, common);
  s->add_option("--detected", eval.detected, "detected ADL event JSONL files")->required();
  s->add_option("--truth", eval.truth, "ground-truth ADL event JSONL files");
  s->add_option("--events", eval.events, "event logs, for logging-day denominators");
  s->add_option("--days", eval.days, "fixed day denominator instead of logging days");
  s->add_option("--rules", eval.rules, "rule set behind the detections (sensor ranking)");
  s->add_option("--out", eval.out, "metrics JSON (default: stdout)");
  s->add_option("--per-day-csv", eval.per_day_csv, "per-day counts table");
  s->add_option("--proportions-csv", eval.proportions_csv, "proportions table");
  s->add_option("--matching", eval.matching, "greedy (default) or maximum one-to-one matching")
      ->check(CLI::IsMember({"greedy", "maximum"}));
  s->callback([&] { action = [&](Reporter& r) { return cmd_eval(eval, common, out, r); }; });

  TimelineArgs timeline;
  s = app.add_subcommand("export-timeline", "export the raw-sensor and candidate timeline document");
  add_common(s, common);
  s->add_option("--events", timeline.events, "event file")->required();
  s->add_option("--sensor-map", timeline.sensor_map, "sensor map JSON");
  s->add_option("--rules", timeline.rules, "rule set for candidates");
  s->add_option("--from", timeline.from, "range start");
  s->add_option("--to", timeline.to, "range end, exclusive");
  s->add_option("--bucket-minutes", timeline.bucket_minutes, "lane bucket size")->check(CLI::PositiveNumber);
  s->add_option("--out", timeline.out, "timeline JSON (default: stdout)");
  s->callback([&] { action = [&](Reporter& r) { return cmd_export_timeline(timeline, common, out, r); }; });

  ServeArgs serve;
  s = app.add_subcommand("serve", "run the briefing HTTP service over a data directory");
  add_common(s, common);
  s->add_option("--data", serve.data, "data directory")->required();
  s->add_option("--host", serve.host, "listen address");
  s->add_option("--port", serve.port, "listen port (0: any free port)");
  s->add_option("--bucket-minutes", serve.bucket_minutes, "lane bucket size")->check(CLI::PositiveNumber);
  s->callback([&] { action = [&](Reporter&) { return cmd_serve(serve, common, out); }; });

  std::vector<const char*> argv{"adlmine"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  Reporter reporter(err);
  try {
    return action(reporter);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace adlmine::cli
