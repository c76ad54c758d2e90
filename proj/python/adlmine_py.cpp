#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "adlmine/eval.hpp"
#include "adlmine/pipeline.hpp"
#include "adlmine/synth.hpp"
#include "adlmine/timeline.hpp"

namespace py = pybind11;
using namespace adlmine;

namespace {

EventLog log_from_text(const std::string& text, const std::string& format) {
  std::istringstream in(text);
  auto parsed = parse_events(in, parse_format(format));
  return build_log(std::move(parsed.events));
}

SensorMap map_for(const EventLog& log, const std::optional<std::string>& map_json) {
  if (!map_json) return SensorMap::implicit(log.participant_id, log.sensor_keys());
  auto map = json::parse(*map_json).get<SensorMap>();
  map.validate();
  return map;
}

MiningParams params_from(const std::optional<std::string>& params_json) {
  MiningParams p;
  if (params_json) p = json::parse(*params_json).get<MiningParams>();
  p.validate();
  return p;
}

std::vector<AdlEvent> adl_events_from(const std::string& text) {
  std::istringstream in(text);
  return parse_adl_events(in);
}

std::string adl_events_text(std::span<const AdlEvent> events) {
  std::ostringstream out;
  write_adl_events_jsonl(out, events);
  return out.str();
}

}  // namespace

PYBIND11_MODULE(_adlmine, m) {
  m.doc() = "ADL rule mining and detection over home sensor logs";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<IngestError>(m, "IngestError", PyExc_ValueError);
  py::register_exception<MiningError>(m, "MiningError", PyExc_RuntimeError);
  py::register_exception<ScriptError>(m, "ScriptError", PyExc_ValueError);
  py::register_exception<EvalError>(m, "EvalError", PyExc_ValueError);
  py::register_exception<TimeError>(m, "TimeError", PyExc_ValueError);

  m.def("default_params", [] { return json(MiningParams{}).dump(); });

  m.def(
      "frequent_itemsets",
      [](const std::vector<std::vector<std::string>>& transactions, double min_support, unsigned jobs) {
        std::vector<ItemSet> txs;
        for (const auto& t : transactions) txs.emplace_back(t.begin(), t.end());
        py::gil_scoped_release release;
        const auto fi = frequent_itemsets(txs, min_support, AprioriOptions{jobs});
        std::vector<std::pair<std::vector<std::string>, std::size_t>> out;
        for (const auto& s : fi.itemsets) out.emplace_back(s.items, s.count);
        return out;
      },
      py::arg("transactions"), py::arg("min_support"), py::arg("jobs") = 1);

  m.def(
      "synth",
      [](const std::string& script_json, int days) {
        const auto script = json::parse(script_json).get<RoutineScript>();
        auto o = generate(script, days);
        std::ostringstream events;
        write_events_csv(events, o.log.events);
        return py::dict(py::arg("events_csv") = events.str(), py::arg("truth_jsonl") = adl_events_text(o.truth),
                        py::arg("sensor_map_json") = json(o.map).dump());
      },
      py::arg("script_json"), py::arg("days"));

  m.def(
      "mine",
      [](const std::string& events, const std::string& annotations_jsonl, std::optional<std::string> params_json,
         std::optional<std::string> sensor_map_json, const std::string& format, const std::string& tz) {
        const auto log = log_from_text(events, format);
        std::istringstream in(annotations_jsonl);
        const auto anns = parse_annotations(in);
        const auto result = mine_participant(log, map_for(log, sensor_map_json), anns.annotations,
                                             params_from(params_json), TimeZone::load(tz));
        if (has_errors(result.diagnostics)) {
          std::string msg;
          for (const auto& d : result.diagnostics)
            if (d.severity == Severity::Error) msg += d.message + "\n";
          throw MiningError(msg);
        }
        return ruleset_text(result.rules);
      },
      py::arg("events"), py::arg("annotations_jsonl"), py::arg("params_json") = py::none(),
      py::arg("sensor_map_json") = py::none(), py::arg("format") = "csv", py::arg("tz") = "UTC");

  m.def(
      "detect",
      [](const std::string& events, const std::string& ruleset_json, std::optional<std::string> sensor_map_json,
         const std::string& format, const std::string& tz) {
        const auto log = log_from_text(events, format);
        const auto rules = ruleset_from_json(json::parse(ruleset_json));
        const auto tl = detect_all(log, map_for(log, sensor_map_json), rules, rules.params, TimeZone::load(tz));
        return adl_events_text(tl.all());
      },
      py::arg("events"), py::arg("ruleset_json"), py::arg("sensor_map_json") = py::none(), py::arg("format") = "csv",
      py::arg("tz") = "UTC");

  m.def(
      "timeline",
      [](const std::string& events, std::optional<std::string> ruleset_json, std::optional<std::string> sensor_map_json,
         int bucket_minutes, const std::string& format, const std::string& tz) {
        const auto log = log_from_text(events, format);
        std::optional<RuleSet> rules;
        if (ruleset_json) rules = ruleset_from_json(json::parse(*ruleset_json));
        const auto doc = build_timeline(log, map_for(log, sensor_map_json), rules ? &*rules : nullptr,
                                        TimeZone::load(tz), log.first, log.last + Millis{1}, Minutes{bucket_minutes});
        return timeline_to_json(doc).dump();
      },
      py::arg("events"), py::arg("ruleset_json") = py::none(), py::arg("sensor_map_json") = py::none(),
      py::arg("bucket_minutes") = 60, py::arg("format") = "csv", py::arg("tz") = "UTC");

  m.def(
      "match_events",
      [](const std::string& detected_jsonl, const std::string& truth_jsonl, const std::string& adl,
         int tolerance_minutes, const std::string& strategy) {
        const auto det = adl_events_from(detected_jsonl);
        const auto tru = adl_events_from(truth_jsonl);
        const auto r = match_events(det, tru, parse_adl(adl), Minutes{tolerance_minutes}, parse_match_strategy(strategy));
        return py::make_tuple(r.counts.tp, r.counts.fp, r.counts.fn);
      },
      py::arg("detected_jsonl"), py::arg("truth_jsonl"), py::arg("adl"), py::arg("tolerance_minutes"),
      py::arg("strategy") = "greedy");

  m.def(
      "prf",
      [](std::size_t tp, std::size_t fp, std::size_t fn) {
        const auto r = prf({tp, fp, fn});
        return py::make_tuple(r.precision, r.recall, r.f1);
      },
      py::arg("tp"), py::arg("fp"), py::arg("fn"));

  m.def(
      "proportions",
      [](const std::map<std::string, std::size_t>& counts) {
        AdlCounts c;
        for (const auto& [k, v] : counts) c[parse_adl(k)] = v;
        std::map<std::string, double> out;
        for (const auto& [k, v] : proportions(c)) out[std::string(to_string(k))] = v;
        return out;
      },
      py::arg("counts"));

  m.def(
      "counts_per_day",
      [](const std::map<std::string, std::size_t>& counts, double days) {
        AdlCounts c;
        for (const auto& [k, v] : counts) c[parse_adl(k)] = v;
        std::map<std::string, double> out;
        for (const auto& [k, v] : counts_per_day(c, days)) out[std::string(to_string(k))] = v;
        return out;
      },
      py::arg("counts"), py::arg("days"));
}
