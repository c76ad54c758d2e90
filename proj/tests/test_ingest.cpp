#include <doctest.h>
#include <zlib.h>

#include <fstream>
#include <random>
#include <sstream>

#include "adlmine/ingest.hpp"
#include "fixtures.hpp"

using namespace adlmine;
using namespace adlmine::testing;

namespace {

const char* kCsv =
    "timestamp,participant_id,sensor_id,kind,channel,value\n"
    "2022-03-01T08:00:00Z,P1,Fridge,Contact,,1\n"
    "2022-03-01T08:00:30Z,P1,Fridge,Contact,,0\n"
    "2022-03-01T08:01:00Z,P1,Kettle,SmartPlug,,1850.5\n"
    "2022-03-01T08:02:00Z,P1,Bathroom,MultiEnvironment,humidity,61.2\n"
    "not-a-time,P1,Fridge,Contact,,1\n"
    "2022-03-01T08:03:00Z,P1,Fridge,Contact,,abc\n"
    "2022-03-01T08:04:00Z,P1,Fridge,Contact,,7\n"
    "2022-03-01T08:05:00Z,P1,Fridge,Contact\n";

}  // namespace

TEST_CASE("CSV parsing keeps good rows and reports bad ones by line") {
  std::istringstream in(kCsv);
  const auto r = parse_events(in, Format::Csv);
  REQUIRE(r.events.size() == 4);
  CHECK(r.events[2].value == 1850.5);
  CHECK(r.events[3].channel == Channel::Humidity);
  REQUIRE(r.diagnostics.size() == 4);
  CHECK(r.diagnostics[0].line == 6);
  CHECK(r.diagnostics[1].line == 7);
  CHECK(r.diagnostics[1].message.find("abc") != std::string::npos);
  CHECK(r.diagnostics[2].line == 8);
  CHECK(r.diagnostics[3].line == 9);
  CHECK_FALSE(has_errors(r.diagnostics));
}

TEST_CASE("CSV and JSONL writers round-trip") {
  std::istringstream in(kCsv);
  const auto events = parse_events(in, Format::Csv).events;
  std::ostringstream csv, jsonl;
  write_events_csv(csv, events);
  write_events_jsonl(jsonl, events);
  std::istringstream csv_in(csv.str()), jsonl_in(jsonl.str());
  CHECK(parse_events(csv_in, Format::Csv).events == events);
  CHECK(parse_events(jsonl_in, Format::Jsonl).events == events);
}

TEST_CASE("gzip input is read by extension") {
  TempDir dir("gz");
  const auto path = (dir / "events.csv.gz").string();
  gzFile gz = gzopen(path.c_str(), "wb");
  REQUIRE(gz != nullptr);
  gzputs(gz, kCsv);
  gzclose(gz);
  const auto r = read_events_file(path);
  CHECK(r.events.size() == 4);
  CHECK_THROWS_AS(read_events_file(dir / "missing.csv"), IngestError);
  CHECK_THROWS_AS(read_events_file(dir / "events.txt"), IngestError);
}

TEST_CASE("build_log sorts, removes exact duplicates and rejects mixed homes") {
  std::vector<SensorEvent> evs{contact("Fridge", "2022-03-01T09:00:00Z"), motion("Hall", "2022-03-01T08:00:00Z"),
                               contact("Fridge", "2022-03-01T09:00:00Z")};
  const auto log = build_log(evs);
  CHECK(log.events.size() == 2);
  CHECK(log.first == at("2022-03-01T08:00:00Z"));
  CHECK(log.last == at("2022-03-01T09:00:00Z"));
  CHECK(log.sensor_inventory == std::set<std::string>{"Fridge", "Hall"});
  CHECK_THROWS_AS(build_log({}), IngestError);
  evs.push_back(contact("Fridge", "2022-03-01T10:00:00Z", 1.0, "P2"));
  CHECK_THROWS_AS(build_log(evs), IngestError);
}

TEST_CASE("between is half-open") {
  const auto log = build_log({motion("Hall", "2022-03-01T08:00:00Z"), motion("Hall", "2022-03-01T08:05:00Z"),
                              motion("Hall", "2022-03-01T08:10:00Z")});
  CHECK(log.between(at("2022-03-01T08:00:00Z"), at("2022-03-01T08:10:00Z")).size() == 2);
  CHECK(log.between(at("2022-03-01T08:00:00.001Z"), at("2022-03-01T08:10:00.001Z")).size() == 2);
  CHECK(log.between(at("2022-03-01T08:10:00Z"), at("2022-03-01T08:00:00Z")).empty());
  const auto s = log.slice(at("2022-03-01T08:05:00Z"), at("2022-03-01T09:00:00Z"));
  CHECK(s.events.size() == 2);
  CHECK(s.first == at("2022-03-01T08:05:00Z"));
}

TEST_CASE("logging days match a brute-force count of distinct local dates") {
  std::mt19937_64 rng(3);
  const auto tz = TimeZone::load("-05:00");
  for (int round = 0; round < 50; ++round) {
    std::vector<SensorEvent> evs;
    std::set<LocalDate> dates;
    const int n = std::uniform_int_distribution<int>(1, 60)(rng);
    for (int i = 0; i < n; ++i) {
      // 0 to 40 days from the start, any minute of the day
      const auto t = at("2022-03-01T00:00:00Z") + Minutes{std::uniform_int_distribution<int>(0, 40 * 1440)(rng)};
      evs.push_back(SensorEvent{"P1", "Hall", t, SensorKind::Motion, std::nullopt, 1.0});
      const auto local = std::chrono::floor<std::chrono::days>(t - std::chrono::hours{5});
      dates.insert(LocalDate{local});
    }
    const auto log = build_log(evs);
    CHECK(logging_days(log, tz) == static_cast<int>(dates.size()));
    CHECK(span_days(log, tz) >= logging_days(log, tz));
  }
  // One event each side of midnight: two logging days over a span under an hour.
  const auto log = build_log({motion("Hall", "2022-03-01T23:50:00Z"), motion("Hall", "2022-03-02T00:10:00Z")});
  CHECK(logging_days(log, TimeZone{}) == 2);
  CHECK(span_days(log, TimeZone{}) == 2);
}

TEST_CASE("annotation and ADL event files") {
  std::istringstream in(
      R"({"participant_id":"P1","adl":"Bathing","from":"2022-03-01T07:00:00Z","to":"2022-03-01T07:30:00Z","verdict":"Added"})"
      "\n\n"
      R"({"participant_id":"P1","adl":"Bathing","verdict":"Rejected","at":"2022-03-01T09:00:00Z"})"
      "\n"
      "{broken\n");
  const auto r = parse_annotations(in);
  CHECK(r.annotations.size() == 1);
  CHECK(r.diagnostics.size() == 2);  // Rejected without candidate, broken JSON
  std::ostringstream out;
  write_annotations_jsonl(out, r.annotations);
  std::istringstream back(out.str());
  CHECK(parse_annotations(back).annotations == r.annotations);

  AdlEvent e;
  e.participant_id = "P1";
  e.adl = AdlKind::Dressing;
  e.start = at("2022-03-01T07:40:00Z");
  e.end = at("2022-03-01T07:48:00Z");
  e.contributing_items = {"Wardrobe"};
  e.rule_ids = {"00000000000000aa"};
  e.candidate_id = candidate_id(e.participant_id, e.adl, e.start, e.end);
  std::ostringstream eo;
  write_adl_events_jsonl(eo, std::vector{e});
  std::istringstream ei(eo.str());
  CHECK(parse_adl_events(ei) == std::vector{e});
}
