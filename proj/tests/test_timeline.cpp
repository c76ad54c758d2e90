#include <doctest.h>

#include "adlmine/timeline.hpp"
#include "corpus.hpp"
#include "fixtures.hpp"

using namespace adlmine;
using namespace adlmine::testing;

TEST_CASE("timeline lanes and buckets against a direct count") {
  const auto g = generate(recovery_scripts()[0], 3);
  const auto from = at("2022-03-01T06:30:00Z");  // deliberately off the hour
  const auto to = at("2022-03-02T06:30:00Z");
  const auto doc = build_timeline(g.log, g.map, nullptr, TimeZone{}, from, to, Minutes{60});
  CHECK(doc.participant_id == g.log.participant_id);
  CHECK(doc.candidates.empty());
  CHECK_FALSE(doc.ruleset_id.has_value());
  REQUIRE(doc.lanes.size() == g.log.sensor_inventory.size());

  std::size_t total = 0;
  for (const auto& lane : doc.lanes) {
    CHECK(g.log.sensor_inventory.count(lane.sensor_id) == 1);
    for (const auto& s : lane.series) {
      if (s.channel) CHECK(lane.category == SensorCategory::Environmental);
      CHECK(s.role == g.map.canonical_role(lane.sensor_id, s.channel).role);
      for (const auto& b : s.buckets) {
        CHECK((b.start - from) % Minutes{60} == Millis{0});
        std::size_t n = 0;
        double mx = -1e300;
        for (const auto& e : g.log.events)
          if (e.sensor_id == lane.sensor_id && e.channel == s.channel && e.timestamp >= b.start &&
              e.timestamp < b.start + Minutes{60} && e.timestamp < to) {
            ++n;
            mx = std::max(mx, e.value);
          }
        CHECK(b.count == n);
        CHECK(b.max == mx);
        CHECK(b.count > 0);
        total += b.count;
      }
    }
  }
  CHECK(total == g.log.between(from, to).size());
}

TEST_CASE("silent sensors still get a lane") {
  const auto log = build_log({contact("Fridge", "2022-03-01T08:00:00Z"), motion("HallMotion", "2022-03-03T08:00:00Z")});
  const auto map = SensorMap::implicit("P1", log.sensor_keys());
  const auto doc = build_timeline(log, map, nullptr, TimeZone{}, at("2022-03-01T00:00:00Z"), at("2022-03-02T00:00:00Z"));
  REQUIRE(doc.lanes.size() == 2);
  CHECK(doc.lanes[1].sensor_id == "HallMotion");
  CHECK(doc.lanes[1].category == SensorCategory::Motion);
  REQUIRE(doc.lanes[1].series.size() == 1);
  CHECK(doc.lanes[1].series[0].buckets.empty());
  CHECK_THROWS_AS(build_timeline(log, map, nullptr, TimeZone{}, at("2022-03-02T00:00:00Z"), at("2022-03-02T00:00:00Z")),
                  DomainError);
}

TEST_CASE("candidates resolve against the rule set") {
  const auto g = generate(recovery_scripts()[0], 6);
  const auto cutoff = at("2022-03-05T00:00:00Z");
  RuleSet rs;
  Rule r;
  r.adl = AdlKind::Bathing;
  r.antecedent = {"BathroomHumidity"};
  r.confidence = 1.0;
  r.id = rule_id(r.adl, r.antecedent);
  rs.groups[AdlKind::Bathing] = {r};
  const auto doc = build_timeline(g.log, g.map, &rs, TimeZone{}, cutoff, cutoff + std::chrono::days{1});
  CHECK(doc.ruleset_id == rs.id());
  CHECK(doc.ruleset_content_hash == rs.content_hash());
  REQUIRE_FALSE(doc.candidates.empty());
  for (const auto& c : doc.candidates) {
    for (const auto& id : c.rule_ids) CHECK(rs.find_rule(id) != nullptr);
    CHECK(c.start >= cutoff);
  }

  const auto j = timeline_to_json(doc);
  CHECK(j.at("schema") == "adlmine.timeline/1");
  CHECK(j.at("bucket_minutes") == 60);
  CHECK(j.at("lanes").size() == doc.lanes.size());
  CHECK(j.at("candidates").size() == doc.candidates.size());
  CHECK(j.at("candidates")[0].at("candidate_id") == doc.candidates[0].candidate_id);
  CHECK(j.at("lanes")[0].contains("category"));
}
