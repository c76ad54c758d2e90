#include <doctest.h>

#include "adlmine/detect.hpp"
#include "fixtures.hpp"

using namespace adlmine;
using namespace adlmine::testing;

namespace {

Rule make_rule(AdlKind adl, ItemSet items) {
  Rule r;
  r.adl = adl;
  r.antecedent = std::move(items);
  r.confidence = 1.0;
  r.support = 0.5;
  r.id = rule_id(adl, r.antecedent);
  return r;
}

SensorMap home() {
  return SensorMap::implicit("P1", {{"Fridge", std::nullopt},
                                    {"Kettle", std::nullopt},
                                    {"Wardrobe", std::nullopt},
                                    {"FrontDoor", std::nullopt},
                                    {"HallMotion", std::nullopt},
                                    {"Bathroom", Channel::Humidity},
                                    {"Bathroom", Channel::Motion}});
}

RuleSet rules() {
  RuleSet rs;
  rs.groups[AdlKind::EatingDrinking] = {make_rule(AdlKind::EatingDrinking, {"Fridge", "Kettle"})};
  rs.groups[AdlKind::Dressing] = {make_rule(AdlKind::Dressing, {"Wardrobe"})};
  rs.groups[AdlKind::Bathing] = {make_rule(AdlKind::Bathing, {"BathroomHumidity"})};
  rs.groups[AdlKind::LeavingHouse] = {make_rule(AdlKind::LeavingHouse, {"FrontDoor"})};
  return rs;
}

PositiveWindow pw(const char* start, int minutes, const char* first, const char* last, const char* rid = "r1") {
  PositiveWindow p{Window{"P1", at(start), Minutes{minutes}}, {rid}, {}};
  p.evidence["Fridge"] = ItemEvidence{at(first), at(last)};
  return p;
}

}  // namespace

TEST_CASE("conjunctive antecedents need every item in the window") {
  const auto only_fridge = build_log({contact("Fridge", "2022-03-01T12:10:00Z")});
  CHECK(detect_adl(only_fridge, home(), rules(), AdlKind::EatingDrinking, MiningParams{}, TimeZone{})
            .positives.empty());

  const auto meal = build_log({contact("Fridge", "2022-03-01T12:10:00Z"), plug("Kettle", "2022-03-01T12:20:00Z", 1500)});
  const auto det = detect_adl(meal, home(), rules(), AdlKind::EatingDrinking, MiningParams{}, TimeZone{});
  REQUIRE_FALSE(det.positives.empty());
  // grid ticks from 11:20 to 12:10 contain both; the log ends at 12:20 so the range stops there
  for (const auto& p : det.positives) {
    CHECK(p.window.start <= at("2022-03-01T12:10:00Z"));
    CHECK(p.window.end() > at("2022-03-01T12:20:00Z"));
  }
  const auto events = merge_candidates(det.positives, AdlKind::EatingDrinking, "P1");
  REQUIRE(events.size() == 1);
  CHECK(events[0].start == at("2022-03-01T12:10:00Z"));
  CHECK(events[0].end == at("2022-03-01T12:20:00Z"));
  CHECK(events[0].contributing_items == ItemSet{"Fridge", "Kettle"});
  CHECK(events[0].candidate_id == candidate_id("P1", AdlKind::EatingDrinking, events[0].start, events[0].end));
}

TEST_CASE("missing rule group is a warning, empty range detects nothing") {
  RuleSet rs = rules();
  rs.groups.erase(AdlKind::Dressing);
  const auto log = build_log({contact("Wardrobe", "2022-03-01T07:00:00Z")});
  const auto det = detect_adl(log, home(), rs, AdlKind::Dressing, MiningParams{}, TimeZone{});
  CHECK(det.positives.empty());
  CHECK(det.diagnostics.size() == 1);
  const auto empty = detect_adl(log, home(), rules(), AdlKind::Dressing, MiningParams{}, TimeZone{},
                                Interval{at("2022-03-02T00:00:00Z"), at("2022-03-02T00:00:00Z")});
  CHECK(empty.positives.empty());
}

TEST_CASE("merging chains touching windows and keeps gaps apart") {
  const std::vector<PositiveWindow> ws{
      pw("2022-03-01T08:00:00Z", 30, "2022-03-01T08:10:00Z", "2022-03-01T08:12:00Z"),
      pw("2022-03-01T08:30:00Z", 30, "2022-03-01T08:35:00Z", "2022-03-01T08:40:00Z", "r2"),  // touches
      pw("2022-03-01T09:01:00Z", 30, "2022-03-01T09:05:00Z", "2022-03-01T09:06:00Z"),        // 1 min gap
  };
  const auto evs = merge_candidates(ws, AdlKind::EatingDrinking, "P1");
  REQUIRE(evs.size() == 2);
  CHECK(evs[0].start == at("2022-03-01T08:10:00Z"));
  CHECK(evs[0].end == at("2022-03-01T08:40:00Z"));
  CHECK(evs[0].rule_ids == std::set<std::string>{"r1", "r2"});
  CHECK(evs[1].start == at("2022-03-01T09:05:00Z"));
  CHECK(evs[1].end == at("2022-03-01T09:06:00Z"));
  // input order does not matter
  const std::vector<PositiveWindow> rev(ws.rbegin(), ws.rend());
  CHECK(merge_candidates(rev, AdlKind::EatingDrinking, "P1") == evs);
  CHECK(merge_candidates({}, AdlKind::EatingDrinking, "P1").empty());
}

TEST_CASE("ADLs are detected independently") {
  // bath then dressing straight after: both survive
  const auto log = build_log({
      multi("Bathroom", Channel::Humidity, "2022-03-01T07:00:00Z", 55),
      multi("Bathroom", Channel::Humidity, "2022-03-01T07:15:00Z", 70),
      multi("Bathroom", Channel::Humidity, "2022-03-01T07:30:00Z", 62),
      contact("Wardrobe", "2022-03-01T07:35:00Z"),
      contact("Wardrobe", "2022-03-01T07:36:00Z", 0.0),
  });
  const auto t = detect_all(log, home(), rules(), MiningParams{}, TimeZone{});
  CHECK(t.events.at(AdlKind::Bathing).size() == 1);
  CHECK(t.events.at(AdlKind::Dressing).size() == 1);
  CHECK(t.events.at(AdlKind::EatingDrinking).empty());
  CHECK(t.all().size() == 2);
  CHECK(t.all()[0].adl == AdlKind::Dressing);  // Dressing precedes Bathing in ADL order
  CHECK(t.events.at(AdlKind::Bathing)[0].start == at("2022-03-01T07:00:00Z"));
  CHECK(t.events.at(AdlKind::Bathing)[0].end == at("2022-03-01T07:15:00Z"));
}

TEST_CASE("a caller at the door is not a departure") {
  const auto caller = build_log({
      motion("HallMotion", "2022-03-01T10:58:00Z"),
      contact("FrontDoor", "2022-03-01T11:00:00Z"),
      contact("FrontDoor", "2022-03-01T11:00:30Z", 0.0),
      motion("HallMotion", "2022-03-01T11:05:00Z"),
  });
  CHECK(detect_all(caller, home(), rules(), MiningParams{}, TimeZone{}).events.at(AdlKind::LeavingHouse).empty());
  CHECK(adl_transactions(caller, home(), AdlKind::LeavingHouse, MiningParams{}, TimeZone{}, caller.first,
                         caller.last + Minutes{1})
            .empty());

  const auto departure = build_log({
      motion("HallMotion", "2022-03-01T10:58:00Z"),
      contact("FrontDoor", "2022-03-01T11:00:00Z"),
      contact("FrontDoor", "2022-03-01T11:00:30Z", 0.0),
      motion("HallMotion", "2022-03-01T11:16:00Z"),  // after the quiet period
  });
  const auto left = detect_all(departure, home(), rules(), MiningParams{}, TimeZone{}).events.at(AdlKind::LeavingHouse);
  REQUIRE(left.size() == 1);
  CHECK(left[0].start == at("2022-03-01T11:00:00Z"));

  const WindowItems none;
  CHECK_FALSE(caller_pattern(departure, none, home(), MiningParams{}));
}

TEST_CASE("transactions are projected onto the ADL's roles") {
  const auto log = build_log({contact("Fridge", "2022-03-01T12:00:00Z"), motion("HallMotion", "2022-03-01T12:01:00Z"),
                              contact("Wardrobe", "2022-03-01T15:00:00Z")});
  const auto tx = adl_transactions(log, home(), AdlKind::EatingDrinking, MiningParams{}, TimeZone{},
                                   at("2022-03-01T00:00:00Z"), at("2022-03-02T00:00:00Z"));
  REQUIRE_FALSE(tx.empty());
  for (const auto& t : tx) CHECK(t.items == ItemSet{"Fridge"});
  // 60-minute windows on a 5-minute grid: twelve of them contain 12:00
  CHECK(tx.size() == 12);
}
