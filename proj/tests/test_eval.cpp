#include <doctest.h>

#include <functional>
#include <random>
#include <set>

#include "adlmine/eval.hpp"
#include "adlmine/ruleset.hpp"
#include "fixtures.hpp"

using namespace adlmine;
using namespace adlmine::testing;

namespace {

AdlEvent ev(AdlKind adl, Instant start, Instant end, ItemSet items = {}) {
  AdlEvent e;
  e.participant_id = "P1";
  e.adl = adl;
  e.start = start;
  e.end = end;
  e.contributing_items = std::move(items);
  e.candidate_id = candidate_id("P1", adl, start, end);
  return e;
}

AdlEvent ev(const char* start, const char* end, AdlKind adl = AdlKind::Bathing) { return ev(adl, at(start), at(end)); }

// Disjoint events at random minute offsets within a day.
std::vector<AdlEvent> random_events(std::mt19937_64& rng, AdlKind adl) {
  std::vector<AdlEvent> out;
  auto t = at("2022-03-01T00:00:00Z");
  const int n = std::uniform_int_distribution<int>(0, 8)(rng);
  for (int i = 0; i < n; ++i) {
    t += Minutes{std::uniform_int_distribution<int>(1, 150)(rng)};
    const auto end = t + Minutes{std::uniform_int_distribution<int>(0, 40)(rng)};
    out.push_back(ev(adl, t, end));
    t = end;
  }
  std::shuffle(out.begin(), out.end(), rng);
  return out;
}

bool oracle_match(const AdlEvent& a, const AdlEvent& b, Minutes tol) {
  if (a.start <= b.end && b.start <= a.end) return true;
  const double ma = (a.start.time_since_epoch().count() + a.end.time_since_epoch().count()) / 2.0;
  const double mb = (b.start.time_since_epoch().count() + b.end.time_since_epoch().count()) / 2.0;
  return std::abs(ma - mb) <= double(Millis{tol}.count());
}

}  // namespace

TEST_CASE("precision, recall and F1") {
  const auto s = prf({9, 1, 3});
  CHECK(s.precision == doctest::Approx(0.9));
  CHECK(s.recall == doctest::Approx(0.75));
  CHECK(s.f1 == doctest::Approx(2 * 0.9 * 0.75 / 1.65));
  const auto empty = prf({0, 0, 0});
  CHECK(empty.precision == 1.0);
  CHECK(empty.recall == 1.0);
  CHECK(empty.f1 == 1.0);
  const auto miss = prf({0, 2, 3});
  CHECK(miss.precision == 0.0);
  CHECK(miss.recall == 0.0);
  CHECK(miss.f1 == 0.0);
  CHECK(prf({0, 0, 4}).precision == 1.0);
  CHECK(prf({0, 4, 0}).recall == 1.0);
}

TEST_CASE("match tolerance is inclusive at the midpoint gap") {
  const auto truth = ev("2022-03-01T07:00:00Z", "2022-03-01T07:20:00Z");  // midpoint 07:10
  CHECK(events_match(ev("2022-03-01T07:20:00Z", "2022-03-01T07:30:00Z"), truth, Minutes{0}));  // touching
  CHECK(events_match(ev("2022-03-01T08:05:00Z", "2022-03-01T08:15:00Z"), truth, Minutes{60}));  // gap 60
  CHECK_FALSE(events_match(ev(AdlKind::Bathing, at("2022-03-01T08:05:00.002Z"), at("2022-03-01T08:15:00Z")), truth,
                           Minutes{60}));  // gap 60 min + 1 ms
  CHECK_FALSE(events_match(ev("2022-03-01T09:00:00Z", "2022-03-01T09:00:00Z"), truth, Minutes{60}));
}

TEST_CASE("greedy matching agrees with a direct oracle") {
  std::mt19937_64 rng(8);
  for (int round = 0; round < 1000; ++round) {
    auto det = random_events(rng, AdlKind::Bathing);
    auto truth = random_events(rng, AdlKind::Bathing);
    // noise of another ADL must be ignored
    det.push_back(ev(AdlKind::Dressing, at("2022-03-01T05:00:00Z"), at("2022-03-01T05:05:00Z")));
    const Minutes tol{std::vector<int>{0, 30, 60}[round % 3]};
    const auto r = match_events(det, truth, AdlKind::Bathing, tol);

    std::vector<std::size_t> d_order, t_order;
    for (std::size_t i = 0; i < det.size(); ++i)
      if (det[i].adl == AdlKind::Bathing) d_order.push_back(i);
    for (std::size_t i = 0; i < truth.size(); ++i) t_order.push_back(i);
    std::sort(d_order.begin(), d_order.end(), [&](auto a, auto b) { return det[a].start < det[b].start; });
    std::sort(t_order.begin(), t_order.end(), [&](auto a, auto b) { return truth[a].start < truth[b].start; });
    std::vector<bool> used(truth.size());
    std::size_t tp = 0;
    for (auto d : d_order)
      for (auto t : t_order)
        if (!used[t] && oracle_match(det[d], truth[t], tol)) {
          used[t] = true;
          ++tp;
          break;
        }
    CHECK(r.counts.tp == tp);
    CHECK(r.counts.fp == d_order.size() - tp);
    CHECK(r.counts.fn == truth.size() - tp);
    CHECK(r.pairs.size() == tp);
    for (const auto& p : r.pairs) CHECK(oracle_match(det[p.detected], truth[p.truth], tol));
  }
}

TEST_CASE("maximum matching agrees with exhaustive search") {
  std::mt19937_64 rng(13);
  std::size_t greedy_total = 0, max_total = 0;
  for (int round = 0; round < 600; ++round) {
    const auto det = random_events(rng, AdlKind::Bathing);
    const auto truth = random_events(rng, AdlKind::Bathing);
    const Minutes tol{std::vector<int>{0, 60, 180}[round % 3]};
    // largest pairing by trying every assignment
    std::vector<bool> used(truth.size());
    std::function<std::size_t(std::size_t)> best = [&](std::size_t i) -> std::size_t {
      if (i == det.size()) return 0;
      std::size_t b = best(i + 1);
      for (std::size_t k = 0; k < truth.size(); ++k) {
        if (used[k] || !oracle_match(det[i], truth[k], tol)) continue;
        used[k] = true;
        b = std::max(b, 1 + best(i + 1));
        used[k] = false;
      }
      return b;
    };
    const auto m = match_events(det, truth, AdlKind::Bathing, tol, MatchStrategy::Maximum);
    const auto g = match_events(det, truth, AdlKind::Bathing, tol, MatchStrategy::Greedy);
    CHECK(m.counts.tp == best(0));
    CHECK(m.counts.fp + m.counts.tp == det.size());
    CHECK(m.counts.fn + m.counts.tp == truth.size());
    std::set<std::size_t> seen_d, seen_t;
    for (const auto& p : m.pairs) {
      CHECK(oracle_match(det[p.detected], truth[p.truth], tol));
      CHECK(seen_d.insert(p.detected).second);
      CHECK(seen_t.insert(p.truth).second);
    }
    CHECK(g.counts.tp <= m.counts.tp);
    greedy_total += g.counts.tp;
    max_total += m.counts.tp;
  }
  CHECK(max_total >= greedy_total);
  CHECK(parse_match_strategy("maximum") == MatchStrategy::Maximum);
  CHECK(to_string(MatchStrategy::Greedy) == "greedy");
  CHECK_THROWS_AS(parse_match_strategy("hungarian"), EvalError);
}

TEST_CASE("matching refuses overlapping inputs") {
  const std::vector<AdlEvent> overlapping{ev("2022-03-01T07:00:00Z", "2022-03-01T07:30:00Z"),
                                          ev("2022-03-01T07:20:00Z", "2022-03-01T07:40:00Z")};
  const std::vector<AdlEvent> one{ev("2022-03-01T07:00:00Z", "2022-03-01T07:30:00Z")};
  CHECK_THROWS_AS(match_events(overlapping, one, AdlKind::Bathing, Minutes{60}), EvalError);
  CHECK_THROWS_AS(match_events(one, overlapping, AdlKind::Bathing, Minutes{60}), EvalError);
  CHECK_NOTHROW(match_events(overlapping, one, AdlKind::Dressing, Minutes{60}));
  // the params overload uses the ADL's window size
  const std::vector<AdlEvent> later{ev("2022-03-01T08:05:00Z", "2022-03-01T08:15:00Z")};
  CHECK(match_events(later, one, AdlKind::Bathing, MiningParams{}).counts.tp == 1);
  CHECK(match_events(later, one, AdlKind::Bathing, Minutes{30}).counts.tp == 0);
}

TEST_CASE("counts, rates and shares") {
  const std::vector<AdlEvent> evs{ev("2022-03-01T07:00:00Z", "2022-03-01T07:10:00Z"),
                                  ev("2022-03-02T07:00:00Z", "2022-03-02T07:10:00Z"),
                                  ev("2022-03-01T12:00:00Z", "2022-03-01T12:10:00Z", AdlKind::EatingDrinking)};
  const auto c = count_events(evs);
  CHECK(c.size() == 4);
  CHECK(c.at(AdlKind::Bathing) == 2);
  CHECK(c.at(AdlKind::LeavingHouse) == 0);
  const auto per = counts_per_day(c, 4.0);
  CHECK(per.at(AdlKind::Bathing) == 0.5);
  CHECK(per.at(AdlKind::EatingDrinking) == 0.25);
  CHECK_THROWS_AS(counts_per_day(c, 0.5), EvalError);
  const auto shares = proportions(c);
  CHECK(shares.at(AdlKind::Bathing) == doctest::Approx(2.0 / 3.0));
  CHECK(shares.at(AdlKind::Dressing) == 0.0);
  CHECK_THROWS_AS(proportions(count_events({})), EvalError);
}

TEST_CASE("sensor importance ordering") {
  RuleSet rs;
  Rule a;
  a.adl = AdlKind::EatingDrinking;
  a.antecedent = {"Fridge", "Kettle"};
  a.id = rule_id(a.adl, a.antecedent);
  Rule b = a;
  b.antecedent = {"Fridge"};
  b.id = rule_id(b.adl, b.antecedent);
  Rule c = a;
  c.antecedent = {"Toaster"};
  c.id = rule_id(c.adl, c.antecedent);
  rs.groups[AdlKind::EatingDrinking] = {a, b, c};
  const std::vector<AdlEvent> det{
      ev(AdlKind::EatingDrinking, at("2022-03-01T08:00:00Z"), at("2022-03-01T08:05:00Z"), {"Kettle"}),
      ev(AdlKind::EatingDrinking, at("2022-03-01T12:00:00Z"), at("2022-03-01T12:05:00Z"), {"Kettle", "Fridge"}),
      ev(AdlKind::Bathing, at("2022-03-01T07:00:00Z"), at("2022-03-01T07:05:00Z"), {"BathroomHumidity"})};
  const auto ranks = sensor_importance(rs, det);
  REQUIRE(ranks.size() == 4);
  CHECK(ranks[0] == SensorRank{"Kettle", 1, 2});
  CHECK(ranks[1] == SensorRank{"Fridge", 2, 1});
  CHECK(ranks[2] == SensorRank{"BathroomHumidity", 0, 1});
  CHECK(ranks[3] == SensorRank{"Toaster", 1, 0});
}

TEST_CASE("reports, metrics JSON and CSV tables") {
  const std::vector<AdlEvent> det{ev("2022-03-01T07:00:00Z", "2022-03-01T07:10:00Z")};
  const std::vector<AdlEvent> truth{ev("2022-03-01T07:05:00Z", "2022-03-01T07:20:00Z"),
                                    ev("2022-03-02T07:05:00Z", "2022-03-02T07:20:00Z")};
  const auto with = evaluate_participant("P1", det, std::span<const AdlEvent>(truth), 2.0, MiningParams{});
  REQUIRE(with.matches.has_value());
  CHECK(with.matches->at(AdlKind::Bathing) == MatchCounts{1, 0, 1});
  CHECK(with.shares.has_value());
  const auto without = evaluate_participant("P2", {}, std::nullopt, 2.0, MiningParams{});
  CHECK_FALSE(without.matches.has_value());
  CHECK_FALSE(without.shares.has_value());

  const std::vector<ParticipantReport> reports{with, without};
  const auto j = metrics_json(reports, {});
  CHECK(j.at("schema") == "adlmine.metrics/1");
  CHECK(j.at("participants").size() == 2);
  CHECK(j.at("participants")[1].at("proportions").is_null());
  CHECK(j.at("overall").at("Bathing").at("recall") == 0.5);
  CHECK(j.at("sensor_importance").empty());

  CHECK(per_day_csv(reports) ==
        "participant_id,EatingDrinking,Dressing,Bathing,LeavingHouse\n"
        "P1,0,0,0.5,0\n"
        "P2,0,0,0,0\n");
  CHECK(proportions_csv(reports) ==
        "participant_id,EatingDrinking,Dressing,Bathing,LeavingHouse\n"
        "P1,0,0,1,0\n"
        "P2,,,,\n");
}
