#include <doctest.h>

#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "wtt/pipeline.hpp"
#include "wtt/simulate.hpp"

using namespace wtt;

namespace {

ScenarioConfig demo() {
  ScenarioConfig c;
  c.horizon = 3780;
  c.passengers_per_train_mean = 80;
  c.seed = 1;
  return c;
}

PipelineConfig parse(const std::string& text) {
  std::istringstream in(text);
  return read_config(in);
}

}  // namespace

TEST_CASE("config files") {
  const PipelineConfig c = parse("# comment\ntau = 20\nmethod = baseline  # trailing\nexcluded_stations = 2, 5\n");
  CHECK(std::get<HardMetric>(c.metric()).tau == 20);
  CHECK(c.method == Method::Baseline);
  CHECK(c.excluded_stations == std::vector<int>{2, 5});

  std::ostringstream out;
  write_config(out, c);
  const PipelineConfig back = parse(out.str());
  std::ostringstream again;
  write_config(again, back);
  CHECK(out.str() == again.str());
  CHECK(config_hash(c) == config_hash(back));
  CHECK(config_hash(c) != config_hash(PipelineConfig{}));
  CHECK(config_hash(c).size() == 16);

  CHECK_THROWS_AS(parse("nope = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse("tau = fast\n"), ConfigError);
  CHECK_THROWS_AS(parse("k_min 3\n"), ConfigError);
  CHECK_THROWS_AS(parse("metric = fuzzy\n"), ConfigError);
  CHECK_THROWS_AS(parse("overlap = 600\n").validate(), ConfigError);
  CHECK_THROWS_AS(parse("tau = 0\n").validate(), ConfigError);
  CHECK_NOTHROW(PipelineConfig{}.validate());
}

TEST_CASE("windows overlap and cover the range") {
  const auto w = make_windows(0, 10000, 5400, 1800);
  REQUIRE(w.size() == 3);
  CHECK(w[1].begin == 3600);
  CHECK(w[2].end == 12600);
  CHECK(make_windows(0, 100, 5400, 1800).size() == 1);
  CHECK_THROWS_AS(make_windows(0, 1, 100, 100), ConfigError);
}

TEST_CASE("journey levels keep raw ids") {
  const std::vector<WifiRecord> recs{{"a", 1, 0},   {"a", 2, 130}, {"a", 3, 260}, {"a", 4, 390},
                                     {"b", 1, 500}, {"b", 2, 630}, {"c", 6, 10}};
  const auto lv = build_journey_levels(recs, {});
  CHECK(lv.raw.journeys.size() == 3);
  CHECK(lv.level2.ids == std::vector<int>{0, 1, 2});
  CHECK(lv.level3.ids == std::vector<int>{0});
  CHECK(lv.level3.journeys[0].legs.size() == 2);

  const auto ends = journey_endpoints(lv.level2);
  REQUIRE(ends.size() == 4);
  CHECK(ends[0].boarding);
  CHECK(ends[0].station == 1);
  CHECK(ends[1].station == 4);
  CHECK(ends[3].journey == 1);
}

TEST_CASE("spectral pipeline reconstructs the demo scenario") {
  const Scenario s = simulate(demo());
  PipelineConfig c;
  c.window = 9000;
  const auto lv = build_journey_levels(s.records, c.journey);
  const auto labels = cluster_journeys(lv.level3, c);

  std::set<int> distinct;
  for (const auto& r : labels)
    if (r.label >= 0) distinct.insert(r.label);
  CHECK(distinct.size() == s.truth.size());

  const auto out = build_timetable(labels, journey_endpoints(lv.level2), c);
  CHECK(out.trains.size() == s.truth.size());
  CHECK(out.kpis.size() == 2 * 16);
  for (const auto& k : out.kpis) CHECK((k.kind == "headway" || k.kind == "dwell"));

  const auto ev = window_spectrum(lv.level3, c, 0);
  CHECK(ev.size() >= 22);
  CHECK_THROWS_AS(window_spectrum(lv.level3, c, 5), DataError);
}

TEST_CASE("every journey carries one label per window") {
  ScenarioConfig sc = demo();
  sc.horizon = 7200;
  const Scenario s = simulate(sc);
  PipelineConfig c;
  const auto lv = build_journey_levels(s.records, c.journey);
  const auto labels = cluster_journeys(lv.level3, c);
  std::map<std::pair<int, int>, std::set<int>> labels_of;
  std::set<int> windows;
  for (const auto& r : labels) {
    windows.insert(r.window);
    labels_of[{r.window, r.journey}].insert(r.label);
  }
  CHECK(windows.size() >= 2);
  for (const auto& [key, set] : labels_of) CHECK(set.size() == 1);

  c.method = Method::Baseline;
  std::set<int> base_windows;
  for (const auto& r : cluster_journeys(lv.level2, c)) base_windows.insert(r.window);
  CHECK(base_windows == windows);
}

TEST_CASE("excluded stations are left out of clustering") {
  const Scenario s = simulate(demo());
  PipelineConfig c;
  c.window = 9000;
  c.excluded_stations = {6};
  const auto lv = build_journey_levels(s.records, c.journey);
  const auto labels = cluster_journeys(lv.level3, c);
  std::set<int> distinct;
  for (const auto& r : labels)
    if (r.label >= 0) distinct.insert(r.label);
  CHECK(distinct.size() == s.truth.size());
}

TEST_CASE("line length must cover every station") {
  JourneyFile f;
  f.journeys.push_back({"d", 1, {{3, 0, 0}, {9, 100, 100}}});
  PipelineConfig c;
  CHECK(line_length_of(f, c) == 10);
  c.line_length = 5;
  CHECK_THROWS_AS(line_length_of(f, c), DataError);
}

TEST_CASE("manifest records the config hash") {
  PipelineConfig c;
  c.seed = 4;
  std::ostringstream out;
  write_manifest(out, "cluster", c, std::vector<std::string>{"in.jsonl"}, std::vector<std::string>{"labels.csv"});
  const auto doc = nlohmann::json::parse(out.str());
  CHECK(doc["command"] == "cluster");
  CHECK(doc["config_hash"] == config_hash(c));
  CHECK(doc["seed"] == 4);
  CHECK(doc["outputs"][0] == "labels.csv");
}
