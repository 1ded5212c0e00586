#include <doctest.h>

#include <random>
#include <sstream>

#include "wtt/journey.hpp"

using namespace wtt;

namespace {

std::vector<ExtremityRecord> ex(std::initializer_list<Leg> items) {
  std::vector<ExtremityRecord> out;
  for (const auto& l : items) out.push_back({"d", l.station, l.first, l.last});
  return out;
}

Journey journey(std::initializer_list<Leg> legs, int direction = 1) { return {"d", direction, legs}; }

}  // namespace

TEST_CASE("a station stay longer than tau1 splits the journey") {
  const auto js = extract_journeys(ex({{4, 0, 0}, {4, 600, 600}}), {});
  REQUIRE(js.size() == 2);
  CHECK(js[0].legs.size() == 1);
  CHECK(js[1].legs[0].first == 600);
}

TEST_CASE("monotone stations within tau2 form one journey") {
  const auto js = extract_journeys(ex({{3, 0, 20}, {4, 130, 150}, {5, 260, 280}}), {});
  REQUIRE(js.size() == 1);
  CHECK(js[0].direction == 1);
  CHECK(js[0].legs == std::vector<Leg>{{3, 0, 20}, {4, 130, 150}, {5, 260, 280}});

  const auto down = extract_journeys(ex({{5, 0, 0}, {4, 100, 100}}), {});
  REQUIRE(down.size() == 1);
  CHECK(down[0].direction == -1);
}

TEST_CASE("a direction reversal splits greedily") {
  const auto js = extract_journeys(ex({{3, 0, 0}, {5, 100, 100}, {4, 200, 200}}), {});
  REQUIRE(js.size() == 2);
  CHECK(js[0].legs == std::vector<Leg>{{3, 0, 0}, {5, 100, 100}});
  CHECK(js[1].legs == std::vector<Leg>{{4, 200, 200}});
  CHECK(js[1].direction == 0);
}

TEST_CASE("journeys never span more than tau2") {
  const auto js = extract_journeys(ex({{1, 0, 0}, {2, 1000, 1000}, {3, 1900, 1900}}), {});
  REQUIRE(js.size() == 2);
  CHECK(js[1].start() == 1900);
}

TEST_CASE("extracted journeys satisfy the segmentation invariants") {
  std::mt19937_64 rng(11);
  const JourneyParams params;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<ExtremityRecord> items;
    Timestamp t = 0;
    const int n = 1 + static_cast<int>(rng() % 12);
    for (int i = 0; i < n; ++i) {
      t += static_cast<Timestamp>(rng() % 700);
      const Timestamp len = static_cast<Timestamp>(rng() % 400);
      items.push_back({"d", static_cast<int>(rng() % 6), t, t + len});
      t += len;
    }
    for (const auto& j : extract_journeys(items, params)) {
      REQUIRE(!j.legs.empty());
      CHECK(j.end() - j.start() <= params.tau2);
      for (std::size_t i = 0; i < j.legs.size(); ++i) {
        CHECK(j.legs[i].last - j.legs[i].first <= params.tau1);
        if (i > 0) CHECK((j.legs[i].station - j.legs[i - 1].station) * j.direction > 0);
      }
      if (j.legs.size() == 1) CHECK(j.direction == 0);
    }
  }
}

TEST_CASE("cleaning levels") {
  const Journey j = journey({{2, 100, 140}, {5, 300, 320}});
  CHECK(*apply_cleaning(j, CleaningLevel::Raw) == j);
  CHECK(apply_cleaning(j, CleaningLevel::TrimExtremes)->legs == std::vector<Leg>{{2, 140, 140}, {5, 300, 300}});
  CHECK_FALSE(apply_cleaning(j, CleaningLevel::DropEnds).has_value());

  const Journey three = journey({{2, 0, 1}, {3, 10, 11}, {5, 20, 21}});
  CHECK(apply_cleaning(three, CleaningLevel::DropEnds)->legs == std::vector<Leg>{{3, 10, 11}});
}

TEST_CASE("coverage ratio per boarding and alighting pair") {
  const std::vector<Journey> js{journey({{2, 0, 0}, {4, 1, 1}, {6, 2, 2}}),
                                journey({{0, 0, 0}, {1, 1, 1}, {2, 2, 2}, {3, 3, 3}})};
  const auto m = coverage_ratio_matrix(js, 8);
  CHECK(*m.at(2, 6) == doctest::Approx(0.6));
  CHECK(*m.at(0, 3) == doctest::Approx(1.0));
  for (int i = 0; i < 8; ++i)
    for (int d : {-1, 0, 1})
      if (i + d >= 0 && i + d < 8) CHECK_FALSE(m.at(i, i + d).has_value());
  CHECK_FALSE(m.at(1, 5).has_value());
  CHECK(*m.mean() == doctest::Approx(0.8));
}

TEST_CASE("journeys round trip through JSON lines") {
  const std::vector<Journey> js{journey({{1, 5, 9}, {2, 20, 20}}), journey({{7, 3, 3}}, 0)};
  std::ostringstream out;
  write_journeys(out, js, std::vector<int>{4, 9});
  std::istringstream in(out.str());
  const auto file = read_journeys(in);
  CHECK(file.journeys == js);
  CHECK(file.ids == std::vector<int>{4, 9});
}

TEST_CASE("journeys_from_records runs the whole chain") {
  const std::vector<WifiRecord> recs{{"a", 1, 0},   {"a", 1, 20},  {"a", 2, 140}, {"a", 3, 260},
                                     {"b", 5, 100}, {"b", 4, 220}, {"a", 3, 300}};
  const auto js = journeys_from_records(recs, {});
  REQUIRE(js.size() == 2);
  CHECK(js[0].device == "a");
  CHECK(js[0].legs == std::vector<Leg>{{1, 0, 20}, {2, 140, 140}, {3, 260, 300}});
  CHECK(js[1].direction == -1);
}
