#include <doctest.h>

#include <random>

#include "wtt/outlier.hpp"

using namespace wtt;

namespace {

std::vector<LabeledRecord> group(int station, int label, std::vector<Timestamp> ts) {
  std::vector<LabeledRecord> out;
  for (std::size_t i = 0; i < ts.size(); ++i) out.push_back({"d" + std::to_string(i), station, ts[i], label, -1, 0});
  return out;
}

}  // namespace

TEST_CASE("median and MAD fixtures") {
  CHECK(median(std::vector<double>{3, 1, 2}) == 2);
  CHECK(median(std::vector<double>{4, 1, 2, 3}) == 2.5);
  CHECK(mad(std::vector<double>{1, 1, 2, 2, 4, 6, 9}) == 1);
  CHECK(mad(std::vector<double>{7, 7, 7}) == 0);
  CHECK(mad(std::vector<double>{0, 10}) == 5);
  CHECK(mad_sigma(std::vector<double>{1, 1, 2, 2, 4, 6, 9}) == doctest::Approx(1.4826));
  CHECK(mad_sigma(std::vector<double>{7, 7}) == 0);
  CHECK_THROWS_AS(mad(std::vector<double>{}), DataError);
}

TEST_CASE("mad_sigma estimates the normal standard deviation") {
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> xs(10000);
  for (auto& x : xs) x = gauss(rng);
  CHECK(std::abs(mad_sigma(xs) - 1.0) < 0.05);
}

TEST_CASE("knn filter") {
  std::vector<Timestamp> ts;
  for (int i = 0; i < 10; ++i) ts.push_back(100 + 2 * i);
  auto recs = group(3, 1, ts);
  CHECK(knn_filter(recs, 5) == recs);

  auto mixed = group(3, 1, {100, 101, 102, 104, 105, 106});
  mixed.push_back({"x", 3, 103, 2, -1, 0});
  const auto out = knn_filter(mixed, 5);
  CHECK(out.size() == 6);
  for (const auto& r : out) CHECK(r.label == 1);

  auto other_station = mixed;
  other_station.back().station = 4;
  CHECK(knn_filter(other_station, 5).size() == 7);

  auto unlabeled = recs;
  unlabeled[0].label = -1;
  CHECK(knn_filter(unlabeled, 5).size() == 9);
}

TEST_CASE("mad filter") {
  std::vector<Timestamp> ts;
  for (Timestamp t = 600; t <= 610; ++t) ts.push_back(t);
  ts.push_back(1200);
  auto out = mad_filter(group(9, 0, ts), 3.5);
  CHECK(out.size() == 11);
  for (const auto& r : out) CHECK(r.timestamp != 1200);

  CHECK(mad_filter(group(9, 0, {50, 50, 50}), 3.5).size() == 3);
  CHECK(mad_filter(group(9, 0, {50, 50, 50, 80}), 3.5).size() == 3);
  CHECK(mad_filter(group(9, 0, {77}), 3.5).size() == 1);

  // Groups are per station and label.
  auto two = group(9, 0, {100, 101, 102});
  for (const auto& r : group(9, 1, {900, 901, 902})) two.push_back(r);
  CHECK(mad_filter(two, 3.5).size() == 6);
}

TEST_CASE("remove_outliers validates its parameters") {
  OutlierParams p;
  p.k_neighbors = 0;
  CHECK_THROWS_AS(remove_outliers(group(1, 0, {1, 2}), p), ConfigError);
  p = {};
  p.tau_mad = 0;
  CHECK_THROWS_AS(remove_outliers(group(1, 0, {1, 2}), p), ConfigError);
}
