#include "wtt/journey.hpp"

#include <algorithm>
#include <cstdlib>
#include <istream>
#include <ostream>

#include <json.hpp>

namespace wtt {

void JourneyParams::validate() const {
  if (tau1 <= 0) throw ConfigError("journey: tau1 must be > 0");
  if (tau1 > tau2) throw ConfigError("journey: tau1 must be <= tau2");
}

namespace {

struct Sighting {
  int station;
  Timestamp t;
};

// Accumulates one journey during the greedy scan.
class JourneyBuilder {
 public:
  JourneyBuilder(const std::string& device, const JourneyParams& params)
      : params_(params) {
    current_.device = device;
  }

  bool empty() const { return current_.legs.empty(); }

  // Returns false (and leaves the journey untouched) if `s` cannot extend it.
  bool try_extend(const Sighting& s) {
    if (empty()) {
      current_.legs.push_back({s.station, s.t, s.t});
      return true;
    }
    Leg& tail = current_.legs.back();
    const Timestamp start = current_.start();
    if (s.station == tail.station) {
      if (s.t - tail.first > params_.tau1) return false;
      if (current_.legs.size() > 1 && s.t - start > params_.tau2) return false;
      tail.last = s.t;
      return true;
    }
    const int dir = s.station > tail.station ? 1 : -1;
    if (current_.direction != 0 && dir != current_.direction) return false;
    if (s.t - start > params_.tau2) return false;
    current_.direction = dir;
    current_.legs.push_back({s.station, s.t, s.t});
    return true;
  }

  Journey take() {
    Journey out = std::move(current_);
    current_ = Journey{};
    current_.device = out.device;
    return out;
  }

 private:
  const JourneyParams& params_;
  Journey current_;
};

}  // namespace

std::vector<Journey> extract_journeys(std::span<const ExtremityRecord> extremities,
                                      const JourneyParams& params) {
  params.validate();
  std::vector<Journey> out;
  if (extremities.empty()) return out;

  std::vector<Sighting> sightings;
  sightings.reserve(extremities.size() * 2);
  for (std::size_t i = 0; i < extremities.size(); ++i) {
    const auto& e = extremities[i];
    if (e.first > e.last) throw DataError("extract_journeys: extremity with first > last");
    if (i > 0 && e.first < extremities[i - 1].first)
      throw DataError("extract_journeys: extremities not sorted by first timestamp");
    sightings.push_back({e.station, e.first});
    if (e.last != e.first) sightings.push_back({e.station, e.last});
  }

  JourneyBuilder builder(extremities.front().device, params);
  for (const auto& s : sightings) {
    if (builder.try_extend(s)) continue;
    out.push_back(builder.take());
    builder.try_extend(s);
  }
  if (!builder.empty()) out.push_back(builder.take());
  return out;
}

std::vector<Journey> journeys_from_records(std::span<const WifiRecord> records,
                                           const JourneyParams& params) {
  params.validate();
  std::vector<Journey> out;
  for (const auto& trace : group_by_device(records)) {
    auto runs = station_runs(trace.records, params.tau1);
    auto extremities = reduce_extremities(trace.records, runs);
    auto journeys = extract_journeys(extremities, params);
    std::move(journeys.begin(), journeys.end(), std::back_inserter(out));
  }
  return out;
}

std::optional<Journey> apply_cleaning(const Journey& journey, CleaningLevel level) {
  switch (level) {
    case CleaningLevel::Raw:
      return journey;
    case CleaningLevel::TrimExtremes: {
      Journey out = journey;
      if (out.legs.empty()) return std::nullopt;
      out.legs.front().first = out.legs.front().last;
      out.legs.back().last = out.legs.back().first;
      return out;
    }
    case CleaningLevel::DropEnds: {
      if (journey.legs.size() <= 2) return std::nullopt;
      Journey out = journey;
      out.legs = std::vector<Leg>(journey.legs.begin() + 1, journey.legs.end() - 1);
      return out;
    }
  }
  return std::nullopt;
}

CoverageMatrix::CoverageMatrix(int line_length)
    : n_(line_length),
      sum_(static_cast<std::size_t>(line_length) * line_length, 0.0),
      count_(static_cast<std::size_t>(line_length) * line_length, 0) {
  if (line_length < 2) throw ConfigError("coverage: line length must be >= 2");
}

void CoverageMatrix::add(int boarding, int alighting, double ratio) {
  const auto idx = static_cast<std::size_t>(boarding) * n_ + alighting;
  sum_[idx] += ratio;
  ++count_[idx];
}

std::optional<double> CoverageMatrix::at(int boarding, int alighting) const {
  if (std::abs(boarding - alighting) <= 1) return std::nullopt;
  const auto idx = static_cast<std::size_t>(boarding) * n_ + alighting;
  if (count_[idx] == 0) return std::nullopt;
  return sum_[idx] / count_[idx];
}

std::optional<double> CoverageMatrix::mean() const {
  double total = 0.0;
  int cells = 0;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      if (auto v = at(i, j)) {
        total += *v;
        ++cells;
      }
  if (cells == 0) return std::nullopt;
  return total / cells;
}

CoverageMatrix coverage_ratio_matrix(std::span<const Journey> journeys, int line_length) {
  CoverageMatrix m(line_length);
  for (const auto& j : journeys) {
    if (j.legs.empty()) continue;
    const int b = j.boarding_station();
    const int a = j.alighting_station();
    if (b < 0 || a < 0 || b >= line_length || a >= line_length)
      throw DataError("coverage: station outside the line");
    const double passed = std::abs(a - b) + 1;
    m.add(b, a, static_cast<double>(j.legs.size()) / passed);
  }
  return m;
}

void write_journeys(std::ostream& out, std::span<const Journey> journeys, std::span<const int> ids) {
  for (std::size_t i = 0; i < journeys.size(); ++i) {
    const auto& j = journeys[i];
    nlohmann::json legs = nlohmann::json::array();
    for (const auto& leg : j.legs) legs.push_back({leg.station, leg.first, leg.last});
    nlohmann::json line = {{"id", ids.empty() ? static_cast<int>(i) : ids[i]},
                           {"device", j.device},
                           {"direction", j.direction},
                           {"legs", std::move(legs)}};
    out << line.dump() << '\n';
  }
}

JourneyFile read_journeys(std::istream& in) {
  JourneyFile file;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      auto obj = nlohmann::json::parse(line);
      Journey j;
      j.device = obj.at("device").get<std::string>();
      j.direction = obj.at("direction").get<int>();
      for (const auto& leg : obj.at("legs"))
        j.legs.push_back({leg.at(0).get<int>(), leg.at(1).get<Timestamp>(), leg.at(2).get<Timestamp>()});
      if (j.legs.empty()) throw DataError("journey without legs");
      file.ids.push_back(obj.value("id", static_cast<int>(file.ids.size())));
      file.journeys.push_back(std::move(j));
    } catch (const nlohmann::json::exception& e) {
      throw DataError("journeys line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return file;
}

}  // namespace wtt
