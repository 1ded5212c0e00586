#include "wtt/timetable.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "wtt/outlier.hpp"

namespace wtt {

namespace {

// Endpoint groups are small and noisy; reuse the type-2 rule on them.
constexpr double kEndpointMadTau = 3.5;

std::vector<Timestamp> robust_subset(std::vector<Timestamp> ts) {
  if (ts.size() < 3) return ts;
  std::vector<double> v(ts.begin(), ts.end());
  const double center = median(v);
  const double sigma = mad_sigma(v);
  std::vector<Timestamp> out;
  for (Timestamp t : ts) {
    const double dev = std::abs(static_cast<double>(t) - center);
    if (sigma > 0.0 ? dev < kEndpointMadTau * sigma : dev == 0.0) out.push_back(t);
  }
  return out;
}

void print_value(std::ostream& out, double v) {
  if (v == std::floor(v) && std::abs(v) < 1e15)
    out << static_cast<long long>(v);
  else
    out << std::setprecision(10) << v;
}

}  // namespace

const StationTime* TrainTimetable::stop_at(int station) const {
  for (const auto& s : stops)
    if (s.station == station) return &s;
  return nullptr;
}

int TrainTimetable::support() const {
  int total = 0;
  for (const auto& s : stops) total += s.support;
  return total;
}

bool interpolate_missing(TrainTimetable& train) {
  std::vector<StationTime> obs;
  for (const auto& s : train.stops)
    if (s.observed) obs.push_back(s);
  const int dir = train.direction < 0 ? -1 : 1;
  std::sort(obs.begin(), obs.end(),
            [dir](const StationTime& a, const StationTime& b) { return dir * a.station < dir * b.station; });

  // Heaviest time-consistent chain of observed stops.
  const std::size_t n = obs.size();
  std::vector<long long> best(n);
  std::vector<std::ptrdiff_t> prev(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    best[i] = obs[i].support + 1;
    for (std::size_t j = 0; j < i; ++j) {
      if (obs[i].arrival <= obs[j].departure) continue;
      if (best[j] + obs[i].support + 1 > best[i]) {
        best[i] = best[j] + obs[i].support + 1;
        prev[i] = static_cast<std::ptrdiff_t>(j);
      }
    }
  }
  std::ptrdiff_t tail = -1;
  for (std::size_t i = 0; i < n; ++i)
    if (tail < 0 || best[i] > best[tail]) tail = static_cast<std::ptrdiff_t>(i);
  std::vector<StationTime> chain;
  for (std::ptrdiff_t i = tail; i >= 0; i = prev[i]) chain.push_back(obs[i]);
  std::reverse(chain.begin(), chain.end());
  if (chain.size() < 2) return false;

  std::vector<StationTime> stops;
  for (std::size_t c = 0; c + 1 < chain.size(); ++c) {
    const StationTime& a = chain[c];
    const StationTime& b = chain[c + 1];
    stops.push_back(a);
    const Timestamp span = b.arrival - a.departure;
    const int steps = std::abs(b.station - a.station);
    for (int k = 1; k < steps; ++k) {
      const Timestamp t = a.departure + span * k / steps;
      stops.push_back({a.station + dir * k, t, t, false, 0});
    }
  }
  stops.push_back(chain.back());
  train.stops = std::move(stops);
  return true;
}

std::vector<TrainTimetable> derive_timetable(std::span<const LabeledRecord> records,
                                             std::span<const Endpoint> endpoints, int direction) {
  struct Cell {
    Timestamp lo = 0, hi = 0;
    int count = 0;
  };
  std::map<int, std::map<int, Cell>> cells;
  std::map<int, std::map<int, int>> journey_votes;
  for (const auto& r : records) {
    if (r.label < 0) continue;
    Cell& c = cells[r.label][r.station];
    if (c.count == 0) c.lo = c.hi = r.timestamp;
    c.lo = std::min(c.lo, r.timestamp);
    c.hi = std::max(c.hi, r.timestamp);
    ++c.count;
    if (r.journey >= 0) ++journey_votes[r.journey][r.label];
  }
  std::map<int, int> journey_label;
  for (const auto& [j, votes] : journey_votes) {
    int label = -1, count = 0;
    for (const auto& [l, n] : votes)
      if (n > count) label = l, count = n;
    journey_label[j] = label;
  }

  std::map<std::pair<int, int>, std::pair<std::vector<Timestamp>, std::vector<Timestamp>>> attached;
  for (const auto& e : endpoints) {
    auto it = journey_label.find(e.journey);
    if (it == journey_label.end()) continue;
    const auto& member = cells[it->second];
    if (member.empty() || (e.station >= member.begin()->first && e.station <= member.rbegin()->first)) continue;
    auto& slot = attached[{it->second, e.station}];
    (e.boarding ? slot.first : slot.second).push_back(e.timestamp);
  }
  for (auto& [key, lists] : attached) {
    // Boarders are last seen before departure, alighters first seen after arrival.
    const auto board = robust_subset(lists.first);
    const auto alight = robust_subset(lists.second);
    if (board.empty() && alight.empty()) continue;
    Cell c;
    if (!board.empty() && !alight.empty()) {
      c.hi = *std::max_element(board.begin(), board.end());
      c.lo = std::min(*std::min_element(alight.begin(), alight.end()), c.hi);
    } else if (!board.empty()) {
      c.lo = c.hi = *std::max_element(board.begin(), board.end());
    } else {
      c.lo = c.hi = *std::min_element(alight.begin(), alight.end());
    }
    c.count = static_cast<int>(board.size() + alight.size());
    cells[key.first][key.second] = c;
  }

  std::vector<TrainTimetable> out;
  for (const auto& [label, stations] : cells) {
    TrainTimetable t;
    t.direction = direction < 0 ? -1 : 1;
    if (direction == 0) {
      auto first = stations.begin(), last = stations.begin();
      for (auto it = stations.begin(); it != stations.end(); ++it) {
        if (it->second.lo < first->second.lo) first = it;
        if (it->second.hi > last->second.hi) last = it;
      }
      t.direction = last->first >= first->first ? 1 : -1;
    }
    for (const auto& [s, c] : stations) t.stops.push_back({s, c.lo, c.hi, true, c.count});
    if (!interpolate_missing(t)) continue;
    out.push_back(std::move(t));
  }
  std::stable_sort(out.begin(), out.end(), [](const TrainTimetable& a, const TrainTimetable& b) {
    return a.first_departure() < b.first_departure();
  });
  for (std::size_t i = 0; i < out.size(); ++i) out[i].train_id = static_cast<int>(i) + 1;
  return out;
}

std::vector<TrainTimetable> merge_timetables(std::vector<TrainTimetable> trains, Timestamp tolerance) {
  std::stable_sort(trains.begin(), trains.end(), [](const TrainTimetable& a, const TrainTimetable& b) {
    return a.first_departure() < b.first_departure();
  });
  auto same = [tolerance](const TrainTimetable& a, const TrainTimetable& b) {
    if (a.direction != b.direction) return false;
    // Weighted median of the arrival gaps, weights = the weaker support.
    std::vector<std::pair<Timestamp, int>> gaps;
    long long total = 0;
    for (const auto& s : a.stops) {
      if (!s.observed) continue;
      const StationTime* o = b.stop_at(s.station);
      if (!o || !o->observed) continue;
      const int w = std::max(1, std::min(s.support, o->support));
      gaps.emplace_back(std::abs(s.arrival - o->arrival), w);
      total += w;
    }
    if (gaps.empty()) return false;
    std::sort(gaps.begin(), gaps.end());
    long long acc = 0;
    for (const auto& [gap, w] : gaps) {
      acc += w;
      if (2 * acc >= total) return gap <= tolerance;
    }
    return false;
  };

  std::vector<TrainTimetable> out;
  for (auto& t : trains) {
    auto it = std::find_if(out.begin(), out.end(), [&](const TrainTimetable& r) { return same(r, t); });
    if (it == out.end()) {
      out.push_back(std::move(t));
      continue;
    }
    std::map<int, StationTime> united;
    for (const auto& s : it->stops)
      if (s.observed) united[s.station] = s;
    for (const auto& s : t.stops) {
      if (!s.observed) continue;
      auto [pos, fresh] = united.emplace(s.station, s);
      if (!fresh && s.support > pos->second.support) pos->second = s;
    }
    TrainTimetable merged{it->train_id, it->direction, {}};
    for (const auto& [st, s] : united) merged.stops.push_back(s);
    if (interpolate_missing(merged)) *it = std::move(merged);
  }
  std::stable_sort(out.begin(), out.end(), [](const TrainTimetable& a, const TrainTimetable& b) {
    return a.first_departure() < b.first_departure();
  });
  for (std::size_t i = 0; i < out.size(); ++i) out[i].train_id = static_cast<int>(i) + 1;
  return out;
}

KpiSeries headways(std::span<const TrainTimetable> trains, int station, HeadwayMode mode) {
  struct Visit {
    Timestamp arrival, departure;
    int train;
    const TrainTimetable* timetable;
  };
  std::vector<Visit> visits;
  for (const auto& t : trains)
    if (const StationTime* s = t.stop_at(station)) visits.push_back({s->arrival, s->departure, t.train_id, &t});
  std::sort(visits.begin(), visits.end(), [](const Visit& a, const Visit& b) {
    return a.arrival != b.arrival ? a.arrival < b.arrival : a.train < b.train;
  });
  // Trains do not overtake: one seen between the pair at another station but
  // without a stop here was missed, so the pair's gap spans two headways. The
  // pair is kept when its gap grew since that station, as a delay would show,
  // and when the other train may be an earlier piece of the follower or a
  // later piece of the leader.
  constexpr Timestamp slack = 60;
  auto pos = [](const TrainTimetable& t, const StationTime& s) { return t.direction < 0 ? -s.station : s.station; };
  auto missed_between = [&](const TrainTimetable& a, const TrainTimetable& b) {
    const Timestamp gap = b.stop_at(station)->arrival - a.stop_at(station)->arrival;
    for (const auto& c : trains) {
      if (c.direction != a.direction || c.stop_at(station)) continue;
      if (pos(c, c.stops.back()) <= pos(b, b.stops.front()) || pos(c, c.stops.front()) >= pos(a, a.stops.back()))
        continue;
      for (const auto& s : c.stops) {
        const StationTime* sa = a.stop_at(s.station);
        const StationTime* sb = b.stop_at(s.station);
        if (sa && sb && sa->arrival < s.arrival && s.arrival < sb->arrival &&
            gap <= sb->arrival - sa->arrival + slack)
          return true;
      }
    }
    return false;
  };
  KpiSeries out{station, "headway", {}};
  for (std::size_t i = 0; i + 1 < visits.size(); ++i) {
    if (missed_between(*visits[i].timetable, *visits[i + 1].timetable)) continue;
    const Timestamp from = mode == HeadwayMode::ArrivalToArrival ? visits[i].arrival : visits[i].departure;
    out.values.push_back({visits[i + 1].train, visits[i].arrival, static_cast<double>(visits[i + 1].arrival - from)});
  }
  return out;
}

KpiSeries dwell_times(std::span<const TrainTimetable> trains, int station) {
  KpiSeries out{station, "dwell", {}};
  for (const auto& t : trains) {
    const StationTime* s = t.stop_at(station);
    if (s && s->observed) out.values.push_back({t.train_id, s->arrival, static_cast<double>(s->departure - s->arrival)});
  }
  std::stable_sort(out.values.begin(), out.values.end(),
                   [](const KpiValue& a, const KpiValue& b) { return a.time < b.time; });
  return out;
}

void IncidentParams::validate() const {
  if (window < 2) throw ConfigError("incident: window must be >= 2");
  if (!(threshold > 0.0)) throw ConfigError("incident: threshold must be > 0");
  if (!(sigma_floor > 0.0)) throw ConfigError("incident: sigma_floor must be > 0");
}

std::vector<IncidentFlag> detect_incidents(const KpiSeries& series, const IncidentParams& params) {
  params.validate();
  std::vector<IncidentFlag> out;
  const auto& v = series.values;
  const std::size_t w = static_cast<std::size_t>(params.window);
  std::vector<double> trailing(w);
  for (std::size_t i = w; i < v.size(); ++i) {
    for (std::size_t j = 0; j < w; ++j) trailing[j] = v[i - w + j].value;
    const double center = median(trailing);
    const double sigma = std::max(mad_sigma(trailing), params.sigma_floor);
    const double z = std::abs(v[i].value - center) / sigma;
    if (z >= params.threshold) out.push_back({series.station, v[i].time, v[i].value, z});
  }
  return out;
}

void write_timetable(std::ostream& out, std::span<const TrainTimetable> trains) {
  out << "train_id,station,arrival,departure,observed\n";
  for (const auto& t : trains)
    for (const auto& s : t.stops)
      out << t.train_id << ',' << s.station << ',' << s.arrival << ',' << s.departure << ',' << (s.observed ? 1 : 0)
          << '\n';
}

std::vector<TrainTimetable> read_timetable(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("train_id,station,arrival,departure", 0) != 0)
    throw DataError("timetable: expected header 'train_id,station,arrival,departure,observed'");
  std::vector<TrainTimetable> out;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string field;
    int id = 0;
    StationTime s;
    try {
      std::getline(ss, field, ',');
      id = std::stoi(field);
      std::getline(ss, field, ',');
      s.station = std::stoi(field);
      std::getline(ss, field, ',');
      s.arrival = std::stoll(field);
      std::getline(ss, field, ',');
      s.departure = std::stoll(field);
      if (std::getline(ss, field, ',')) s.observed = std::stoi(field) != 0;
    } catch (const std::exception&) {
      throw DataError("timetable line " + std::to_string(lineno) + ": malformed");
    }
    if (out.empty() || out.back().train_id != id) out.push_back({id, 1, {}});
    out.back().stops.push_back(s);
  }
  for (auto& t : out)
    if (t.stops.size() > 1 && t.stops[1].station < t.stops[0].station) t.direction = -1;
  return out;
}

void write_kpis(std::ostream& out, std::span<const KpiSeries> series) {
  out << "station,kind,train_id,value_seconds\n";
  for (const auto& s : series)
    for (const auto& v : s.values) {
      out << s.station << ',' << s.kind << ',' << v.train_id << ',';
      print_value(out, v.value);
      out << '\n';
    }
}

void write_incidents(std::ostream& out, std::span<const IncidentFlag> flags) {
  out << "station,time,value_seconds,zscore\n";
  for (const auto& f : flags) {
    out << f.station << ',' << f.time << ',';
    print_value(out, f.value);
    out << ',';
    print_value(out, f.zscore);
    out << '\n';
  }
}

}  // namespace wtt
