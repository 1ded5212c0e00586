#include "wtt/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

#include "wtt/config.hpp"

namespace wtt {

namespace {

bool inside(const StationInterval& iv, int station, Timestamp t) {
  return iv.station == station && t >= iv.begin && t < iv.end;
}

StationInterval parse_interval(const std::string& key, const std::string& value) {
  std::istringstream ss(value);
  StationInterval iv;
  if (!(ss >> iv.station >> iv.begin >> iv.end) || !(ss >> std::ws).eof())
    throw ConfigError(key + ": expected 'station begin end'");
  return iv;
}

std::string device_name(char prefix, int n) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%c%06d", prefix, n);
  return buf;
}

struct Presence {
  int station;
  double begin, end;
};

}  // namespace

void ScenarioConfig::validate() const {
  if (line_length < 2) throw ConfigError("scenario: line_length must be >= 2");
  if (horizon <= 0) throw ConfigError("scenario: horizon must be > 0");
  for (double v : {headway_mean, dwell_mean, runtime_mean, probe_median, platform_wait_mean, exit_mean,
                   roam_scan_delay, min_separation})
    if (!(v > 0.0)) throw ConfigError("scenario: time parameters must be > 0");
  for (double v : {headway_std, dwell_std, runtime_std, probe_sigma_log, probe_device_spread, platform_wait_std,
                   passengers_per_train_mean})
    if (!(v >= 0.0)) throw ConfigError("scenario: spreads and rates must be >= 0");
  if (headway_mean < dwell_mean + min_separation)
    throw ConfigError("scenario: infeasible schedule, headway_mean < dwell_mean + min_separation");
  for (double p : {roam_scan_prob, detection_prob, spoofed_device_rate})
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("scenario: probabilities must lie in [0, 1]");
  if (!station_detection.empty() && static_cast<int>(station_detection.size()) != line_length)
    throw ConfigError("scenario: station_detection needs one value per station");
  for (double p : station_detection)
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("scenario: probabilities must lie in [0, 1]");
  for (const auto* list : {&dropouts, &suspensions})
    for (const auto& iv : *list)
      if (iv.station < 0 || iv.station >= line_length || iv.end <= iv.begin)
        throw ConfigError("scenario: event intervals need a valid station and begin < end");
  for (const auto& iv : suspensions)
    if (iv.station == 0) throw ConfigError("scenario: suspensions must be downstream of station 0");
}

double ScenarioConfig::detection_at(int station, Timestamp t) const {
  for (const auto& iv : dropouts)
    if (inside(iv, station, t)) return 0.0;
  return station_detection.empty() ? detection_prob : station_detection[station];
}

ScenarioConfig read_scenario(std::istream& in) {
  ScenarioConfig c;
  for (const auto& [k, v] : read_key_values(in)) {
    if (k == "line_length") c.line_length = static_cast<int>(parse_int(k, v));
    else if (k == "start_time") c.start_time = parse_int(k, v);
    else if (k == "horizon") c.horizon = parse_int(k, v);
    else if (k == "headway_mean") c.headway_mean = parse_double(k, v);
    else if (k == "headway_std") c.headway_std = parse_double(k, v);
    else if (k == "dwell_mean") c.dwell_mean = parse_double(k, v);
    else if (k == "dwell_std") c.dwell_std = parse_double(k, v);
    else if (k == "runtime_mean") c.runtime_mean = parse_double(k, v);
    else if (k == "runtime_std") c.runtime_std = parse_double(k, v);
    else if (k == "min_separation") c.min_separation = parse_double(k, v);
    else if (k == "passengers_per_train_mean") c.passengers_per_train_mean = parse_double(k, v);
    else if (k == "probe_median") c.probe_median = parse_double(k, v);
    else if (k == "probe_sigma_log") c.probe_sigma_log = parse_double(k, v);
    else if (k == "probe_device_spread") c.probe_device_spread = parse_double(k, v);
    else if (k == "roam_scan_prob") c.roam_scan_prob = parse_double(k, v);
    else if (k == "roam_scan_delay") c.roam_scan_delay = parse_double(k, v);
    else if (k == "detection_prob") c.detection_prob = parse_double(k, v);
    else if (k == "platform_wait_mean") c.platform_wait_mean = parse_double(k, v);
    else if (k == "platform_wait_std") c.platform_wait_std = parse_double(k, v);
    else if (k == "exit_mean") c.exit_mean = parse_double(k, v);
    else if (k == "spoofed_device_rate") c.spoofed_device_rate = parse_double(k, v);
    else if (k == "seed") c.seed = static_cast<std::uint64_t>(parse_int(k, v));
    else if (k == "dropout") c.dropouts.push_back(parse_interval(k, v));
    else if (k == "suspension") c.suspensions.push_back(parse_interval(k, v));
    else if (k == "station_detection") {
      c.station_detection.clear();
      std::istringstream ss(v);
      std::string item;
      while (std::getline(ss, item, ',')) c.station_detection.push_back(parse_double(k, item));
    } else {
      throw ConfigError("scenario: unknown key '" + k + "'");
    }
  }
  c.validate();
  return c;
}

void write_scenario(std::ostream& out, const ScenarioConfig& c) {
  std::ostringstream s;
  s.precision(17);
  s << "line_length = " << c.line_length << "\nstart_time = " << c.start_time << "\nhorizon = " << c.horizon
    << "\nheadway_mean = " << c.headway_mean << "\nheadway_std = " << c.headway_std
    << "\ndwell_mean = " << c.dwell_mean << "\ndwell_std = " << c.dwell_std
    << "\nruntime_mean = " << c.runtime_mean << "\nruntime_std = " << c.runtime_std
    << "\nmin_separation = " << c.min_separation << "\npassengers_per_train_mean = " << c.passengers_per_train_mean
    << "\nprobe_median = " << c.probe_median << "\nprobe_sigma_log = " << c.probe_sigma_log
    << "\nprobe_device_spread = " << c.probe_device_spread << "\nroam_scan_prob = " << c.roam_scan_prob
    << "\nroam_scan_delay = " << c.roam_scan_delay << "\ndetection_prob = " << c.detection_prob
    << "\nplatform_wait_mean = " << c.platform_wait_mean << "\nplatform_wait_std = " << c.platform_wait_std
    << "\nexit_mean = " << c.exit_mean << "\nspoofed_device_rate = " << c.spoofed_device_rate
    << "\nseed = " << c.seed << "\n";
  if (!c.station_detection.empty()) {
    s << "station_detection = ";
    for (std::size_t i = 0; i < c.station_detection.size(); ++i) s << (i ? "," : "") << c.station_detection[i];
    s << "\n";
  }
  for (const auto& iv : c.dropouts) s << "dropout = " << iv.station << ' ' << iv.begin << ' ' << iv.end << "\n";
  for (const auto& iv : c.suspensions) s << "suspension = " << iv.station << ' ' << iv.begin << ' ' << iv.end << "\n";
  out << s.str();
}

Scenario simulate(const ScenarioConfig& config) {
  config.validate();
  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto jitter = [&](double mean, double sd, double floor) { return std::max(floor, mean + sd * gauss(rng)); };
  const int n_st = config.line_length;

  // Train movements. Arrivals respect min_separation behind the previous
  // train and suspensions; the train waits at the upstream platform.
  std::vector<std::vector<double>> arr, dep;
  const double end_dispatch = static_cast<double>(config.start_time + config.horizon);
  for (double dispatch = static_cast<double>(config.start_time); dispatch < end_dispatch;
       dispatch += jitter(config.headway_mean, config.headway_std, config.dwell_mean + config.min_separation)) {
    std::vector<double> a(n_st), d(n_st);
    const std::size_t i = arr.size();
    for (int s = 0; s < n_st; ++s) {
      const double run = s == 0 ? 0.0 : jitter(config.runtime_mean, config.runtime_std, 0.5 * config.runtime_mean);
      double t = s == 0 ? dispatch : d[s - 1] + run;
      for (bool moved = true; moved;) {
        moved = false;
        if (i > 0 && t < dep[i - 1][s] + config.min_separation) {
          t = dep[i - 1][s] + config.min_separation;
          moved = true;
        }
        for (const auto& iv : config.suspensions)
          if (inside(iv, s, static_cast<Timestamp>(std::floor(t)))) {
            t = static_cast<double>(iv.end);
            moved = true;
          }
      }
      if (s > 0) d[s - 1] = std::max(d[s - 1], t - run);
      a[s] = t;
      d[s] = t + jitter(config.dwell_mean, config.dwell_std, 0.25 * config.dwell_mean);
    }
    arr.push_back(std::move(a));
    dep.push_back(std::move(d));
  }

  Scenario out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    TrainTimetable t{static_cast<int>(i) + 1, 1, {}};
    for (int s = 0; s < n_st; ++s)
      t.stops.push_back({s, std::llround(arr[i][s]), std::llround(dep[i][s]), true, 0});
    out.truth.push_back(std::move(t));
  }

  auto record = [&](const std::string& dev, int station, double t) {
    const Timestamp ts = std::llround(t);
    const double u = unif(rng);  // always drawn so dropouts do not shift the stream
    if (u < config.detection_at(station, ts)) out.records.push_back({dev, station, ts});
  };

  int devices = 0, spoofed = 0;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const int n = config.passengers_per_train_mean > 0.0
                      ? std::poisson_distribution<int>(config.passengers_per_train_mean)(rng)
                      : 0;
    for (int p = 0; p < n; ++p) {
      // Origin-destination pair uniform over o < d.
      const int a = std::min(n_st - 1, static_cast<int>(unif(rng) * n_st));
      const int b = (a + 1 + std::min(n_st - 2, static_cast<int>(unif(rng) * (n_st - 1)))) % n_st;
      const int o = std::min(a, b), d = std::max(a, b);
      const double wait = jitter(config.platform_wait_mean, config.platform_wait_std, 5.0);
      const double exit = std::exponential_distribution<double>(1.0 / config.exit_mean)(rng);
      std::vector<Presence> stay;
      stay.push_back({o, arr[i][o] - wait, dep[i][o]});
      for (int s = o + 1; s < d; ++s) stay.push_back({s, arr[i][s], dep[i][s]});
      stay.push_back({d, arr[i][d], arr[i][d] + exit});

      const std::string dev = device_name('d', devices++);
      const double median = config.probe_median * std::exp(config.probe_device_spread * gauss(rng));
      std::lognormal_distribution<double> spread(std::log(median), std::max(config.probe_sigma_log, 1e-12));
      auto gap = [&](std::mt19937_64& g) { return config.probe_sigma_log > 0.0 ? spread(g) : median; };
      std::size_t cur = 0;
      for (double t = stay.front().begin - unif(rng) * median; t <= stay.back().end; t += gap(rng)) {
        while (cur < stay.size() && stay[cur].end < t) ++cur;
        if (cur < stay.size() && t >= stay[cur].begin) record(dev, stay[cur].station, t);
      }
      std::exponential_distribution<double> delay(1.0 / config.roam_scan_delay);
      for (const auto& st : stay) {
        const bool scan = unif(rng) < config.roam_scan_prob;
        const double t = st.begin + delay(rng);
        if (scan && t <= st.end) record(dev, st.station, t);
      }
      if (unif(rng) < config.spoofed_device_rate) {
        const auto& st = stay[static_cast<std::size_t>(unif(rng) * stay.size()) % stay.size()];
        const Timestamp ts = std::llround(st.begin + unif(rng) * (st.end - st.begin));
        if (config.detection_at(st.station, ts) > 0.0) out.records.push_back({device_name('x', spoofed++), st.station, ts});
      }
    }
  }

  std::sort(out.records.begin(), out.records.end(), [](const WifiRecord& a, const WifiRecord& b) {
    if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
    if (a.station != b.station) return a.station < b.station;
    return a.device < b.device;
  });
  return out;
}

}  // namespace wtt
