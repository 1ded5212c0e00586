#ifndef WTT_SIMULATE_HPP
#define WTT_SIMULATE_HPP

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "wtt/timetable.hpp"
#include "wtt/trace.hpp"

namespace wtt {

struct StationInterval {
  int station = 0;
  Timestamp begin = 0;
  Timestamp end = 0;  // exclusive
};

// One-directional line (stations 0 .. line_length-1). Times in seconds.
struct ScenarioConfig {
  int line_length = 16;
  Timestamp start_time = 25200;  // 07:00
  Timestamp horizon = 5400;  // trains are dispatched during [start, start + horizon)
  double headway_mean = 180.0;
  double headway_std = 20.0;
  double dwell_mean = 25.0;
  double dwell_std = 5.0;
  double runtime_mean = 90.0;  // per inter-station link
  double runtime_std = 10.0;
  double min_separation = 60.0;  // next arrival after previous departure
  double passengers_per_train_mean = 40.0;
  double probe_median = 90.0;
  double probe_sigma_log = 1.0;
  double probe_device_spread = 0.3;  // log-sd of per-device median interval
  double roam_scan_prob = 0.5;       // probe burst shortly after entering a station
  double roam_scan_delay = 5.0;
  double detection_prob = 0.6;
  std::vector<double> station_detection;  // per-station override when non-empty
  double platform_wait_mean = 150.0;
  double platform_wait_std = 90.0;
  double exit_mean = 30.0;
  double spoofed_device_rate = 0.02;
  std::vector<StationInterval> dropouts;     // detection_prob = 0 inside
  std::vector<StationInterval> suspensions;  // no train may arrive inside
  std::uint64_t seed = 1;

  void validate() const;
  double detection_at(int station, Timestamp t) const;
};

// key = value lines; `dropout` and `suspension` take `station begin end` and
// may repeat, `station_detection` takes a comma-separated list.
ScenarioConfig read_scenario(std::istream& in);
void write_scenario(std::ostream& out, const ScenarioConfig& config);

struct Scenario {
  std::vector<WifiRecord> records;     // sorted by (timestamp, station, device)
  std::vector<TrainTimetable> truth;   // every stop observed
};

Scenario simulate(const ScenarioConfig& config);

}  // namespace wtt

#endif
