#ifndef WTT_CONFIG_HPP
#define WTT_CONFIG_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "wtt/baseline.hpp"
#include "wtt/journey.hpp"
#include "wtt/outlier.hpp"
#include "wtt/similarity.hpp"
#include "wtt/spectral.hpp"
#include "wtt/timetable.hpp"

namespace wtt {

// `key = value` lines in file order. `#` starts a comment; blank lines are
// skipped. ConfigError on a line without '='.
std::vector<std::pair<std::string, std::string>> read_key_values(std::istream& in);

// Strict numeric conversions naming the key on failure.
double parse_double(const std::string& key, const std::string& value);
std::int64_t parse_int(const std::string& key, const std::string& value);

enum class Method { Spectral, Baseline };

struct PipelineConfig {
  JourneyParams journey;
  bool soft_metric = false;
  double tau = 30.0;
  double two_sigma_sq = 30.0;
  double soft_cutoff = 1800.0;
  SpectralParams spectral;
  Method method = Method::Spectral;
  DbscanParams dbscan;
  LinkWindow link;
  OutlierParams outlier;
  bool reattach = true;  // re-add boarding/alighting stations (spectral only)
  Timestamp window = 5400;
  Timestamp overlap = 1800;
  Timestamp dedup_tolerance = 60;
  HeadwayMode headway_mode = HeadwayMode::ArrivalToArrival;
  IncidentParams incident;
  int line_length = 0;  // 0: one past the largest station seen
  std::vector<int> excluded_stations;  // left out of journey vectors
  std::uint64_t seed = 0;

  SimilarityMetric metric() const;
  // Throws ConfigError naming the first violated invariant.
  void validate() const;
};

// Unknown keys are a ConfigError. Later assignments win.
void apply_setting(PipelineConfig& config, const std::string& key, const std::string& value);
PipelineConfig read_config(std::istream& in);
// Canonical form: every key, fixed order.
void write_config(std::ostream& out, const PipelineConfig& config);
// FNV-1a 64 of the canonical form, as 16 hex digits.
std::string config_hash(const PipelineConfig& config);

}  // namespace wtt

#endif
