#include "wtt/config.hpp"

#include <charconv>
#include <cstdio>
#include <functional>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace wtt {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(key + ": expected a boolean, got '" + v + "'");
}

using Setter = std::function<void(PipelineConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"tau1", [](auto& c, auto& k, auto& v) { c.journey.tau1 = parse_int(k, v); }},
      {"tau2", [](auto& c, auto& k, auto& v) { c.journey.tau2 = parse_int(k, v); }},
      {"metric",
       [](auto& c, auto& k, auto& v) {
         if (v != "hard" && v != "soft") throw ConfigError(k + ": expected hard or soft");
         c.soft_metric = v == "soft";
       }},
      {"tau", [](auto& c, auto& k, auto& v) { c.tau = parse_double(k, v); }},
      {"two_sigma_sq", [](auto& c, auto& k, auto& v) { c.two_sigma_sq = parse_double(k, v); }},
      {"soft_cutoff", [](auto& c, auto& k, auto& v) { c.soft_cutoff = parse_double(k, v); }},
      {"k",
       [](auto& c, auto& k, auto& v) {
         const auto n = parse_int(k, v);
         c.spectral.k = n > 0 ? std::optional<int>(static_cast<int>(n)) : std::nullopt;
       }},
      {"k_min", [](auto& c, auto& k, auto& v) { c.spectral.k_min = static_cast<int>(parse_int(k, v)); }},
      {"k_max", [](auto& c, auto& k, auto& v) { c.spectral.k_max_cap = static_cast<int>(parse_int(k, v)); }},
      {"min_component_size",
       [](auto& c, auto& k, auto& v) { c.spectral.min_component_size = static_cast<int>(parse_int(k, v)); }},
      {"max_vertices", [](auto& c, auto& k, auto& v) { c.spectral.max_vertices = static_cast<int>(parse_int(k, v)); }},
      {"normalize_rows", [](auto& c, auto& k, auto& v) { c.spectral.normalize_rows = parse_bool(k, v); }},
      {"kmeans_restarts",
       [](auto& c, auto& k, auto& v) { c.spectral.kmeans.restarts = static_cast<int>(parse_int(k, v)); }},
      {"kmeans_iterations",
       [](auto& c, auto& k, auto& v) { c.spectral.kmeans.max_iterations = static_cast<int>(parse_int(k, v)); }},
      {"method",
       [](auto& c, auto& k, auto& v) {
         if (v != "spectral" && v != "baseline") throw ConfigError(k + ": expected spectral or baseline");
         c.method = v == "spectral" ? Method::Spectral : Method::Baseline;
       }},
      {"dbscan_eps", [](auto& c, auto& k, auto& v) { c.dbscan.epsilon = parse_double(k, v); }},
      {"dbscan_min_samples", [](auto& c, auto& k, auto& v) { c.dbscan.min_samples = static_cast<int>(parse_int(k, v)); }},
      {"link_min_gap", [](auto& c, auto& k, auto& v) { c.link.min_gap = parse_int(k, v); }},
      {"link_max_gap", [](auto& c, auto& k, auto& v) { c.link.max_gap = parse_int(k, v); }},
      {"knn_k", [](auto& c, auto& k, auto& v) { c.outlier.k_neighbors = static_cast<int>(parse_int(k, v)); }},
      {"mad_tau", [](auto& c, auto& k, auto& v) { c.outlier.tau_mad = parse_double(k, v); }},
      {"knn_first", [](auto& c, auto& k, auto& v) { c.outlier.knn_first = parse_bool(k, v); }},
      {"reattach", [](auto& c, auto& k, auto& v) { c.reattach = parse_bool(k, v); }},
      {"window", [](auto& c, auto& k, auto& v) { c.window = parse_int(k, v); }},
      {"overlap", [](auto& c, auto& k, auto& v) { c.overlap = parse_int(k, v); }},
      {"dedup_tolerance", [](auto& c, auto& k, auto& v) { c.dedup_tolerance = parse_int(k, v); }},
      {"headway_mode",
       [](auto& c, auto& k, auto& v) {
         if (v == "arrival") c.headway_mode = HeadwayMode::ArrivalToArrival;
         else if (v == "departure") c.headway_mode = HeadwayMode::DepartureToNextArrival;
         else throw ConfigError(k + ": expected arrival or departure");
       }},
      {"incident_window", [](auto& c, auto& k, auto& v) { c.incident.window = static_cast<int>(parse_int(k, v)); }},
      {"incident_threshold", [](auto& c, auto& k, auto& v) { c.incident.threshold = parse_double(k, v); }},
      {"incident_floor", [](auto& c, auto& k, auto& v) { c.incident.sigma_floor = parse_double(k, v); }},
      {"line_length", [](auto& c, auto& k, auto& v) { c.line_length = static_cast<int>(parse_int(k, v)); }},
      {"excluded_stations",
       [](auto& c, auto& k, auto& v) {
         c.excluded_stations.clear();
         std::istringstream ss(v);
         std::string item;
         while (std::getline(ss, item, ','))
           if (!trim(item).empty()) c.excluded_stations.push_back(static_cast<int>(parse_int(k, trim(item))));
       }},
      {"seed", [](auto& c, auto& k, auto& v) { c.seed = static_cast<std::uint64_t>(parse_int(k, v)); }},
  };
  return table;
}

}  // namespace

std::vector<std::pair<std::string, std::string>> read_key_values(std::istream& in) {
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    out.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return out;
}

double parse_double(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double d = 0.0;
  try {
    d = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != value.size()) throw ConfigError(key + ": expected a number, got '" + value + "'");
  return d;
}

std::int64_t parse_int(const std::string& key, const std::string& value) {
  std::int64_t n = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), n);
  if (ec != std::errc() || ptr != value.data() + value.size())
    throw ConfigError(key + ": expected an integer, got '" + value + "'");
  return n;
}

SimilarityMetric PipelineConfig::metric() const {
  if (soft_metric) return SoftMetric{two_sigma_sq};
  return HardMetric{tau};
}

void PipelineConfig::validate() const {
  journey.validate();
  wtt::validate(metric());
  if (!(soft_cutoff > 0.0)) throw ConfigError("soft_cutoff must be > 0");
  if (spectral.k && *spectral.k < 1) throw ConfigError("k must be >= 1");
  if (spectral.k_min < 1) throw ConfigError("k_min must be >= 1");
  if (spectral.k_max_cap < spectral.k_min) throw ConfigError("k_max must be >= k_min");
  if (spectral.min_component_size < 1) throw ConfigError("min_component_size must be >= 1");
  if (spectral.max_vertices < 2) throw ConfigError("max_vertices must be >= 2");
  if (spectral.kmeans.restarts < 1) throw ConfigError("kmeans_restarts must be >= 1");
  if (spectral.kmeans.max_iterations < 1) throw ConfigError("kmeans_iterations must be >= 1");
  dbscan.validate();
  if (link.min_gap < 0 || link.min_gap > link.max_gap) throw ConfigError("link window must satisfy 0 <= min <= max");
  outlier.validate();
  if (window <= 0) throw ConfigError("window must be > 0");
  if (overlap < 0 || overlap >= window) throw ConfigError("overlap must be in [0, window)");
  if (overlap < journey.tau2) throw ConfigError("overlap must be >= tau2 so every journey fits one window");
  if (dedup_tolerance < 0) throw ConfigError("dedup_tolerance must be >= 0");
  incident.validate();
  if (line_length < 0) throw ConfigError("line_length must be >= 0");
  for (int s : excluded_stations)
    if (s < 0) throw ConfigError("excluded_stations must be >= 0");
}

void apply_setting(PipelineConfig& config, const std::string& key, const std::string& value) {
  const auto& table = setters();
  const auto it = table.find(key);
  if (it == table.end()) throw ConfigError("unknown config key '" + key + "'");
  it->second(config, key, value);
}

PipelineConfig read_config(std::istream& in) {
  PipelineConfig c;
  for (const auto& [k, v] : read_key_values(in)) apply_setting(c, k, v);
  return c;
}

void write_config(std::ostream& out, const PipelineConfig& c) {
  std::ostringstream s;
  s.precision(17);
  s << "tau1 = " << c.journey.tau1 << "\n"
    << "tau2 = " << c.journey.tau2 << "\n"
    << "metric = " << (c.soft_metric ? "soft" : "hard") << "\n"
    << "tau = " << c.tau << "\n"
    << "two_sigma_sq = " << c.two_sigma_sq << "\n"
    << "soft_cutoff = " << c.soft_cutoff << "\n"
    << "k = " << c.spectral.k.value_or(0) << "\n"
    << "k_min = " << c.spectral.k_min << "\n"
    << "k_max = " << c.spectral.k_max_cap << "\n"
    << "min_component_size = " << c.spectral.min_component_size << "\n"
    << "max_vertices = " << c.spectral.max_vertices << "\n"
    << "normalize_rows = " << (c.spectral.normalize_rows ? "true" : "false") << "\n"
    << "kmeans_restarts = " << c.spectral.kmeans.restarts << "\n"
    << "kmeans_iterations = " << c.spectral.kmeans.max_iterations << "\n"
    << "method = " << (c.method == Method::Spectral ? "spectral" : "baseline") << "\n"
    << "dbscan_eps = " << c.dbscan.epsilon << "\n"
    << "dbscan_min_samples = " << c.dbscan.min_samples << "\n"
    << "link_min_gap = " << c.link.min_gap << "\n"
    << "link_max_gap = " << c.link.max_gap << "\n"
    << "knn_k = " << c.outlier.k_neighbors << "\n"
    << "mad_tau = " << c.outlier.tau_mad << "\n"
    << "knn_first = " << (c.outlier.knn_first ? "true" : "false") << "\n"
    << "reattach = " << (c.reattach ? "true" : "false") << "\n"
    << "window = " << c.window << "\n"
    << "overlap = " << c.overlap << "\n"
    << "dedup_tolerance = " << c.dedup_tolerance << "\n"
    << "headway_mode = " << (c.headway_mode == HeadwayMode::ArrivalToArrival ? "arrival" : "departure") << "\n"
    << "incident_window = " << c.incident.window << "\n"
    << "incident_threshold = " << c.incident.threshold << "\n"
    << "incident_floor = " << c.incident.sigma_floor << "\n"
    << "line_length = " << c.line_length << "\n"
    << "excluded_stations = ";
  for (std::size_t i = 0; i < c.excluded_stations.size(); ++i) s << (i ? "," : "") << c.excluded_stations[i];
  s << "\n"
    << "seed = " << c.seed << "\n";
  out << s.str();
}

std::string config_hash(const PipelineConfig& config) {
  std::ostringstream s;
  write_config(s, config);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s.str()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace wtt
