#include "wtt/pipeline.hpp"

#include <algorithm>
#include <map>
#include <ostream>

#include <json.hpp>

#include "wtt/baseline.hpp"
#include "wtt/outlier.hpp"
#include "wtt/similarity.hpp"
#include "wtt/spectral.hpp"

namespace wtt {

namespace {

// Journeys of one window and direction, as indices into the file.
struct Group {
  int window = 0;
  int direction = 1;
  std::vector<std::size_t> members;
};

// Single-leg journeys carry no direction; they join the window's only
// direction and are left out when both directions are present.
std::vector<Group> window_groups(const JourneyFile& journeys, const PipelineConfig& config) {
  const auto& ex = config.excluded_stations;
  auto has_station = [&](const Journey& j) {
    return std::any_of(j.legs.begin(), j.legs.end(),
                       [&](const Leg& l) { return std::find(ex.begin(), ex.end(), l.station) == ex.end(); });
  };
  std::vector<Group> out;
  if (journeys.journeys.empty()) return out;
  Timestamp lo = journeys.journeys.front().start(), hi = journeys.journeys.front().end();
  for (const auto& j : journeys.journeys) {
    lo = std::min(lo, j.start());
    hi = std::max(hi, j.end());
  }
  const auto windows = make_windows(lo, hi, config.window, config.overlap);
  for (std::size_t w = 0; w < windows.size(); ++w) {
    std::vector<std::size_t> up, down, either;
    for (std::size_t i = 0; i < journeys.journeys.size(); ++i) {
      const Journey& j = journeys.journeys[i];
      if (j.start() < windows[w].begin || j.end() >= windows[w].end) continue;
      if (!has_station(j)) continue;
      (j.direction > 0 ? up : j.direction < 0 ? down : either).push_back(i);
    }
    if (down.empty()) up.insert(up.end(), either.begin(), either.end());
    else if (up.empty()) down.insert(down.end(), either.begin(), either.end());
    for (auto& i : {&up, &down})
      std::sort(i->begin(), i->end());
    if (!up.empty()) out.push_back({static_cast<int>(w), 1, std::move(up)});
    if (!down.empty()) out.push_back({static_cast<int>(w), -1, std::move(down)});
  }
  return out;
}

SimilarityGraph group_graph(const JourneyFile& journeys, const Group& g, int line_length,
                            const PipelineConfig& config) {
  const auto stations = station_set(line_length, config.excluded_stations);
  std::vector<JourneyVector> vectors;
  vectors.reserve(g.members.size());
  for (std::size_t i : g.members) vectors.push_back(vectorize(journeys.journeys[i], stations));
  return build_graph(vectors, config.metric(), {config.soft_cutoff});
}

void emit_legs(const Journey& j, int id, int label, int window, std::vector<LabeledRecord>& out) {
  for (const auto& leg : j.legs) {
    out.push_back({j.device, leg.station, leg.first, label, id, window});
    if (leg.last != leg.first) out.push_back({j.device, leg.station, leg.last, label, id, window});
  }
}

}  // namespace

JourneyLevels build_journey_levels(std::span<const WifiRecord> records, const JourneyParams& params) {
  params.validate();
  JourneyLevels out;
  out.raw.journeys = journeys_from_records(records, params);
  for (std::size_t i = 0; i < out.raw.journeys.size(); ++i) {
    const int id = static_cast<int>(i);
    out.raw.ids.push_back(id);
    if (auto j = apply_cleaning(out.raw.journeys[i], CleaningLevel::TrimExtremes)) {
      out.level2.ids.push_back(id);
      out.level2.journeys.push_back(std::move(*j));
    }
    if (auto j = apply_cleaning(out.raw.journeys[i], CleaningLevel::DropEnds)) {
      out.level3.ids.push_back(id);
      out.level3.journeys.push_back(std::move(*j));
    }
  }
  return out;
}

std::vector<Window> make_windows(Timestamp from, Timestamp to, Timestamp length, Timestamp overlap) {
  if (length <= 0 || overlap < 0 || overlap >= length) throw ConfigError("windows: need 0 <= overlap < length");
  std::vector<Window> out;
  for (Timestamp begin = from;; begin += length - overlap) {
    out.push_back({begin, begin + length});
    if (begin + length > to) break;
  }
  return out;
}

int line_length_of(const JourneyFile& journeys, const PipelineConfig& config) {
  int top = -1;
  for (const auto& j : journeys.journeys)
    for (const auto& leg : j.legs) top = std::max(top, leg.station);
  if (config.line_length > 0) {
    if (top >= config.line_length)
      throw DataError("station " + std::to_string(top) + " lies beyond line_length " +
                      std::to_string(config.line_length));
    return config.line_length;
  }
  return top + 1;
}

std::vector<LabeledRecord> cluster_journeys(const JourneyFile& journeys, const PipelineConfig& config) {
  config.validate();
  const int line_length = line_length_of(journeys, config);
  auto id_of = [&](std::size_t i) { return journeys.ids.empty() ? static_cast<int>(i) : journeys.ids[i]; };

  std::vector<LabeledRecord> out;
  for (const Group& g : window_groups(journeys, config)) {
    int offset = 0;
    for (const auto& r : out)
      if (r.window == g.window) offset = std::max(offset, r.label + 1);

    if (config.method == Method::Spectral) {
      const SimilarityGraph graph = group_graph(journeys, g, line_length, config);
      SpectralParams params = config.spectral;
      params.kmeans.seed = config.seed + 2 * static_cast<std::uint64_t>(g.window) + (g.direction < 0 ? 1 : 0);
      const SpectralResult res = spectral_cluster(graph, params);
      for (std::size_t v = 0; v < g.members.size(); ++v) {
        const int label = res.clustering.labels[v];
        emit_legs(journeys.journeys[g.members[v]], id_of(g.members[v]), label < 0 ? -1 : offset + label - 1,
                  g.window, out);
      }
    } else {
      std::vector<WifiRecord> records;
      std::vector<int> owner;
      for (std::size_t i : g.members) {
        std::vector<LabeledRecord> legs;
        emit_legs(journeys.journeys[i], id_of(i), -1, g.window, legs);
        for (const auto& r : legs) {
          records.push_back({r.device, r.station, r.timestamp});
          owner.push_back(r.journey);
        }
      }
      auto labelled = baseline_cluster(records, config.dbscan, config.link, g.direction);
      for (std::size_t i = 0; i < labelled.size(); ++i) {
        labelled[i].journey = owner[i];
        labelled[i].window = g.window;
        if (labelled[i].label >= 0) labelled[i].label += offset;
        out.push_back(std::move(labelled[i]));
      }
    }
  }
  return out;
}

std::vector<double> window_spectrum(const JourneyFile& journeys, const PipelineConfig& config, int window) {
  config.validate();
  const int line_length = line_length_of(journeys, config);
  for (const Group& g : window_groups(journeys, config)) {
    if (g.window != window) continue;
    SpectralParams params = config.spectral;
    params.kmeans.seed = config.seed + 2 * static_cast<std::uint64_t>(g.window) + (g.direction < 0 ? 1 : 0);
    return spectral_cluster(group_graph(journeys, g, line_length, config), params).eigenvalues;
  }
  throw DataError("window " + std::to_string(window) + " holds no journeys");
}

std::vector<Endpoint> journey_endpoints(const JourneyFile& level2) {
  std::vector<Endpoint> out;
  for (std::size_t i = 0; i < level2.journeys.size(); ++i) {
    const Journey& j = level2.journeys[i];
    if (j.legs.size() < 2) continue;
    const int id = level2.ids.empty() ? static_cast<int>(i) : level2.ids[i];
    out.push_back({id, j.legs.front().station, j.legs.front().last, true});
    out.push_back({id, j.legs.back().station, j.legs.back().first, false});
  }
  return out;
}

TimetableOutput build_timetable(std::span<const LabeledRecord> labels, std::span<const Endpoint> endpoints,
                                const PipelineConfig& config) {
  config.validate();
  std::map<int, std::vector<LabeledRecord>> by_window;
  for (const auto& r : labels) by_window[r.window].push_back(r);

  std::vector<TrainTimetable> all;
  for (const auto& [w, records] : by_window) {
    const auto clean = remove_outliers(records, config.outlier);
    auto trains = derive_timetable(clean, endpoints, 0);
    for (auto& t : trains) all.push_back(std::move(t));
  }

  TimetableOutput out;
  out.trains = merge_timetables(std::move(all), config.dedup_tolerance);

  std::map<int, bool> stations;
  bool reverse = false;
  for (const auto& t : out.trains) {
    reverse = reverse || t.direction < 0;
    for (const auto& s : t.stops) stations[s.station] = true;
  }
  for (int dir : {1, -1}) {
    if (dir < 0 && !reverse) break;
    std::vector<TrainTimetable> subset;
    for (const auto& t : out.trains)
      if (t.direction == dir) subset.push_back(t);
    const std::string suffix = dir < 0 ? "_rev" : "";
    for (const auto& [s, _] : stations) {
      KpiSeries h = headways(subset, s, config.headway_mode);
      KpiSeries d = dwell_times(subset, s);
      h.kind += suffix;
      d.kind += suffix;
      for (const KpiSeries* series : {&h, &d})
        for (auto& f : detect_incidents(*series, config.incident)) out.incidents.push_back(f);
      out.kpis.push_back(std::move(h));
      out.kpis.push_back(std::move(d));
    }
  }
  return out;
}

void write_manifest(std::ostream& out, const std::string& command, const PipelineConfig& config,
                    std::span<const std::string> inputs, std::span<const std::string> outputs) {
  nlohmann::ordered_json doc;
  doc["tool"] = "wtt";
  doc["version"] = kVersion;
  doc["command"] = command;
  doc["config_hash"] = config_hash(config);
  doc["seed"] = config.seed;
  doc["inputs"] = std::vector<std::string>(inputs.begin(), inputs.end());
  doc["outputs"] = std::vector<std::string>(outputs.begin(), outputs.end());
  out << doc.dump(2) << '\n';
}

}  // namespace wtt
