#include "wtt/baseline.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <unordered_map>

namespace wtt {

void DbscanParams::validate() const {
  if (!(epsilon > 0.0)) throw ConfigError("dbscan: epsilon must be > 0");
  if (min_samples < 1) throw ConfigError("dbscan: min_samples must be >= 1");
}

std::vector<int> dbscan_1d(std::span<const Timestamp> ts, const DbscanParams& params) {
  params.validate();
  const std::size_t n = ts.size();
  for (std::size_t i = 1; i < n; ++i)
    if (ts[i] < ts[i - 1]) throw DataError("dbscan_1d: timestamps not sorted");

  std::vector<bool> core(n, false);
  std::size_t lo = 0, hi = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (static_cast<double>(ts[i] - ts[lo]) > params.epsilon) ++lo;
    if (hi < i) hi = i;
    while (hi + 1 < n && static_cast<double>(ts[hi + 1] - ts[i]) <= params.epsilon) ++hi;
    core[i] = static_cast<int>(hi - lo + 1) >= params.min_samples;
  }

  std::vector<int> labels(n, -1);
  int cluster = -1;
  std::ptrdiff_t last_core = -1;
  for (std::size_t i = 0; i < n; ++i) {
    if (!core[i]) continue;
    if (last_core < 0 || static_cast<double>(ts[i] - ts[last_core]) > params.epsilon) ++cluster;
    labels[i] = cluster;
    last_core = static_cast<std::ptrdiff_t>(i);
  }

  // Border points: nearest core within epsilon.
  std::ptrdiff_t prev_core = -1;
  std::vector<std::ptrdiff_t> next_core(n, -1);
  for (std::ptrdiff_t i = static_cast<std::ptrdiff_t>(n) - 1, nc = -1; i >= 0; --i) {
    next_core[i] = nc;
    if (core[i]) nc = i;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (core[i]) {
      prev_core = static_cast<std::ptrdiff_t>(i);
      continue;
    }
    const double dp = prev_core >= 0 ? static_cast<double>(ts[i] - ts[prev_core]) : -1.0;
    const double dn = next_core[i] >= 0 ? static_cast<double>(ts[next_core[i]] - ts[i]) : -1.0;
    const bool p_ok = dp >= 0.0 && dp <= params.epsilon;
    const bool n_ok = dn >= 0.0 && dn <= params.epsilon;
    if (p_ok && (!n_ok || dp <= dn))
      labels[i] = labels[prev_core];
    else if (n_ok)
      labels[i] = labels[next_core[i]];
  }
  return labels;
}

std::vector<LabeledRecord> baseline_cluster(std::span<const WifiRecord> records, const DbscanParams& params,
                                            const LinkWindow& link, int direction) {
  params.validate();
  if (link.min_gap < 0 || link.min_gap > link.max_gap) throw ConfigError("baseline: invalid link window");

  std::vector<LabeledRecord> out(records.size());
  std::map<int, std::vector<std::size_t>> by_station;
  for (std::size_t i = 0; i < records.size(); ++i) {
    out[i] = {records[i].device, records[i].station, records[i].timestamp, -1, -1, 0};
    by_station[records[i].station].push_back(i);
  }
  std::vector<int> stations;
  for (const auto& [s, _] : by_station) stations.push_back(s);
  if (direction < 0) std::reverse(stations.begin(), stations.end());

  struct Sighting {
    Timestamp t;
    int label;
  };
  std::unordered_map<std::string, std::vector<Sighting>> previous;
  int next_label = 0;

  for (int s : stations) {
    auto& idx = by_station[s];
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return records[a].timestamp < records[b].timestamp; });
    std::vector<Timestamp> ts(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) ts[i] = records[idx[i]].timestamp;
    const std::vector<int> cl = dbscan_1d(ts, params);
    const int clusters = cl.empty() ? 0 : *std::max_element(cl.begin(), cl.end()) + 1;

    std::vector<std::map<int, int>> votes(clusters);
    for (std::size_t i = 0; i < idx.size(); ++i) {
      if (cl[i] < 0) continue;
      const auto& r = records[idx[i]];
      auto it = previous.find(r.device);
      if (it == previous.end()) continue;
      const Sighting* best = nullptr;
      for (const auto& p : it->second) {
        const Timestamp gap = r.timestamp - p.t;
        if (gap < link.min_gap || gap > link.max_gap) continue;
        if (!best || gap < r.timestamp - best->t) best = &p;
      }
      if (best) ++votes[cl[i]][best->label];
    }

    std::vector<int> train(clusters);
    for (int c = 0; c < clusters; ++c) {
      int chosen = -1, count = 0;
      for (const auto& [label, n] : votes[c])  // ascending label: ties keep the older train
        if (n > count) chosen = label, count = n;
      train[c] = chosen >= 0 ? chosen : next_label++;
    }

    std::unordered_map<std::string, std::vector<Sighting>> current;
    for (std::size_t i = 0; i < idx.size(); ++i) {
      if (cl[i] < 0) continue;
      out[idx[i]].label = train[cl[i]];
      current[records[idx[i]].device].push_back({records[idx[i]].timestamp, train[cl[i]]});
    }
    if (!current.empty()) previous = std::move(current);
  }
  return out;
}

}  // namespace wtt
