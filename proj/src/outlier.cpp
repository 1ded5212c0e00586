#include "wtt/outlier.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace wtt {

double median(std::span<const double> values) {
  if (values.empty()) throw DataError("median of empty list");
  std::vector<double> v(values.begin(), values.end());
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), v.begin() + mid);
  return 0.5 * (lower + upper);
}

double mad(std::span<const double> values) {
  if (values.empty()) throw DataError("mad of empty list");
  const double m = median(values);
  std::vector<double> dev(values.size());
  std::transform(values.begin(), values.end(), dev.begin(), [m](double x) { return std::abs(x - m); });
  return median(dev);
}

double mad_sigma(std::span<const double> values) { return kMadToSigma * mad(values); }

void OutlierParams::validate() const {
  if (k_neighbors < 1) throw ConfigError("outlier: k_neighbors must be >= 1");
  if (!(tau_mad > 0.0)) throw ConfigError("outlier: tau_mad must be > 0");
}

std::vector<LabeledRecord> knn_filter(std::span<const LabeledRecord> records, int k) {
  if (k < 1) throw ConfigError("knn_filter: k must be >= 1");
  std::map<int, std::vector<std::size_t>> by_station;
  for (std::size_t i = 0; i < records.size(); ++i)
    if (records[i].label >= 0) by_station[records[i].station].push_back(i);

  std::vector<bool> keep(records.size(), false);
  for (auto& [station, idx] : by_station) {
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return records[a].timestamp < records[b].timestamp; });
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(idx.size());
    const int want = static_cast<int>(std::min<std::ptrdiff_t>(k, n - 1));
    for (std::ptrdiff_t p = 0; p < n; ++p) {
      const Timestamp t = records[idx[p]].timestamp;
      std::map<int, int> votes;
      std::ptrdiff_t left = p - 1, right = p + 1;
      for (int taken = 0; taken < want; ++taken) {
        const bool has_left = left >= 0, has_right = right < n;
        bool take_left;
        if (has_left && has_right)
          take_left = t - records[idx[left]].timestamp <= records[idx[right]].timestamp - t;
        else
          take_left = has_left;
        ++votes[records[idx[take_left ? left-- : right++]].label];
      }
      if (votes.empty()) {
        keep[idx[p]] = true;
        continue;
      }
      int best = 0, winners = 0, winner = -1;
      for (const auto& [label, count] : votes) {
        if (count > best) best = count, winners = 1, winner = label;
        else if (count == best) ++winners;
      }
      keep[idx[p]] = winners > 1 || winner == records[idx[p]].label;
    }
  }

  std::vector<LabeledRecord> out;
  for (std::size_t i = 0; i < records.size(); ++i)
    if (keep[i]) out.push_back(records[i]);
  return out;
}

std::vector<LabeledRecord> mad_filter(std::span<const LabeledRecord> records, double tau) {
  if (!(tau > 0.0)) throw ConfigError("mad_filter: tau must be > 0");
  std::map<std::pair<int, int>, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < records.size(); ++i)
    if (records[i].label >= 0) groups[{records[i].station, records[i].label}].push_back(i);

  std::vector<bool> keep(records.size(), false);
  for (const auto& [key, idx] : groups) {
    std::vector<double> t(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) t[i] = static_cast<double>(records[idx[i]].timestamp);
    const double center = median(t);
    const double sigma = mad_sigma(t);
    for (std::size_t i = 0; i < idx.size(); ++i) {
      const double dev = std::abs(t[i] - center);
      keep[idx[i]] = idx.size() == 1 || (sigma > 0.0 ? dev < tau * sigma : dev == 0.0);
    }
  }

  std::vector<LabeledRecord> out;
  for (std::size_t i = 0; i < records.size(); ++i)
    if (keep[i]) out.push_back(records[i]);
  return out;
}

std::vector<LabeledRecord> remove_outliers(std::span<const LabeledRecord> records, const OutlierParams& params) {
  params.validate();
  if (params.knn_first) {
    auto a = knn_filter(records, params.k_neighbors);
    return mad_filter(a, params.tau_mad);
  }
  auto a = mad_filter(records, params.tau_mad);
  return knn_filter(a, params.k_neighbors);
}

}  // namespace wtt
