#ifndef WTT_BASELINE_HPP
#define WTT_BASELINE_HPP

#include <span>
#include <vector>

#include "wtt/labeled.hpp"
#include "wtt/trace.hpp"

namespace wtt {

// Default eps is 6 seconds; the right value depends strongly on the data.
struct DbscanParams {
  double epsilon = 6.0;  // seconds
  int min_samples = 10;

  void validate() const;
};

// DBSCAN on sorted 1-D timestamps. A core point has at least min_samples
// points (itself included) within +-epsilon. Clusters are numbered 0.. in time
// order; noise is -1. Border points join the nearest core (earlier on ties).
std::vector<int> dbscan_1d(std::span<const Timestamp> sorted_timestamps, const DbscanParams& params);

// Window in which a same-device sighting at the preceding station links a
// record to that station's train label.
struct LinkWindow {
  Timestamp min_gap = 0;
  Timestamp max_gap = 1800;
};

// Station-wise clustering: stations are processed in increasing order
// (decreasing when direction < 0). Each DBSCAN cluster takes the majority
// label of its records' links to the previous non-empty station, or a fresh
// label when nothing links. Output is aligned with the input order.
std::vector<LabeledRecord> baseline_cluster(std::span<const WifiRecord> records, const DbscanParams& params,
                                            const LinkWindow& link, int direction = 1);

}  // namespace wtt

#endif
