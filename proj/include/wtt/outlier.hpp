#ifndef WTT_OUTLIER_HPP
#define WTT_OUTLIER_HPP

#include <span>
#include <vector>

#include "wtt/labeled.hpp"

namespace wtt {

// Normal-consistency factor 1 / Phi^-1(3/4).
inline constexpr double kMadToSigma = 1.4826;

double median(std::span<const double> values);
// Median absolute deviation from the median. DataError on empty input.
double mad(std::span<const double> values);
double mad_sigma(std::span<const double> values);

struct OutlierParams {
  int k_neighbors = 5;
  double tau_mad = 3.5;
  bool knn_first = true;

  void validate() const;
};

// Type-1 filter. Per station, each record takes the majority label of its k
// nearest other records by |dt|; a record is dropped when that majority
// disagrees with its own label. Majority ties keep the record. Input order is
// preserved; records labelled -1 are dropped.
std::vector<LabeledRecord> knn_filter(std::span<const LabeledRecord> records, int k);

// Type-2 filter. Per (station, label), drops records with
// |t - median| >= tau * 1.4826 * MAD. When MAD is 0 only records off the
// median are dropped; singleton groups are kept.
std::vector<LabeledRecord> mad_filter(std::span<const LabeledRecord> records, double tau);

// Both filters in the configured order.
std::vector<LabeledRecord> remove_outliers(std::span<const LabeledRecord> records, const OutlierParams& params);

}  // namespace wtt

#endif
