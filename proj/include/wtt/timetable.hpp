#ifndef WTT_TIMETABLE_HPP
#define WTT_TIMETABLE_HPP

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "wtt/labeled.hpp"

namespace wtt {

struct StationTime {
  int station = 0;
  Timestamp arrival = 0;
  Timestamp departure = 0;
  bool observed = true;  // false for interpolated entries
  int support = 0;       // member records behind the entry

  friend bool operator==(const StationTime&, const StationTime&) = default;
};

// Stops are listed in travel order and cover a contiguous station range.
struct TrainTimetable {
  int train_id = 0;
  int direction = 1;
  std::vector<StationTime> stops;

  const StationTime* stop_at(int station) const;
  Timestamp first_departure() const { return stops.front().departure; }
  int support() const;
};

// Boarding or alighting sighting of a journey, used for reattachment.
struct Endpoint {
  int journey = -1;
  int station = 0;
  Timestamp timestamp = 0;
  bool boarding = true;
};

// Envelope of each cluster: arrival = min, departure = max of its member
// timestamps per station. `endpoints` are boarding/alighting sightings tagged
// with the journey they come from; an endpoint is attached to the train whose
// members share its journey id, and only at stations beyond the range the
// members cover (interior gaps are interpolated instead). Trains with fewer than two observed stations are dropped.
// Output is ordered by first departure, train ids 1.. in that order. With
// direction 0 each train's direction is read off its earliest and latest stop.
std::vector<TrainTimetable> derive_timetable(std::span<const LabeledRecord> records,
                                             std::span<const Endpoint> endpoints, int direction = 1);

// Fills unobserved interior stations by linear interpolation between the
// departure of the previous observed stop and the arrival of the next one;
// interpolated stops have arrival == departure. Observed stops that break the
// time order (arrival not after the previous observed departure) are demoted
// and re-interpolated. Returns false when fewer than two observed stops remain.
bool interpolate_missing(TrainTimetable& train);

// Merges timetables of overlapping windows. Two trains are the same when they
// share observed stations and the median arrival difference over them,
// weighted by the smaller support, is within `tolerance`; shared stations keep the entry with more support, others are
// united. Result is renumbered by first departure.
std::vector<TrainTimetable> merge_timetables(std::vector<TrainTimetable> trains, Timestamp tolerance = 60);

enum class HeadwayMode { ArrivalToArrival, DepartureToNextArrival };

struct KpiValue {
  int train_id = 0;  // follower for headways
  Timestamp time = 0;  // arrival of the leading train (headway) or of the train (dwell)
  double value = 0.0;  // seconds
};

struct KpiSeries {
  int station = 0;
  std::string kind;  // "headway" or "dwell"
  std::vector<KpiValue> values;
};

// Consecutive arrivals at `station`. A pair is skipped when a train of the same
// direction runs between them at another station but has no stop here, unless
// the pair's gap grew by more than 60 s since that station or the stop ranges
// allow that train to be a piece of the leader or the follower.
KpiSeries headways(std::span<const TrainTimetable> trains, int station,
                   HeadwayMode mode = HeadwayMode::ArrivalToArrival);
// Observed stops only.
KpiSeries dwell_times(std::span<const TrainTimetable> trains, int station);

struct IncidentFlag {
  int station = 0;
  Timestamp time = 0;
  double value = 0.0;
  double zscore = 0.0;
};

struct IncidentParams {
  int window = 10;
  double threshold = 3.5;
  double sigma_floor = 60.0;  // seconds

  void validate() const;
};

// Robust z-score of each value against the `window` values before it:
// |x - median| / max(1.4826 MAD, sigma_floor).
std::vector<IncidentFlag> detect_incidents(const KpiSeries& series, const IncidentParams& params);

// CSV `train_id,station,arrival,departure,observed`.
void write_timetable(std::ostream& out, std::span<const TrainTimetable> trains);
std::vector<TrainTimetable> read_timetable(std::istream& in);
// CSV `station,kind,train_id,value_seconds`.
void write_kpis(std::ostream& out, std::span<const KpiSeries> series);
// CSV `station,time,value_seconds,zscore`.
void write_incidents(std::ostream& out, std::span<const IncidentFlag> flags);

}  // namespace wtt

#endif
