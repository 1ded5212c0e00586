#ifndef WTT_JOURNEY_HPP
#define WTT_JOURNEY_HPP

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wtt/common.hpp"
#include "wtt/trace.hpp"

namespace wtt {

// Gap caps for tau-journey segmentation, in seconds.
struct JourneyParams {
  Timestamp tau1 = 480;   // max span of sightings at one station
  Timestamp tau2 = 1800;  // max span between sightings at different stations

  void validate() const;
};

struct Leg {
  int station = 0;
  Timestamp first = 0;
  Timestamp last = 0;

  Timestamp midpoint_x2() const { return first + last; }
  friend bool operator==(const Leg&, const Leg&) = default;
};

// A tau-journey. Legs are ordered by time; station indices move strictly in
// `direction` (+1/-1), or direction is 0 for a single-leg journey.
struct Journey {
  std::string device;
  int direction = 0;
  std::vector<Leg> legs;

  Timestamp start() const { return legs.front().first; }
  Timestamp end() const { return legs.back().last; }
  int boarding_station() const { return legs.front().station; }
  int alighting_station() const { return legs.back().station; }

  friend bool operator==(const Journey&, const Journey&) = default;
};

enum class CleaningLevel { Raw, TrimExtremes, DropEnds };

// Greedy left-to-right segmentation of one device's extremities (sorted by
// `first`). A new journey starts whenever the next sighting would break
// intra-station span, inter-station span or direction monotonicity.
std::vector<Journey> extract_journeys(std::span<const ExtremityRecord> extremities,
                                      const JourneyParams& params);

// Full chain for a record set: group by device, split runs (at gaps > tau1),
// reduce to extremities, segment. Output ordered by device, then time.
std::vector<Journey> journeys_from_records(std::span<const WifiRecord> records,
                                           const JourneyParams& params);

// Raw: identity. TrimExtremes: boarding leg collapses to its last sighting and
// alighting leg to its first. DropEnds: boarding and alighting legs removed;
// nullopt when nothing is left.
std::optional<Journey> apply_cleaning(const Journey& journey, CleaningLevel level);

// Mean observed-station ratio per (boarding, alighting) pair. Cells with
// |i - j| <= 1 and cells without journeys are masked (nullopt).
class CoverageMatrix {
 public:
  explicit CoverageMatrix(int line_length);

  int size() const { return n_; }
  std::optional<double> at(int boarding, int alighting) const;
  // Unweighted mean over unmasked cells; nullopt when every cell is masked.
  std::optional<double> mean() const;

  void add(int boarding, int alighting, double ratio);

 private:
  int n_;
  std::vector<double> sum_;
  std::vector<int> count_;
};

CoverageMatrix coverage_ratio_matrix(std::span<const Journey> journeys, int line_length);

// JSON lines: {"id":..,"device":..,"direction":..,"legs":[[station,first,last],..]}.
// `ids` may be empty, in which case line position is used.
void write_journeys(std::ostream& out, std::span<const Journey> journeys,
                    std::span<const int> ids = {});
struct JourneyFile {
  std::vector<int> ids;
  std::vector<Journey> journeys;
};
JourneyFile read_journeys(std::istream& in);

}  // namespace wtt

#endif
