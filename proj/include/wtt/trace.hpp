#ifndef WTT_TRACE_HPP
#define WTT_TRACE_HPP

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "wtt/common.hpp"

namespace wtt {

// One probe-request observation. `station` is the 0-based position along the line.
struct WifiRecord {
  std::string device;
  int station = 0;
  Timestamp timestamp = 0;

  friend bool operator==(const WifiRecord&, const WifiRecord&) = default;
};

// First and last sighting of a device during one contiguous stay at a station.
struct ExtremityRecord {
  std::string device;
  int station = 0;
  Timestamp first = 0;
  Timestamp last = 0;

  friend bool operator==(const ExtremityRecord&, const ExtremityRecord&) = default;
};

struct ParseResult {
  std::vector<WifiRecord> records;
  std::size_t malformed = 0;
};

// Reads the `device,station,timestamp` CSV. Throws DataError if the header is
// missing or wrong; malformed body lines are skipped and counted.
ParseResult parse_records(std::istream& in);
void write_records(std::ostream& out, std::span<const WifiRecord> records);

// Half-open index range [begin, end) into a device's time-sorted records.
struct RunSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
};

// Splits a device's sorted records into contiguous same-station runs. A run is
// also broken when two consecutive sightings are more than `split_gap` apart.
std::vector<RunSpan> station_runs(std::span<const WifiRecord> records,
                                  Timestamp split_gap = std::numeric_limits<Timestamp>::max());

// One extremity per run. Records must be sorted by timestamp (DataError otherwise).
std::vector<ExtremityRecord> reduce_extremities(std::span<const WifiRecord> records,
                                                std::span<const RunSpan> runs);

// Records of one device, time-sorted with exact duplicates removed.
struct DeviceTrace {
  std::string device;
  std::vector<WifiRecord> records;
};

// Groups by device (lexicographic device order), sorts each group by time and
// drops exact duplicates.
std::vector<DeviceTrace> group_by_device(std::span<const WifiRecord> records);

}  // namespace wtt

#endif
