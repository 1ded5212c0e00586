#ifndef WTT_LABELED_HPP
#define WTT_LABELED_HPP

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "wtt/common.hpp"

namespace wtt {

// A sighting carrying a train (cluster) label; -1 marks outliers. `journey`
// refers back to the journey the sighting came from (-1 when unknown) and
// `window` to the processing window that produced the label.
struct LabeledRecord {
  std::string device;
  int station = 0;
  Timestamp timestamp = 0;
  int label = -1;
  int journey = -1;
  int window = 0;

  friend bool operator==(const LabeledRecord&, const LabeledRecord&) = default;
};

// CSV `device,station,timestamp,label,journey,window`.
void write_labeled(std::ostream& out, std::span<const LabeledRecord> records);
std::vector<LabeledRecord> read_labeled(std::istream& in);

}  // namespace wtt

#endif
