#ifndef WTT_EVALUATE_HPP
#define WTT_EVALUATE_HPP

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "wtt/timetable.hpp"

namespace wtt {

struct EvalReport {
  int station = 0;
  int estimated_trains = 0;
  int true_trains = 0;
  int hits = 0;
  // Only defined when both sides serve the station with the same train count.
  std::optional<double> hit_rate;
  std::optional<double> rmse_minutes;
};

// Trains serving `station` are matched one-to-one in arrival order when the
// counts agree; a hit is an arrival error within `tolerance` seconds.
EvalReport evaluate(std::span<const TrainTimetable> estimated, std::span<const TrainTimetable> truth, int station,
                    Timestamp tolerance = 60);

// JSON document with overall train counts and one entry per report;
// undefined rates are written as null.
void write_report(std::ostream& out, std::span<const EvalReport> reports, int estimated_trains, int true_trains);

}  // namespace wtt

#endif
