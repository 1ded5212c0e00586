#include "wtt/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <json.hpp>

namespace wtt {

namespace {

std::vector<Timestamp> arrivals_at(std::span<const TrainTimetable> trains, int station) {
  std::vector<Timestamp> out;
  for (const auto& t : trains)
    if (const StationTime* s = t.stop_at(station)) out.push_back(s->arrival);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

EvalReport evaluate(std::span<const TrainTimetable> estimated, std::span<const TrainTimetable> truth, int station,
                    Timestamp tolerance) {
  const auto est = arrivals_at(estimated, station);
  const auto ref = arrivals_at(truth, station);
  EvalReport r;
  r.station = station;
  r.estimated_trains = static_cast<int>(est.size());
  r.true_trains = static_cast<int>(ref.size());
  if (est.size() != ref.size() || est.empty()) return r;
  double sq = 0.0;
  for (std::size_t i = 0; i < est.size(); ++i) {
    const Timestamp err = est[i] - ref[i];
    if (std::abs(err) <= tolerance) ++r.hits;
    sq += static_cast<double>(err) * static_cast<double>(err);
  }
  const double n = static_cast<double>(est.size());
  r.hit_rate = r.hits / n;
  r.rmse_minutes = std::sqrt(sq / n) / 60.0;
  return r;
}

void write_report(std::ostream& out, std::span<const EvalReport> reports, int estimated_trains, int true_trains) {
  nlohmann::ordered_json doc;
  doc["estimated_trains"] = estimated_trains;
  doc["true_trains"] = true_trains;
  doc["stations"] = nlohmann::ordered_json::array();
  for (const auto& r : reports) {
    nlohmann::ordered_json s;
    s["station"] = r.station;
    s["estimated_trains"] = r.estimated_trains;
    s["true_trains"] = r.true_trains;
    s["hits"] = r.hits;
    s["hit_rate"] = r.hit_rate ? nlohmann::ordered_json(*r.hit_rate) : nlohmann::ordered_json(nullptr);
    s["rmse_minutes"] = r.rmse_minutes ? nlohmann::ordered_json(*r.rmse_minutes) : nlohmann::ordered_json(nullptr);
    doc["stations"].push_back(std::move(s));
  }
  out << doc.dump(2) << '\n';
}

}  // namespace wtt
