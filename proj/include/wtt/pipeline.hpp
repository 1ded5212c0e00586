#ifndef WTT_PIPELINE_HPP
#define WTT_PIPELINE_HPP

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "wtt/config.hpp"
#include "wtt/journey.hpp"
#include "wtt/labeled.hpp"
#include "wtt/timetable.hpp"

namespace wtt {

// Journeys at the three cleaning levels. Ids refer to the raw journey; a
// journey emptied by DropEnds is missing from `level3`.
struct JourneyLevels {
  JourneyFile raw;
  JourneyFile level2;
  JourneyFile level3;
};

JourneyLevels build_journey_levels(std::span<const WifiRecord> records, const JourneyParams& params);

struct Window {
  Timestamp begin = 0;
  Timestamp end = 0;  // exclusive
};

// Windows of length `length` starting at `from`, stepping length - overlap,
// until one reaches past `to`.
std::vector<Window> make_windows(Timestamp from, Timestamp to, Timestamp length, Timestamp overlap);

// One past the largest station in `journeys`, unless the config fixes it.
int line_length_of(const JourneyFile& journeys, const PipelineConfig& config);

// Clusters every window separately, per direction. Spectral mode expects
// level-3 journeys, baseline mode level-2 journeys. Each leg contributes its
// first and last sighting as a labelled record; labels are unique per window.
std::vector<LabeledRecord> cluster_journeys(const JourneyFile& journeys, const PipelineConfig& config);

// Smallest eigenvalues of one window's similarity graph (direction +1, or the
// only direction present).
std::vector<double> window_spectrum(const JourneyFile& journeys, const PipelineConfig& config, int window = 0);

// Boarding (last sighting) and alighting (first sighting) of each multi-leg
// journey.
std::vector<Endpoint> journey_endpoints(const JourneyFile& level2);

struct TimetableOutput {
  std::vector<TrainTimetable> trains;
  std::vector<KpiSeries> kpis;
  std::vector<IncidentFlag> incidents;
};

// Outlier removal and envelope per window, then cross-window merge, KPIs and
// incident flags (headway and dwell series at every station).
TimetableOutput build_timetable(std::span<const LabeledRecord> labels, std::span<const Endpoint> endpoints,
                                const PipelineConfig& config);

void write_manifest(std::ostream& out, const std::string& command, const PipelineConfig& config,
                    std::span<const std::string> inputs, std::span<const std::string> outputs);

}  // namespace wtt

#endif
