#include "wtt/trace.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <map>
#include <ostream>
#include <string_view>

namespace wtt {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  return s;
}

template <typename T>
bool parse_int(std::string_view s, T& out) {
  s = trim(s);
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

ParseResult parse_records(std::istream& in) {
  ParseResult result;
  std::string line;
  if (!std::getline(in, line)) throw DataError("trace: missing header line");
  if (trim(line) != "device,station,timestamp")
    throw DataError("trace: expected header 'device,station,timestamp', got '" + line + "'");

  while (std::getline(in, line)) {
    std::string_view view = trim(line);
    if (view.empty()) continue;
    auto c1 = view.find(',');
    auto c2 = c1 == std::string_view::npos ? c1 : view.find(',', c1 + 1);
    if (c2 == std::string_view::npos || view.find(',', c2 + 1) != std::string_view::npos) {
      ++result.malformed;
      continue;
    }
    WifiRecord r;
    r.device = std::string(trim(view.substr(0, c1)));
    if (r.device.empty() || !parse_int(view.substr(c1 + 1, c2 - c1 - 1), r.station) ||
        !parse_int(view.substr(c2 + 1), r.timestamp) || r.station < 0 || r.timestamp < 0) {
      ++result.malformed;
      continue;
    }
    result.records.push_back(std::move(r));
  }
  return result;
}

void write_records(std::ostream& out, std::span<const WifiRecord> records) {
  out << "device,station,timestamp\n";
  for (const auto& r : records) out << r.device << ',' << r.station << ',' << r.timestamp << '\n';
}

std::vector<RunSpan> station_runs(std::span<const WifiRecord> records, Timestamp split_gap) {
  std::vector<RunSpan> runs;
  std::size_t begin = 0;
  for (std::size_t i = 1; i <= records.size(); ++i) {
    if (i == records.size() || records[i].station != records[i - 1].station ||
        records[i].timestamp - records[i - 1].timestamp > split_gap) {
      if (i > begin) runs.push_back({begin, i});
      begin = i;
    }
  }
  return runs;
}

std::vector<ExtremityRecord> reduce_extremities(std::span<const WifiRecord> records,
                                                std::span<const RunSpan> runs) {
  for (std::size_t i = 1; i < records.size(); ++i)
    if (records[i].timestamp < records[i - 1].timestamp)
      throw DataError("reduce_extremities: records not sorted by timestamp");

  std::vector<ExtremityRecord> out;
  out.reserve(runs.size());
  for (const auto& run : runs) {
    if (run.begin >= run.end || run.end > records.size())
      throw DataError("reduce_extremities: run span out of range");
    const auto& head = records[run.begin];
    for (std::size_t i = run.begin + 1; i < run.end; ++i)
      if (records[i].station != head.station || records[i].device != head.device)
        throw DataError("reduce_extremities: run mixes stations or devices");
    out.push_back({head.device, head.station, head.timestamp, records[run.end - 1].timestamp});
  }
  return out;
}

std::vector<DeviceTrace> group_by_device(std::span<const WifiRecord> records) {
  std::map<std::string, std::vector<WifiRecord>> groups;
  for (const auto& r : records) groups[r.device].push_back(r);

  std::vector<DeviceTrace> out;
  out.reserve(groups.size());
  for (auto& [device, recs] : groups) {
    std::stable_sort(recs.begin(), recs.end(), [](const WifiRecord& a, const WifiRecord& b) {
      return a.timestamp != b.timestamp ? a.timestamp < b.timestamp : a.station < b.station;
    });
    recs.erase(std::unique(recs.begin(), recs.end()), recs.end());
    out.push_back({device, std::move(recs)});
  }
  return out;
}

}  // namespace wtt
