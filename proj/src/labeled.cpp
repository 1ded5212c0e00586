#include "wtt/labeled.hpp"

#include <istream>
#include <ostream>
#include <sstream>

namespace wtt {

void write_labeled(std::ostream& out, std::span<const LabeledRecord> records) {
  out << "device,station,timestamp,label,journey,window\n";
  for (const auto& r : records)
    out << r.device << ',' << r.station << ',' << r.timestamp << ',' << r.label << ',' << r.journey << ','
        << r.window << '\n';
}

std::vector<LabeledRecord> read_labeled(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("device,station,timestamp,label", 0) != 0)
    throw DataError("labels: expected header 'device,station,timestamp,label,journey,window'");
  std::vector<LabeledRecord> out;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ss(line);
    LabeledRecord r;
    std::string field;
    try {
      std::getline(ss, r.device, ',');
      std::getline(ss, field, ',');
      r.station = std::stoi(field);
      std::getline(ss, field, ',');
      r.timestamp = std::stoll(field);
      std::getline(ss, field, ',');
      r.label = std::stoi(field);
      if (std::getline(ss, field, ',')) r.journey = std::stoi(field);
      if (std::getline(ss, field, ',')) r.window = std::stoi(field);
    } catch (const std::exception&) {
      throw DataError("labels line " + std::to_string(lineno) + ": malformed");
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace wtt
