// wtt: train timetables from WiFi probe traces.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "wtt/config.hpp"
#include "wtt/evaluate.hpp"
#include "wtt/pipeline.hpp"
#include "wtt/simulate.hpp"

namespace fs = std::filesystem;
using namespace wtt;

namespace {

struct Options {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string method;
  long long seed = -1;
  std::string out_dir = ".";
};

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  return in;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << content;
}

template <typename F>
std::string render(F&& f) {
  std::ostringstream s;
  f(s);
  return s.str();
}

PipelineConfig load_config(const Options& o) {
  PipelineConfig c;
  if (!o.config_path.empty()) {
    auto in = open_in(o.config_path);
    c = read_config(in);
  }
  for (const auto& kv : o.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
    apply_setting(c, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (!o.method.empty()) apply_setting(c, "method", o.method);
  if (o.seed >= 0) c.seed = static_cast<std::uint64_t>(o.seed);
  c.validate();
  return c;
}

std::vector<WifiRecord> load_records(const std::string& path) {
  auto in = open_in(path);
  auto parsed = parse_records(in);
  if (parsed.malformed > 0) std::cerr << "warning: skipped " << parsed.malformed << " malformed lines in " << path << "\n";
  return std::move(parsed.records);
}

JourneyFile load_journeys(const std::string& path) {
  auto in = open_in(path);
  return read_journeys(in);
}

void manifest(const Options& o, const std::string& command, const PipelineConfig& c,
              std::vector<std::string> inputs, std::vector<std::string> outputs) {
  write_file(fs::path(o.out_dir) / ("manifest_" + command + ".json"),
             render([&](std::ostream& s) { write_manifest(s, command, c, inputs, outputs); }));
}

// Each stage returns the files it wrote so `pipeline` can chain them.
std::vector<std::string> run_journeys(const Options& o, const std::vector<WifiRecord>& records,
                                      const PipelineConfig& c) {
  const auto levels = build_journey_levels(records, c.journey);
  const std::pair<const char*, const JourneyFile*> files[] = {
      {"journeys_raw.jsonl", &levels.raw}, {"journeys_l2.jsonl", &levels.level2}, {"journeys_l3.jsonl", &levels.level3}};
  std::vector<std::string> out;
  for (const auto& [name, file] : files) {
    write_file(fs::path(o.out_dir) / name,
               render([&](std::ostream& s) { write_journeys(s, file->journeys, file->ids); }));
    out.push_back(name);
  }
  return out;
}

std::string default_journeys(const PipelineConfig& c) {
  return c.method == Method::Spectral ? "journeys_l3.jsonl" : "journeys_l2.jsonl";
}

void run_cluster(const Options& o, const JourneyFile& journeys, const PipelineConfig& c) {
  const auto labels = cluster_journeys(journeys, c);
  write_file(fs::path(o.out_dir) / "labels.csv", render([&](std::ostream& s) { write_labeled(s, labels); }));
}

TimetableOutput run_timetable(const Options& o, const std::vector<LabeledRecord>& labels,
                              const std::string& level2_path, const PipelineConfig& c) {
  std::vector<Endpoint> endpoints;
  if (c.method == Method::Spectral && c.reattach) endpoints = journey_endpoints(load_journeys(level2_path));
  auto out = build_timetable(labels, endpoints, c);
  const fs::path dir(o.out_dir);
  write_file(dir / "timetable.csv", render([&](std::ostream& s) { write_timetable(s, out.trains); }));
  write_file(dir / "kpis.csv", render([&](std::ostream& s) { write_kpis(s, out.kpis); }));
  write_file(dir / "incidents.csv", render([&](std::ostream& s) { write_incidents(s, out.incidents); }));
  return out;
}

std::vector<int> parse_stations(const std::string& list) {
  std::vector<int> out;
  std::istringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(static_cast<int>(parse_int("stations", item)));
  return out;
}

void run_evaluate(const Options& o, const std::vector<TrainTimetable>& est, const std::vector<TrainTimetable>& truth,
                  std::vector<int> stations, Timestamp tolerance) {
  if (stations.empty()) {
    std::map<int, bool> seen;
    for (const auto& t : truth)
      for (const auto& s : t.stops) seen[s.station] = true;
    for (const auto& [s, _] : seen) stations.push_back(s);
  }
  std::vector<EvalReport> reports;
  for (int s : stations) reports.push_back(evaluate(est, truth, s, tolerance));
  write_file(fs::path(o.out_dir) / "report.json", render([&](std::ostream& s) {
               write_report(s, reports, static_cast<int>(est.size()), static_cast<int>(truth.size()));
             }));
}

std::vector<TrainTimetable> load_timetable(const std::string& path) {
  auto in = open_in(path);
  return read_timetable(in);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reconstruct train timetables from WiFi probe traces"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  Options o;
  auto common = [&o](CLI::App* sub) {
    sub->add_option("-c,--config", o.config_path, "key = value config file");
    sub->add_option("--set", o.overrides, "override one config key (key=value)");
    sub->add_option("--seed", o.seed, "random seed");
    sub->add_option("-o,--out-dir", o.out_dir, "output directory")->capture_default_str();
  };

  std::string scenario_path, records_path, journeys_path, labels_path, level2_path, estimate_path, truth_path,
      stations;
  int window = 0;
  long long tolerance = 60;

  auto* sim = app.add_subcommand("simulate", "synthetic records and ground-truth timetable");
  common(sim);
  sim->add_option("scenario", scenario_path, "scenario file")->required();

  auto* jrn = app.add_subcommand("journeys", "records to journeys at all cleaning levels");
  common(jrn);
  jrn->add_option("records", records_path, "records CSV")->required();

  auto* cls = app.add_subcommand("cluster", "journeys to train labels");
  common(cls);
  cls->add_option("--method", o.method, "spectral or baseline");
  cls->add_option("journeys", journeys_path, "journeys JSONL (default: level matching the method in out-dir)");

  auto* tt = app.add_subcommand("timetable", "labels to timetable, KPIs and incidents");
  common(tt);
  tt->add_option("--method", o.method, "method that produced the labels");
  tt->add_option("labels", labels_path, "labels CSV")->required();
  tt->add_option("--level2", level2_path, "level-2 journeys for reattachment (default: out-dir)");

  auto* ev = app.add_subcommand("evaluate", "compare an estimated timetable with the truth");
  common(ev);
  ev->add_option("estimate", estimate_path, "estimated timetable CSV")->required();
  ev->add_option("truth", truth_path, "true timetable CSV")->required();
  ev->add_option("--stations", stations, "comma-separated stations (default: all)");
  ev->add_option("--tolerance", tolerance, "hit tolerance, seconds")->capture_default_str();

  auto* pipe = app.add_subcommand("pipeline", "records to timetable (and report when truth is given)");
  common(pipe);
  pipe->add_option("--method", o.method, "spectral or baseline");
  pipe->add_option("records", records_path, "records CSV")->required();
  pipe->add_option("--truth", truth_path, "true timetable CSV");
  pipe->add_option("--stations", stations, "comma-separated stations to evaluate");
  pipe->add_option("--tolerance", tolerance, "hit tolerance, seconds")->capture_default_str();

  auto* eig = app.add_subcommand("spectrum", "smallest Laplacian eigenvalues of one window");
  common(eig);
  eig->add_option("journeys", journeys_path, "journeys JSONL")->required();
  eig->add_option("--window", window, "window index")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    fs::create_directories(o.out_dir);
    const fs::path dir(o.out_dir);
    if (sim->parsed()) {
      auto in = open_in(scenario_path);
      ScenarioConfig sc = read_scenario(in);
      if (o.seed >= 0) sc.seed = static_cast<std::uint64_t>(o.seed);
      const Scenario s = simulate(sc);
      write_file(dir / "records.csv", render([&](std::ostream& out) { write_records(out, s.records); }));
      write_file(dir / "truth.csv", render([&](std::ostream& out) { write_timetable(out, s.truth); }));
      PipelineConfig c;
      c.seed = sc.seed;
      manifest(o, "simulate", c, {scenario_path}, {"records.csv", "truth.csv"});
    } else if (jrn->parsed()) {
      const PipelineConfig c = load_config(o);
      auto outs = run_journeys(o, load_records(records_path), c);
      manifest(o, "journeys", c, {records_path}, outs);
    } else if (cls->parsed()) {
      const PipelineConfig c = load_config(o);
      if (journeys_path.empty()) journeys_path = (dir / default_journeys(c)).string();
      run_cluster(o, load_journeys(journeys_path), c);
      manifest(o, "cluster", c, {journeys_path}, {"labels.csv"});
    } else if (tt->parsed()) {
      const PipelineConfig c = load_config(o);
      if (level2_path.empty()) level2_path = (dir / "journeys_l2.jsonl").string();
      auto in = open_in(labels_path);
      run_timetable(o, read_labeled(in), level2_path, c);
      manifest(o, "timetable", c, {labels_path}, {"timetable.csv", "kpis.csv", "incidents.csv"});
    } else if (ev->parsed()) {
      const PipelineConfig c = load_config(o);
      run_evaluate(o, load_timetable(estimate_path), load_timetable(truth_path), parse_stations(stations), tolerance);
      manifest(o, "evaluate", c, {estimate_path, truth_path}, {"report.json"});
    } else if (pipe->parsed()) {
      const PipelineConfig c = load_config(o);
      std::vector<std::string> outs = run_journeys(o, load_records(records_path), c);
      run_cluster(o, load_journeys((dir / default_journeys(c)).string()), c);
      std::ifstream labels_in = open_in((dir / "labels.csv").string());
      const auto out = run_timetable(o, read_labeled(labels_in), (dir / "journeys_l2.jsonl").string(), c);
      for (const char* f : {"labels.csv", "timetable.csv", "kpis.csv", "incidents.csv"}) outs.push_back(f);
      std::vector<std::string> inputs{records_path};
      if (!truth_path.empty()) {
        run_evaluate(o, out.trains, load_timetable(truth_path), parse_stations(stations), tolerance);
        outs.push_back("report.json");
        inputs.push_back(truth_path);
      }
      manifest(o, "pipeline", c, inputs, outs);
      std::cout << out.trains.size() << " trains\n";
    } else if (eig->parsed()) {
      const PipelineConfig c = load_config(o);
      const auto ev_values = window_spectrum(load_journeys(journeys_path), c, window);
      write_file(dir / "spectrum.csv", render([&](std::ostream& s) { write_spectrum(s, ev_values); }));
      manifest(o, "spectrum", c, {journeys_path}, {"spectrum.csv"});
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
