#include "wtt/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

namespace wtt {

std::vector<int> station_set(int line_length, std::span<const int> excluded) {
  std::vector<int> out;
  for (int s = 0; s < line_length; ++s)
    if (std::find(excluded.begin(), excluded.end(), s) == excluded.end()) out.push_back(s);
  return out;
}

JourneyVector vectorize(const Journey& journey, std::span<const int> stations) {
  JourneyVector v;
  v.stations.assign(stations.begin(), stations.end());
  v.entries.assign(stations.size(), kUnobserved);
  bool any = false;
  for (const auto& leg : journey.legs) {
    auto it = std::find(stations.begin(), stations.end(), leg.station);
    if (it == stations.end()) continue;
    v.entries[static_cast<std::size_t>(it - stations.begin())] = 0.5 * static_cast<double>(leg.midpoint_x2());
    any = true;
  }
  if (!any) throw DataError("vectorize: journey has no leg in the station set");
  return v;
}

std::size_t l0_norm(std::span<const double> v) {
  return static_cast<std::size_t>(std::count_if(v.begin(), v.end(), [](double x) { return std::isfinite(x); }));
}

double linf_norm(std::span<const double> v) {
  double best = -1.0;
  for (double x : v)
    if (std::isfinite(x)) best = std::max(best, std::abs(x));
  return best < 0.0 ? kUnobserved : best;
}

JourneyVector vec_difference(const JourneyVector& a, const JourneyVector& b) {
  if (a.stations != b.stations || a.entries.size() != b.entries.size())
    throw DataError("vec_difference: station sets differ");
  JourneyVector d;
  d.stations = a.stations;
  d.entries.resize(a.entries.size());
  for (std::size_t i = 0; i < a.entries.size(); ++i) {
    const double x = a.entries[i];
    const double y = b.entries[i];
    d.entries[i] = (std::isfinite(x) && std::isfinite(y)) ? x - y : kUnobserved;
  }
  return d;
}

void validate(const SimilarityMetric& metric) {
  if (const auto* h = std::get_if<HardMetric>(&metric)) {
    if (!(h->tau > 0.0)) throw ConfigError("similarity: tau must be > 0");
  } else if (const auto* s = std::get_if<SoftMetric>(&metric)) {
    if (!(s->two_sigma_sq > 0.0)) throw ConfigError("similarity: two_sigma_sq must be > 0");
  }
}

double similarity(std::span<const double> a, std::span<const double> b, const SimilarityMetric& metric) {
  if (a.size() != b.size()) throw DataError("similarity: vector lengths differ");
  std::size_t common = 0;
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::isfinite(a[i]) && std::isfinite(b[i])) {
      ++common;
      worst = std::max(worst, std::abs(a[i] - b[i]));
    }
  }
  if (common == 0) return 0.0;
  if (const auto* h = std::get_if<HardMetric>(&metric))
    return worst <= h->tau ? static_cast<double>(common) : 0.0;
  const auto& s = std::get<SoftMetric>(metric);
  return static_cast<double>(common) * std::exp(-(worst * worst) / s.two_sigma_sq);
}

double similarity(const JourneyVector& a, const JourneyVector& b, const SimilarityMetric& metric) {
  if (a.stations != b.stations) throw DataError("similarity: station sets differ");
  return similarity(std::span<const double>(a.entries), std::span<const double>(b.entries), metric);
}

double SimilarityGraph::sparsity() const {
  if (vertices < 2) return 1.0;
  const double pairs = 0.5 * static_cast<double>(vertices) * (vertices - 1);
  return 1.0 - static_cast<double>(edges.size()) / pairs;
}

SimilarityGraph build_graph(std::span<const JourneyVector> vectors, const SimilarityMetric& metric,
                            const GraphOptions& options) {
  validate(metric);
  SimilarityGraph g;
  g.vertices = static_cast<int>(vectors.size());
  if (vectors.empty()) return g;

  const std::size_t dim = vectors.front().entries.size();
  std::vector<double> lo(vectors.size()), hi(vectors.size());
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (vectors[i].entries.size() != dim) throw DataError("build_graph: vectors of different length");
    lo[i] = kUnobserved;
    hi[i] = -kUnobserved;
    for (double x : vectors[i].entries)
      if (std::isfinite(x)) {
        lo[i] = std::min(lo[i], x);
        hi[i] = std::max(hi[i], x);
      }
  }

  const double cutoff = std::holds_alternative<HardMetric>(metric) ? std::get<HardMetric>(metric).tau
                                                                  : options.soft_cutoff;
  std::vector<int> order(vectors.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return lo[x] < lo[y]; });

  for (std::size_t p = 0; p < order.size(); ++p) {
    const int i = order[p];
    if (!std::isfinite(lo[i])) continue;
    for (std::size_t q = p + 1; q < order.size(); ++q) {
      const int j = order[q];
      if (!(lo[j] <= hi[i] + cutoff)) break;
      const double w = similarity(std::span<const double>(vectors[i].entries),
                                  std::span<const double>(vectors[j].entries), metric);
      if (w > 0.0) g.edges.push_back({std::min(i, j), std::max(i, j), w});
    }
  }
  std::sort(g.edges.begin(), g.edges.end(),
            [](const Edge& a, const Edge& b) { return a.i != b.i ? a.i < b.i : a.j < b.j; });
  return g;
}

void write_graph(std::ostream& out, const SimilarityGraph& graph) {
  out << "vertices " << graph.vertices << '\n';
  std::ostringstream line;
  line.precision(17);
  for (const auto& e : graph.edges) {
    line.str("");
    line << e.i << ' ' << e.j << ' ' << e.weight << '\n';
    out << line.str();
  }
}

SimilarityGraph read_graph(std::istream& in) {
  SimilarityGraph g;
  std::string word;
  if (!(in >> word >> g.vertices) || word != "vertices" || g.vertices < 0)
    throw DataError("graph: expected 'vertices N' header");
  Edge e;
  while (in >> e.i >> e.j >> e.weight) {
    if (e.i < 0 || e.j < 0 || e.i >= g.vertices || e.j >= g.vertices || e.i == e.j || !(e.weight > 0.0))
      throw DataError("graph: invalid edge");
    if (e.i > e.j) std::swap(e.i, e.j);
    g.edges.push_back(e);
  }
  std::sort(g.edges.begin(), g.edges.end(),
            [](const Edge& a, const Edge& b) { return a.i != b.i ? a.i < b.i : a.j < b.j; });
  return g;
}

}  // namespace wtt
